#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tracelab/estimates.hpp"
#include "tracelab/sequence.hpp"

namespace tracelab {

// Partial power sum with a certified tail enclosure from the descriptor.
struct ZetaEval {
  double s = 0.0;
  double partial_sum = 0.0;
  double tail_low = 0.0;
  double tail_high = 0.0;
  std::uint64_t terms = 0;  // effective cut

  double value_low() const { return partial_sum + tail_low; }
  double value_high() const { return partial_sum + tail_high; }
  double value_mid() const { return partial_sum + 0.5 * (tail_low + tail_high); }
  double halfwidth() const { return 0.5 * (tail_high - tail_low); }
};

// sum_n mu_n^s bracketed by integral comparison beyond N_cut.  Sequences with
// mu_1 > 1 are normalized first and the homogeneity factor mu_1^s reapplied.
ZetaEval zeta(const CharacteristicSequence& seq, double s, std::uint64_t N_cut);

struct ResidueConfig {
  int levels = 12;               // evaluate at s = 1 + 2^-j, j = 2..levels
  std::uint64_t N_cut = 0;       // 0: materialized length, else 2^20
  double bracket_limit = 0.5;    // refuse when tail halfwidth exceeds this
                                 // fraction of the evaluated value
};

// lim_{s->1+} (s-1) zeta(s) by first-order Richardson in (s-1).  Summable
// tails certify the zero residue analytically.
ResidueEstimate residue_at_one(const CharacteristicSequence& seq,
                               const ResidueConfig& config = {});

// alpha(t) = #{n : mu_n >= 1/t}
std::uint64_t counting(const CharacteristicSequence& seq, double t);

// Fits alpha(t)/t over the schedule; flags sequences whose ratio keeps
// drifting or oscillating (not asymptotically linear counting).
ResidueEstimate weyl_slope(const CharacteristicSequence& seq,
                           const std::vector<double>& t_schedule);

std::vector<double> geometric_t_schedule(double t_min, double t_max,
                                         int per_octave = 2);

// CSV: s, partial_sum, tail_low, tail_high, (s-1)*zeta_mid
void write_residue_csv(std::ostream& os, const CharacteristicSequence& seq,
                       const ResidueConfig& config = {});

}  // namespace tracelab
