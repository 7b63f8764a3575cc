#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tracelab/errors.hpp"
#include "tracelab/tail.hpp"

namespace tracelab {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// ---------------------------------------------------------------------------
// Representations of a nonincreasing nonnegative sequence mu_1 >= mu_2 >= ...
// ---------------------------------------------------------------------------

// Finite list, implicitly zero beyond its length.
struct ExplicitRep {
  std::vector<double> values;
};

// Rule k -> mu_k; sigma walks are capped at materialize_limit terms.
struct ClosedFormRep {
  std::function<double(std::uint64_t)> rule;
  std::uint64_t materialize_limit = (1ull << 24);
};

// Ordered blocks [begin, end), each constant or rule-valued; must tile the
// index range contiguously starting at 1.  end == 0 marks an unbounded block.
struct Segment {
  std::uint64_t begin = 1;
  std::uint64_t end = 0;
  bool constant = true;
  double value = 0.0;
  std::function<double(std::uint64_t)> rule;
};
struct PiecewiseRep {
  std::vector<Segment> segments;
  std::uint64_t materialize_limit = (1ull << 24);  // rule-segment term budget
};

// Flattened spectral stream: strictly decreasing values with multiplicities.
struct Run {
  double value = 0.0;
  std::uint64_t count = 0;
};
struct RunsRep {
  std::vector<Run> runs;
  std::vector<std::uint64_t> cum;  // cumulative counts, filled by constructor
};

// Constant blocks whose boundaries live at factorial scale: block b covers
// indices (end(b-1), end(b)] with end held as log(end) plus an exact integer
// mirror while it fits.  sigma at block ends is a closed form.
struct LogBlock {
  std::uint64_t end_int = 0;  // 0 when the boundary exceeds 2^62
  double log_end = 0.0;
  double log_value = 0.0;
  double sigma_end = 0.0;
};
struct LogBlockRep {
  std::vector<double> head;  // values at indices 1..head.size()
  double head_sigma = 0.0;
  std::vector<LogBlock> blocks;
};

class CharacteristicSequence {
 public:
  using Rep =
      std::variant<ExplicitRep, ClosedFormRep, PiecewiseRep, RunsRep, LogBlockRep>;

  CharacteristicSequence(std::string name, Rep rep, TailDescriptor tail);

  static CharacteristicSequence from_values(std::string name,
                                            std::vector<double> values);
  static CharacteristicSequence zero() { return from_values("zero", {}); }
  static CharacteristicSequence closed_form(std::string name,
                                            std::function<double(std::uint64_t)> rule,
                                            TailDescriptor tail);

  double mu(std::uint64_t k) const;  // k >= 1
  const TailDescriptor& tail() const { return d_->tail; }
  const std::string& name() const { return d_->name; }
  const Rep& rep() const { return d_->rep; }

  // Largest index with mu_k possibly nonzero; nullopt when unbounded.
  std::optional<std::uint64_t> length() const;

  // #{k : mu_k >= v} for v > 0 (monotone galloping search on the rep).
  std::uint64_t count_at_least(double v) const;

 private:
  struct Data {
    std::string name;
    Rep rep;
    TailDescriptor tail;
  };
  std::shared_ptr<const Data> d_;
};

CharacteristicSequence scale_sequence(const CharacteristicSequence& seq,
                                      double lambda);

std::vector<double> materialize_prefix(const CharacteristicSequence& seq,
                                       std::uint64_t n);

// Sorted merge of the two term multisets, materialized to n_terms, with a
// certified merged tail descriptor (diagonal model of the operator sum).
CharacteristicSequence merge_sequences(const CharacteristicSequence& x,
                                       const CharacteristicSequence& y,
                                       std::uint64_t n_terms);

// ---------------------------------------------------------------------------
// Evaluation schedule and compensated prefix sums
// ---------------------------------------------------------------------------

struct IndexSchedule {
  std::vector<std::uint64_t> indices;  // strictly increasing, first >= 2

  static IndexSchedule dyadic(int max_exponent);  // 2, 4, ..., 2^H
  IndexSchedule& add(std::uint64_t k);
  std::uint64_t max_index() const { return indices.empty() ? 0 : indices.back(); }
  bool empty() const { return indices.empty(); }
};

// Compensated partial sums with a resumable cursor; sigma at ascending
// indices costs one pass total.  Dyadic indices crossed along the way are
// cached.  Concurrent reads are safe; extension is serialized internally.
class PrefixSumTable {
 public:
  explicit PrefixSumTable(CharacteristicSequence seq);

  double sigma(std::uint64_t k) const;  // k >= 1
  double gamma(std::uint64_t k) const;  // k >= 2: sigma_k / log k
  const CharacteristicSequence& sequence() const { return seq_; }

 private:
  struct Cursor {
    std::uint64_t pos = 0;  // terms consumed so far
    KahanSum acc;
    std::size_t run_idx = 0;       // RunsRep
    std::uint64_t run_off = 0;     // consumed inside current run
    std::size_t seg_idx = 0;       // PiecewiseRep
  };
  double sigma_closed(std::uint64_t k, bool& handled) const;
  void advance(Cursor& c, std::uint64_t target) const;

  CharacteristicSequence seq_;
  mutable std::mutex mutex_;
  mutable Cursor cursor_;
  mutable std::vector<std::pair<std::uint64_t, double>> cache_;  // sorted by index
};

// Spec-facing functionals.
double mu(const CharacteristicSequence& seq, std::uint64_t k);
double sigma(const PrefixSumTable& table, std::uint64_t k);
double gamma(const PrefixSumTable& table, std::uint64_t k);

// sum_{n<=N} mu_n(x) mu_n(y), compensated; nondecreasing in N.
double pairing_bound(const CharacteristicSequence& x,
                     const CharacteristicSequence& y, std::uint64_t N);

// ---------------------------------------------------------------------------
// Logarithmic-ideal membership diagnostic
// ---------------------------------------------------------------------------

enum class IdealVerdict { member, non_member, inconclusive };

struct AffineLogWitness {
  double C0 = 0.0;  // sigma_n <= C0 + C1 * log n for n >= from
  double C1 = 0.0;
  std::uint64_t from = 2;
  std::string description;
};

struct L1InfReport {
  double sup_gamma_observed = 0.0;
  std::optional<AffineLogWitness> witness;
  IdealVerdict verdict = IdealVerdict::inconclusive;
};

// Membership is only ever certified analytically (from the tail descriptor
// or per-block closed forms); the observed sup over a finite schedule proves
// nothing and is reported as-is.
L1InfReport l1inf_diagnostic(const CharacteristicSequence& seq,
                             const IndexSchedule& schedule);

const char* verdict_name(IdealVerdict v);

}  // namespace tracelab
