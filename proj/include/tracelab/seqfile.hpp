#pragma once

#include <string>
#include <vector>

#include "tracelab/sequence.hpp"

namespace tracelab {

struct NamedSequence {
  std::string name;
  CharacteristicSequence sequence;
};

// Sequence definition file: a JSON array of records {name, kind, ...params}.
// Kinds: explicit (inline "values" array or "path" to one-float-per-line
// text), harmonic, scaled_harmonic (L), geometric (ratio), perturbed
// (L, delta), oscillating, varilly, zero.
std::vector<NamedSequence> load_sequence_file(const std::string& path);

}  // namespace tracelab
