// serialize.hpp
// JSON forms of pair states, field states and conversion reports.
//
// A pure pair is an array of 4 [re, im] pairs in the order (--, -+, +-, ++);
// a mixed pair is 16 [re, im] pairs of its density, row-major. Pair files
// hold {"pairs": [...]} for pure lists or {"pairs_density": [...]}.

#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "entconv/evolution.hpp"
#include "entconv/states.hpp"

namespace entconv {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

nlohmann::json pair_to_json(const QubitPairState& pair);
/// Accepts 4 or 16 [re, im] entries. Norm or trace off by at most 1e-6 is
/// renormalized; anything else raises ParseError.
QubitPairState pair_from_json(const nlohmann::json& j);

nlohmann::json pairs_to_json(std::span<const QubitPairState> pairs);
std::vector<QubitPairState> pairs_from_json(const nlohmann::json& j);

/// {"cutoff", "tail_weight", "coefficients": [[a, b, re, im], ...]}
nlohmann::json cv_state_to_json(const PureCVState& state);
/// {"cutoff", "density": [[[re, im], ...], ...]}
nlohmann::json cv_density_to_json(const CVDensity& state);
nlohmann::json report_to_json(const ConversionReport& report);

}  // namespace entconv
