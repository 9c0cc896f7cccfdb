// serialize.cpp

#include "entconv/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace entconv {

namespace {

constexpr double kRenormalizeSlack = 1e-6;

nlohmann::json complex_to_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a [re, im] pair, got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json pair_to_json(const QubitPairState& pair) {
  nlohmann::json out = nlohmann::json::array();
  if (pair.is_pure()) {
    for (const auto& c : pair.amplitudes()) out.push_back(complex_to_json(c));
  } else {
    const Eigen::Matrix4cd rho = pair.density();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out.push_back(complex_to_json(rho(i, j)));
  }
  return out;
}

QubitPairState pair_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("qubit pair must be an array");
  if (j.size() == 4) {
    PairAmplitudes amps;
    double total = 0.0;
    for (std::size_t q = 0; q < 4; ++q) {
      amps[q] = complex_from_json(j[q]);
      total += std::norm(amps[q]);
    }
    if (std::abs(total - 1.0) > kRenormalizeSlack) {
      throw ParseError("qubit pair amplitudes have squared norm " + std::to_string(total));
    }
    return QubitPairState::pure_normalized(amps);
  }
  if (j.size() == 16) {
    Eigen::Matrix4cd rho;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) rho(i, k) = complex_from_json(j[static_cast<std::size_t>(4 * i + k)]);
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > kRenormalizeSlack) {
      throw ParseError("qubit pair density has trace " + std::to_string(trace));
    }
    rho /= trace;
    try {
      return QubitPairState::mixed(rho);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("qubit pair needs 4 amplitudes or 16 density entries, got " +
                   std::to_string(j.size()));
}

nlohmann::json pairs_to_json(std::span<const QubitPairState> pairs) {
  const bool all_pure =
      std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.is_pure(); });
  nlohmann::json list = nlohmann::json::array();
  for (const auto& pair : pairs) {
    list.push_back(all_pure ? pair_to_json(pair) : pair_to_json(QubitPairState::mixed(pair.density())));
  }
  return nlohmann::json{{all_pure ? "pairs" : "pairs_density", list}};
}

std::vector<QubitPairState> pairs_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("pair file must be a JSON object");
  const bool has_pure = j.contains("pairs");
  const bool has_mixed = j.contains("pairs_density");
  if (has_pure == has_mixed) {
    throw ParseError("pair file needs exactly one of \"pairs\" or \"pairs_density\"");
  }
  const auto& list = has_pure ? j.at("pairs") : j.at("pairs_density");
  if (!list.is_array() || list.empty()) throw ParseError("pair list must be a non-empty array");
  std::vector<QubitPairState> pairs;
  for (const auto& item : list) {
    const std::size_t expected = has_pure ? 4 : 16;
    if (!item.is_array() || item.size() != expected) {
      throw ParseError(std::string("each entry of \"") + (has_pure ? "pairs" : "pairs_density") +
                       "\" needs " + std::to_string(expected) + " [re, im] entries");
    }
    pairs.push_back(pair_from_json(item));
  }
  return pairs;
}

nlohmann::json cv_state_to_json(const PureCVState& state) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [idx, c] : state.entries()) {
    coeffs.push_back({idx.a, idx.b, c.real(), c.imag()});
  }
  return {{"cutoff", state.cutoff().levels()},
          {"tail_weight", state.tail_weight()},
          {"coefficients", coeffs}};
}

nlohmann::json cv_density_to_json(const CVDensity& state) {
  nlohmann::json rows = nlohmann::json::array();
  const auto& rho = state.matrix();
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < rho.cols(); ++k) row.push_back(complex_to_json(rho(i, k)));
    rows.push_back(row);
  }
  return {{"cutoff", state.cutoff().levels()}, {"density", rows}};
}

nlohmann::json report_to_json(const ConversionReport& report) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"step", s.step},
                     {"defect", s.defect},
                     {"residual_norm", s.residual_norm},
                     {"tail_weight", s.tail_weight},
                     {"pair", pair_to_json(s.pair)}});
  }
  return {{"steps", steps}, {"max_defect", report.max_defect()}};
}

}  // namespace entconv
