// random.cpp

#include "entconv/random.hpp"

#include <cmath>
#include <numbers>

namespace entconv {

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  // Box-Muller, one output per call.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex SeededRng::complex_normal() {
  const double re = normal();
  return {re, normal()};
}

std::uint64_t SeededRng::below(std::uint64_t bound) {
  return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
}

QubitPairState random_pure_pair(SeededRng& rng) {
  PairAmplitudes amps;
  for (auto& a : amps) a = rng.complex_normal();
  return QubitPairState::pure_normalized(amps);
}

QubitPairState random_mixed_pair(SeededRng& rng) {
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rng.complex_normal();
  Eigen::Matrix4cd rho = g * g.adjoint();
  rho /= rho.trace().real();
  // Symmetrize away roundoff so the Hermiticity check is exact.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return QubitPairState::mixed(rho);
}

JointState random_joint_state(SeededRng& rng, FockCutoff cutoff) {
  const std::size_t n = cutoff.levels();
  JointState::Entries entries;
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      PairAmplitudes amps;
      for (auto& c : amps) {
        c = rng.complex_normal();
        total += std::norm(c);
      }
      entries.emplace_hint(entries.end(), FockIndex{a, b}, amps);
    }
  }
  const double scale = 1.0 / std::sqrt(total);
  for (auto& [idx, amps] : entries)
    for (auto& c : amps) c *= scale;
  return JointState(cutoff, std::move(entries));
}

}  // namespace entconv
