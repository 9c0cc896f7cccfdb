// random.hpp
// Seeded generator for randomized checks. Draws come from std::mt19937_64;
// uniforms take the top 53 bits of one draw, normals use Box-Muller. The
// stream therefore depends only on the seed.

#pragma once

#include <cstdint>
#include <random>

#include "entconv/evolution.hpp"
#include "entconv/states.hpp"

namespace entconv {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  Complex complex_normal();
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Pure pair with independent complex Gaussian amplitudes, normalized.
QubitPairState random_pure_pair(SeededRng& rng);
/// G G^dagger / tr with G a 4x4 complex Gaussian matrix.
QubitPairState random_mixed_pair(SeededRng& rng);
/// Dense random joint state over the full cutoff, normalized.
JointState random_joint_state(SeededRng& rng, FockCutoff cutoff);

}  // namespace entconv
