// dense_oracle.cpp

#include "entconv/dense_oracle.hpp"

#include <cmath>
#include <numbers>

namespace entconv {

namespace {

constexpr std::size_t kVectorGuard = 64;
constexpr std::size_t kDensityGuard = 16;

Eigen::Index joint_index(std::size_t n, std::size_t a, std::size_t b, std::size_t qc,
                         std::size_t qd) {
  return static_cast<Eigen::Index>((a * n + b) * 4 + 2 * qc + qd);
}

// Embeds a side propagator into the full (A, B, C, D) space.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& u, std::size_t n, Side side) {
  const auto dim = static_cast<Eigen::Index>(n * n * 4);
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t x = 0; x < n; ++x) {          // acted-on mode, input
    for (std::size_t x2 = 0; x2 < n; ++x2) {     // acted-on mode, output
      for (std::size_t q = 0; q < 2; ++q) {
        for (std::size_t q2 = 0; q2 < 2; ++q2) {
          const Complex value = u(static_cast<Eigen::Index>(x2 * 2 + q2),
                                  static_cast<Eigen::Index>(x * 2 + q));
          if (value == Complex{}) continue;
          for (std::size_t y = 0; y < n; ++y) {  // spectator mode
            for (std::size_t r = 0; r < 2; ++r) {  // spectator qubit
              if (side == Side::AC) {
                full(joint_index(n, x2, y, q2, r), joint_index(n, x, y, q, r)) = value;
              } else {
                full(joint_index(n, y, x2, r, q2), joint_index(n, y, x, r, q)) = value;
              }
            }
          }
        }
      }
    }
  }
  return full;
}

}  // namespace

Eigen::MatrixXcd side_unitary(unsigned k, FockCutoff cutoff, Direction direction) {
  if (k < 1 || k > 30) throw std::invalid_argument("step index out of range");
  const std::size_t n = cutoff.levels();
  const std::size_t half = std::size_t{1} << (k - 1);
  const auto dim = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  const double t = std::numbers::pi / std::pow(2.0, k);
  for (std::size_t m = half; m < n; ++m) {
    const double theta = static_cast<double>(m) * t;
    const auto hi = static_cast<Eigen::Index>(m * 2);
    const auto lo = static_cast<Eigen::Index>((m - half) * 2 + 1);
    u(hi, hi) = std::cos(theta);
    u(lo, lo) = std::cos(theta);
    u(hi, lo) = Complex{0.0, -std::sin(theta)};
    u(lo, hi) = Complex{0.0, -std::sin(theta)};
  }
  if (direction == Direction::Reverse) return u.adjoint();
  return u;
}

Eigen::MatrixXcd full_step_unitary(unsigned k, FockCutoff cutoff, Direction direction) {
  const std::size_t n = cutoff.levels();
  if (n > kDensityGuard) throw std::invalid_argument("full step propagator limited to cutoff 16");
  const Eigen::MatrixXcd u = side_unitary(k, cutoff, direction);
  return embed(u, n, Side::BD) * embed(u, n, Side::AC);
}

Eigen::VectorXcd to_dense_vector(const JointState& joint) {
  const std::size_t n = joint.cutoff().levels();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n * n * 4));
  for (const auto& [idx, amps] : joint.entries()) {
    for (std::size_t q = 0; q < 4; ++q) psi(joint_index(n, idx.a, idx.b, q / 2, q % 2)) = amps[q];
  }
  return psi;
}

JointState from_dense_vector(const Eigen::VectorXcd& psi, FockCutoff cutoff) {
  const std::size_t n = cutoff.levels();
  if (psi.size() != static_cast<Eigen::Index>(n * n * 4)) {
    throw std::invalid_argument("dense joint vector has the wrong length");
  }
  JointState::Entries entries;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      PairAmplitudes amps;
      bool any = false;
      for (std::size_t q = 0; q < 4; ++q) {
        amps[q] = psi(joint_index(n, a, b, q / 2, q % 2));
        any = any || amps[q] != Complex{};
      }
      if (any) entries.emplace(FockIndex{a, b}, amps);
    }
  }
  return JointState(cutoff, std::move(entries));
}

Eigen::VectorXcd dense_oracle_step(const Eigen::VectorXcd& psi, FockCutoff cutoff, Side side,
                                   unsigned k, Direction direction) {
  const std::size_t n = cutoff.levels();
  if (n > kVectorGuard) throw std::invalid_argument("dense oracle vector limited to cutoff 64");
  if (psi.size() != static_cast<Eigen::Index>(n * n * 4)) {
    throw std::invalid_argument("dense joint vector has the wrong length");
  }
  const Eigen::MatrixXcd u = side_unitary(k, cutoff, direction);

  // Rows (a, q_C), columns (b, q_D).
  const auto dim = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXcd x(dim, dim);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t qc = 0; qc < 2; ++qc)
        for (std::size_t qd = 0; qd < 2; ++qd)
          x(static_cast<Eigen::Index>(a * 2 + qc), static_cast<Eigen::Index>(b * 2 + qd)) =
              psi(joint_index(n, a, b, qc, qd));

  const Eigen::MatrixXcd y = side == Side::AC ? Eigen::MatrixXcd(u * x)
                                              : Eigen::MatrixXcd(x * u.transpose());

  Eigen::VectorXcd out(psi.size());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t qc = 0; qc < 2; ++qc)
        for (std::size_t qd = 0; qd < 2; ++qd)
          out(joint_index(n, a, b, qc, qd)) =
              y(static_cast<Eigen::Index>(a * 2 + qc), static_cast<Eigen::Index>(b * 2 + qd));
  return out;
}

Eigen::MatrixXcd dense_oracle_step(const Eigen::MatrixXcd& rho, FockCutoff cutoff, Side side,
                                   unsigned k, Direction direction) {
  const std::size_t n = cutoff.levels();
  if (n > kDensityGuard) throw std::invalid_argument("dense oracle density limited to cutoff 16");
  const auto dim = static_cast<Eigen::Index>(n * n * 4);
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("dense joint density has the wrong shape");
  }
  const Eigen::MatrixXcd full = embed(side_unitary(k, cutoff, direction), n, side);
  return full * rho * full.adjoint();
}

}  // namespace entconv
