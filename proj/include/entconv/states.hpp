// states.hpp
// Truncated two-mode field states, qubit-pair states and the CV Werner mixture.

#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <variant>

#include <Eigen/Dense>

namespace entconv {

using Complex = std::complex<double>;

/// Raised when a truncated state would discard more probability than allowed.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a conversion step violates a protocol postcondition
/// (non-factorizing output, leftover pair excitation, unsupported input).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of Fock levels kept per mode. Basis indices run 0..levels()-1.
class FockCutoff {
 public:
  explicit FockCutoff(std::size_t levels);

  std::size_t levels() const noexcept { return levels_; }
  bool is_multiple_of_pow2(unsigned k) const noexcept;
  /// Throws std::invalid_argument unless levels() is a multiple of 2^k.
  void require_multiple_of_pow2(unsigned k) const;

  friend bool operator==(const FockCutoff&, const FockCutoff&) = default;

 private:
  std::size_t levels_;
};

struct TruncationPolicy {
  double tolerance = 1e-12;
  bool allow_excess_tail = false;
};

/// Squeezing strength, stored as both lambda = tanh(r) and r.
class TMSVParams {
 public:
  static TMSVParams from_lambda(double lambda);
  static TMSVParams from_r(double r);

  double lambda() const noexcept { return lambda_; }
  double r() const noexcept { return r_; }

 private:
  TMSVParams(double lambda, double r) : lambda_(lambda), r_(r) {}
  double lambda_;
  double r_;
};

/// Fock labels (photon number in mode A, photon number in mode B).
struct FockIndex {
  std::size_t a = 0;
  std::size_t b = 0;
  auto operator<=>(const FockIndex&) const = default;
};

/// Pure two-mode state stored sparsely: only nonzero coefficients c[a][b]
/// are kept, ordered by (a, b). Immutable after construction.
class PureCVState {
 public:
  using Entries = std::map<FockIndex, Complex>;

  /// Rescales `entries` to unit norm. `tail_weight` is the probability the
  /// untruncated parent state had outside the cutoff.
  static PureCVState normalized(FockCutoff cutoff, Entries entries,
                                double tail_weight = 0.0);
  static PureCVState vacuum(FockCutoff cutoff);

  FockCutoff cutoff() const noexcept { return cutoff_; }
  const Entries& entries() const noexcept { return entries_; }
  Complex coeff(std::size_t a, std::size_t b) const;
  double tail_weight() const noexcept { return tail_weight_; }
  double norm() const;

  /// Dense coefficient matrix; only for cutoffs up to 4096.
  Eigen::MatrixXcd dense() const;

 private:
  PureCVState(FockCutoff cutoff, Entries entries, double tail_weight)
      : cutoff_(cutoff), entries_(std::move(entries)), tail_weight_(tail_weight) {}

  FockCutoff cutoff_;
  Entries entries_;
  double tail_weight_;
};

/// Mixture of Fock product states |a b><a b| with probabilities w(a, b).
class DiagonalCVMixture {
 public:
  static DiagonalCVMixture normalized(FockCutoff cutoff, Eigen::MatrixXd weights,
                                      double tail_weight = 0.0);

  FockCutoff cutoff() const noexcept { return cutoff_; }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  double weight(std::size_t a, std::size_t b) const { return weights_(a, b); }
  double tail_weight() const noexcept { return tail_weight_; }

 private:
  DiagonalCVMixture(FockCutoff cutoff, Eigen::MatrixXd weights, double tail_weight)
      : cutoff_(cutoff), weights_(std::move(weights)), tail_weight_(tail_weight) {}

  FockCutoff cutoff_;
  Eigen::MatrixXd weights_;
  double tail_weight_;
};

/// p |TMSV><TMSV| + (1-p) thermal, kept as its two branches.
class WernerCVState {
 public:
  WernerCVState(double p, double lambda, double v, PureCVState pure_branch,
                DiagonalCVMixture thermal_branch);

  double p() const noexcept { return p_; }
  double lambda() const noexcept { return lambda_; }
  double v() const noexcept { return v_; }
  double pure_weight() const noexcept { return p_; }
  double thermal_weight() const noexcept { return 1.0 - p_; }
  const PureCVState& pure_branch() const noexcept { return pure_; }
  const DiagonalCVMixture& thermal_branch() const noexcept { return thermal_; }
  FockCutoff cutoff() const noexcept { return pure_.cutoff(); }
  double trace() const;

 private:
  double p_;
  double lambda_;
  double v_;
  PureCVState pure_;
  DiagonalCVMixture thermal_;
};

/// Dense two-mode density matrix, row/column index a * levels + b.
/// Only small cutoffs (levels <= 64) are representable.
class CVDensity {
 public:
  CVDensity(FockCutoff cutoff, Eigen::MatrixXcd rho);

  FockCutoff cutoff() const noexcept { return cutoff_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }

 private:
  FockCutoff cutoff_;
  Eigen::MatrixXcd rho_;
};

// Qubit basis ordering (--, -+, +-, ++); index = 2 * q_C + q_D with |-> = 0.
using PairAmplitudes = std::array<Complex, 4>;

/// One C-D qubit pair, pure or mixed.
class QubitPairState {
 public:
  /// Requires unit norm within 1e-12.
  static QubitPairState pure(const PairAmplitudes& amps);
  static QubitPairState pure_normalized(PairAmplitudes amps);
  /// Requires a Hermitian, positive semidefinite, unit-trace matrix.
  static QubitPairState mixed(const Eigen::Matrix4cd& rho);
  /// |-->
  static QubitPairState blank();

  bool is_pure() const noexcept { return std::holds_alternative<PairAmplitudes>(state_); }
  const PairAmplitudes& amplitudes() const;
  Eigen::Matrix4cd density() const;

 private:
  explicit QubitPairState(std::variant<PairAmplitudes, Eigen::Matrix4cd> s)
      : state_(std::move(s)) {}
  std::variant<PairAmplitudes, Eigen::Matrix4cd> state_;
};

PureCVState make_tmsv(const TMSVParams& params, FockCutoff cutoff,
                      const TruncationPolicy& policy = {});
DiagonalCVMixture make_thermal(double v, FockCutoff cutoff,
                               const TruncationPolicy& policy = {});
WernerCVState make_werner(double p, double lambda, double v, FockCutoff cutoff,
                          const TruncationPolicy& policy = {});

double tail_weight(const PureCVState& state);
double tail_weight(const DiagonalCVMixture& state);
double tail_weight(const WernerCVState& state);

/// <a|b> summed over the common support.
Complex overlap(const PureCVState& a, const PureCVState& b);
/// |<a|b>|^2
double fidelity(const PureCVState& a, const PureCVState& b);
/// max |a - e^(i phi) b| with phi the phase of <b|a>.
double max_diff_up_to_phase(const PureCVState& a, const PureCVState& b);

/// Smallest multiple of 2^k, at least `minimum`, whose TMSV tail lambda^(2N)
/// is within `tolerance`.
FockCutoff tmsv_cutoff_for(double lambda, unsigned k, double tolerance = 1e-12,
                           std::size_t minimum = 2);

/// Smallest multiple of 2^k whose TMSV and thermal tails are both within `tolerance`.
FockCutoff werner_cutoff_for(double lambda, double v, unsigned k, double tolerance = 1e-12,
                             std::size_t minimum = 2);

}  // namespace entconv
