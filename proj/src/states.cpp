// states.cpp

#include "entconv/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace entconv {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-10;
constexpr std::size_t kDenseGuard = 4096;
constexpr std::size_t kThermalGuard = 2048;
constexpr std::size_t kDensityGuard = 64;

void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1), got " +
                                std::to_string(x));
  }
}

void check_tail(double tail, const TruncationPolicy& policy, const char* what) {
  if (tail > policy.tolerance && !policy.allow_excess_tail) {
    throw TruncationError(std::string(what) + " truncation discards weight " +
                          std::to_string(tail) + " above tolerance " +
                          std::to_string(policy.tolerance));
  }
}

}  // namespace

FockCutoff::FockCutoff(std::size_t levels) : levels_(levels) {
  if (levels < 2) {
    throw std::invalid_argument("Fock cutoff needs at least 2 levels");
  }
}

bool FockCutoff::is_multiple_of_pow2(unsigned k) const noexcept {
  if (k >= 63) return false;
  return levels_ % (std::size_t{1} << k) == 0;
}

void FockCutoff::require_multiple_of_pow2(unsigned k) const {
  if (!is_multiple_of_pow2(k)) {
    throw std::invalid_argument("cutoff " + std::to_string(levels_) +
                                " is not a multiple of 2^" + std::to_string(k));
  }
}

TMSVParams TMSVParams::from_lambda(double lambda) {
  check_unit_interval(lambda, "lambda");
  return TMSVParams(lambda, std::atanh(lambda));
}

TMSVParams TMSVParams::from_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("squeezing parameter r must be finite and >= 0");
  }
  double lambda = std::tanh(r);
  if (lambda >= 1.0) {
    throw std::invalid_argument("squeezing parameter r too large: tanh(r) rounds to 1");
  }
  return TMSVParams(lambda, r);
}

// ---------------------------------------------------------------------------

PureCVState PureCVState::normalized(FockCutoff cutoff, Entries entries, double tail_weight) {
  double sum = 0.0;
  for (auto it = entries.begin(); it != entries.end();) {
    if (it->first.a >= cutoff.levels() || it->first.b >= cutoff.levels()) {
      throw std::invalid_argument("coefficient index outside the Fock cutoff");
    }
    if (it->second == Complex{}) {
      it = entries.erase(it);
      continue;
    }
    sum += std::norm(it->second);
    ++it;
  }
  if (!(sum > 0.0)) {
    throw std::invalid_argument("cannot normalize a zero CV state");
  }
  const double scale = 1.0 / std::sqrt(sum);
  for (auto& [idx, c] : entries) c *= scale;
  return PureCVState(cutoff, std::move(entries), tail_weight);
}

PureCVState PureCVState::vacuum(FockCutoff cutoff) {
  return PureCVState(cutoff, Entries{{FockIndex{0, 0}, Complex{1.0, 0.0}}}, 0.0);
}

Complex PureCVState::coeff(std::size_t a, std::size_t b) const {
  auto it = entries_.find(FockIndex{a, b});
  return it == entries_.end() ? Complex{} : it->second;
}

double PureCVState::norm() const {
  double sum = 0.0;
  for (const auto& [idx, c] : entries_) sum += std::norm(c);
  return std::sqrt(sum);
}

Eigen::MatrixXcd PureCVState::dense() const {
  const auto n = cutoff_.levels();
  if (n > kDenseGuard) {
    throw std::invalid_argument("dense view requested for cutoff above 4096");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [idx, c] : entries_) m(idx.a, idx.b) = c;
  return m;
}

// ---------------------------------------------------------------------------

DiagonalCVMixture DiagonalCVMixture::normalized(FockCutoff cutoff, Eigen::MatrixXd weights,
                                                double tail_weight) {
  const auto n = static_cast<Eigen::Index>(cutoff.levels());
  if (weights.rows() != n || weights.cols() != n) {
    throw std::invalid_argument("weight matrix shape does not match the cutoff");
  }
  if ((weights.array() < 0.0).any()) {
    throw std::invalid_argument("diagonal mixture weights must be nonnegative");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) {
    throw std::invalid_argument("cannot normalize a zero mixture");
  }
  weights /= total;
  return DiagonalCVMixture(cutoff, std::move(weights), tail_weight);
}

// ---------------------------------------------------------------------------

WernerCVState::WernerCVState(double p, double lambda, double v, PureCVState pure_branch,
                             DiagonalCVMixture thermal_branch)
    : p_(p), lambda_(lambda), v_(v), pure_(std::move(pure_branch)),
      thermal_(std::move(thermal_branch)) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("Werner weight p must lie in [0, 1]");
  }
  if (!(pure_.cutoff() == thermal_.cutoff())) {
    throw std::invalid_argument("Werner branches must share a cutoff");
  }
}

double WernerCVState::trace() const {
  return p_ * pure_.norm() * pure_.norm() + (1.0 - p_) * thermal_.weights().sum();
}

// ---------------------------------------------------------------------------

CVDensity::CVDensity(FockCutoff cutoff, Eigen::MatrixXcd rho)
    : cutoff_(cutoff), rho_(std::move(rho)) {
  const auto n = cutoff.levels();
  if (n > kDensityGuard) {
    throw std::invalid_argument("dense CV density limited to cutoff 64");
  }
  const auto dim = static_cast<Eigen::Index>(n * n);
  if (rho_.rows() != dim || rho_.cols() != dim) {
    throw std::invalid_argument("CV density shape does not match the cutoff");
  }
}

// ---------------------------------------------------------------------------

QubitPairState QubitPairState::pure(const PairAmplitudes& amps) {
  double sum = 0.0;
  for (const auto& a : amps) sum += std::norm(a);
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw std::invalid_argument("qubit pair amplitudes are not unit norm");
  }
  return QubitPairState(amps);
}

QubitPairState QubitPairState::pure_normalized(PairAmplitudes amps) {
  double sum = 0.0;
  for (const auto& a : amps) sum += std::norm(a);
  if (!(sum > 0.0)) {
    throw std::invalid_argument("cannot normalize a zero qubit pair");
  }
  const double scale = 1.0 / std::sqrt(sum);
  for (auto& a : amps) a *= scale;
  return QubitPairState(amps);
}

QubitPairState QubitPairState::mixed(const Eigen::Matrix4cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw std::invalid_argument("qubit pair density is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > kNormTolerance) {
    throw std::invalid_argument("qubit pair density does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kHermitianTolerance) {
    throw std::invalid_argument("qubit pair density is not positive semidefinite");
  }
  return QubitPairState(rho);
}

QubitPairState QubitPairState::blank() {
  return QubitPairState(PairAmplitudes{Complex{1.0, 0.0}, {}, {}, {}});
}

const PairAmplitudes& QubitPairState::amplitudes() const {
  if (const auto* a = std::get_if<PairAmplitudes>(&state_)) return *a;
  throw std::logic_error("amplitudes() called on a mixed qubit pair");
}

Eigen::Matrix4cd QubitPairState::density() const {
  if (const auto* rho = std::get_if<Eigen::Matrix4cd>(&state_)) return *rho;
  const auto& a = std::get<PairAmplitudes>(state_);
  Eigen::Vector4cd psi(a[0], a[1], a[2], a[3]);
  return psi * psi.adjoint();
}

// ---------------------------------------------------------------------------

PureCVState make_tmsv(const TMSVParams& params, FockCutoff cutoff,
                      const TruncationPolicy& policy) {
  const double lambda = params.lambda();
  const auto n = cutoff.levels();
  const double tail = std::pow(lambda, 2.0 * static_cast<double>(n));
  check_tail(tail, policy, "TMSV");

  PureCVState::Entries entries;
  double amp = std::sqrt(1.0 - lambda * lambda);
  for (std::size_t m = 0; m < n && amp != 0.0; ++m) {
    entries.emplace_hint(entries.end(), FockIndex{m, m}, Complex{amp, 0.0});
    amp *= lambda;
  }
  return PureCVState::normalized(cutoff, std::move(entries), tail);
}

DiagonalCVMixture make_thermal(double v, FockCutoff cutoff, const TruncationPolicy& policy) {
  check_unit_interval(v, "v");
  const auto n = cutoff.levels();
  if (n > kThermalGuard) {
    throw std::invalid_argument("thermal mixture limited to cutoff 2048");
  }
  const double mode_tail = std::pow(v, static_cast<double>(n));
  const double tail = 1.0 - (1.0 - mode_tail) * (1.0 - mode_tail);
  check_tail(tail, policy, "thermal");

  // Independent truncated geometric distribution in each mode.
  Eigen::VectorXd mode(n);
  double g = 1.0 - v;
  for (std::size_t m = 0; m < n; ++m) {
    mode(static_cast<Eigen::Index>(m)) = g;
    g *= v;
  }
  mode /= mode.sum();
  Eigen::MatrixXd w = mode * mode.transpose();
  return DiagonalCVMixture::normalized(cutoff, std::move(w), tail);
}

WernerCVState make_werner(double p, double lambda, double v, FockCutoff cutoff,
                          const TruncationPolicy& policy) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("Werner weight p must lie in [0, 1]");
  }
  return WernerCVState(p, lambda, v, make_tmsv(TMSVParams::from_lambda(lambda), cutoff, policy),
                       make_thermal(v, cutoff, policy));
}

double tail_weight(const PureCVState& state) { return state.tail_weight(); }
double tail_weight(const DiagonalCVMixture& state) { return state.tail_weight(); }
double tail_weight(const WernerCVState& state) {
  return state.p() * state.pure_branch().tail_weight() +
         (1.0 - state.p()) * state.thermal_branch().tail_weight();
}

FockCutoff tmsv_cutoff_for(double lambda, unsigned k, double tolerance, std::size_t minimum) {
  check_unit_interval(lambda, "lambda");
  const std::size_t step = std::size_t{1} << k;
  std::size_t n = std::max<std::size_t>(minimum, 2);
  n = (n + step - 1) / step * step;
  while (std::pow(lambda, 2.0 * static_cast<double>(n)) > tolerance) n += step;
  return FockCutoff(n);
}

FockCutoff werner_cutoff_for(double lambda, double v, unsigned k, double tolerance,
                             std::size_t minimum) {
  check_unit_interval(v, "v");
  const std::size_t step = std::size_t{1} << k;
  std::size_t n = tmsv_cutoff_for(lambda, k, tolerance, minimum).levels();
  auto thermal_tail = [v](std::size_t levels) {
    const double kept = 1.0 - std::pow(v, static_cast<double>(levels));
    return 1.0 - kept * kept;
  };
  while (thermal_tail(n) > tolerance) n += step;
  return FockCutoff(n);
}

Complex overlap(const PureCVState& a, const PureCVState& b) {
  Complex sum{};
  for (const auto& [idx, c] : a.entries()) sum += std::conj(c) * b.coeff(idx.a, idx.b);
  return sum;
}

double fidelity(const PureCVState& a, const PureCVState& b) { return std::norm(overlap(a, b)); }

double max_diff_up_to_phase(const PureCVState& a, const PureCVState& b) {
  const Complex ov = overlap(b, a);
  const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex{1.0, 0.0};
  double worst = 0.0;
  for (const auto& [idx, c] : a.entries()) {
    worst = std::max(worst, std::abs(c - phase * b.coeff(idx.a, idx.b)));
  }
  for (const auto& [idx, c] : b.entries()) {
    worst = std::max(worst, std::abs(a.coeff(idx.a, idx.b) - phase * c));
  }
  return worst;
}

}  // namespace entconv
