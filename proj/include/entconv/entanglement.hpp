// entanglement.hpp
// Entropy of entanglement, partial transposition and logarithmic negativity.
// All logarithms are base 2.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "entconv/evolution.hpp"
#include "entconv/states.hpp"

namespace entconv {

/// Squared Schmidt coefficients in nonincreasing order.
using SchmidtSpectrum = std::vector<double>;

/// Schmidt spectrum across A|B. The coefficient matrix is split into its
/// connected blocks first, so sparse states of large cutoff stay cheap.
SchmidtSpectrum schmidt_spectrum(const PureCVState& state);
/// C|D split of a pure pair.
SchmidtSpectrum schmidt_spectrum(const QubitPairState& pair);
/// AC|BD split of a joint field + pair state.
SchmidtSpectrum schmidt_spectrum(const JointState& joint);

/// -sum p log2 p, ignoring p < 1e-15. Throws if the spectrum is not normalized.
double entropy_from_spectrum(const SchmidtSpectrum& spectrum);

double entropy_of_entanglement(const PureCVState& state);
double entropy_of_entanglement(const QubitPairState& pair);
double entropy_of_entanglement(const JointState& joint);

enum class Subsystem { First, Second };

/// Transposes the indices of one factor of a (dim_first x dim_second) density.
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, std::size_t dim_first,
                                   std::size_t dim_second, Subsystem subsystem = Subsystem::First);

/// log2 of the trace norm of the partial transpose. Dense; total dimension
/// up to 4096. Not clamped: returns 0 exactly when the trace norm is 1.
double log_negativity_dense(const Eigen::MatrixXcd& rho, std::size_t dim_first,
                            std::size_t dim_second);
double log_negativity(const QubitPairState& pair);
double log_negativity(const CVDensity& state);

struct PTEigenvalue {
  double value = 0.0;
  std::size_t multiplicity = 1;
};

/// Eigenvalues of a partially transposed density with multiplicities.
class PTSpectrum {
 public:
  PTSpectrum(std::vector<PTEigenvalue> values, std::size_t levels);

  const std::vector<PTEigenvalue>& values() const noexcept { return values_; }
  /// Fock levels per mode that were enumerated.
  std::size_t levels() const noexcept { return levels_; }
  std::size_t count() const;
  double trace() const;
  double trace_norm() const;
  double min_value() const;
  /// Every eigenvalue repeated by multiplicity, ascending.
  std::vector<double> expanded_sorted() const;

 private:
  std::vector<PTEigenvalue> values_;
  std::size_t levels_;
};

enum class WernerNormalization {
  Infinite,   // prefactors of the untruncated state
  Truncated,  // prefactors renormalized to levels L per mode
};

/// Partial-transpose spectrum of p |TMSV><TMSV| + (1-p) thermal(v) on L levels.
///
/// Diagonal |l l> gives P lambda^(2l) + T v^(2l); each pair m < n gives the
/// 2x2 block eigenvalues T v^(m+n) +- P lambda^(m+n). Blocks sharing m + n
/// are merged into one entry with a multiplicity. With Infinite
/// normalization P = p (1 - lambda^2), T = (1 - p)(1 - v)^2; Truncated
/// divides these by (1 - lambda^(2L)) and (1 - v^L)^2.
PTSpectrum werner_pt_spectrum_cv(double p, double lambda, double v, std::size_t levels,
                                 WernerNormalization normalization);

/// Spectrum of the converted state of `pair_count` qubit pairs (L = 2^K, truncated).
PTSpectrum werner_pt_spectrum_converted(double p, double lambda, double v, unsigned pair_count);

struct UntruncatedSpectrum {
  PTSpectrum spectrum;
  /// Upper bound on the trace norm carried by the omitted blocks.
  double omitted_bound = 0.0;
};

/// Infinite-dimensional spectrum with L chosen so the omitted blocks carry
/// at most `tolerance` of the trace norm.
UntruncatedSpectrum werner_pt_spectrum_untruncated(double p, double lambda, double v,
                                                   double tolerance = 1e-12);

/// log2 sum |x| mult. Throws if the eigenvalues do not sum to 1 within `tolerance`.
double log_negativity_from_spectrum(const PTSpectrum& spectrum, double tolerance = 1e-10);

struct AdditivityCheck {
  double sum_of_pairs = 0.0;
  double of_product = 0.0;
};

/// Sum of the pair log negativities against the log negativity of their
/// tensor product across all-C | all-D. Up to 3 pairs.
AdditivityCheck ln_additivity_check(std::span<const QubitPairState> pairs);

}  // namespace entconv
