// analytic.hpp
// Closed-form entanglement of the conversion protocol, evaluated directly
// from the formulas and independent of the simulation. Logarithms base 2.

#pragma once

namespace entconv::analytic {

/// Entropy of entanglement of the two-mode squeezed vacuum:
/// cosh^2 r log cosh^2 r - sinh^2 r log sinh^2 r.
double e_tmsv(double lambda);

/// Entanglement of pair k: log(1 + x) - x / (1 + x) log x with x = lambda^(2^k).
double e_pair(unsigned k, double lambda);

/// Entanglement moved into the first `pair_count` pairs, closed-form sum.
double e_transferred(unsigned pair_count, double lambda);

/// Entanglement left in the field after `pair_count` steps.
double e_residual(unsigned pair_count, double lambda);

/// Log negativity of the CV Werner state with v = lambda. Raw value: it is
/// negative below the inseparability threshold p = (1 - lambda) / 2.
double e_ln_cv(double p, double lambda);

/// Log negativity after conversion into `pair_count` pairs, v = lambda. Raw.
double e_ln_qubits(double p, double lambda, unsigned pair_count);

/// Weight p at which the v = lambda Werner state stops being PPT.
double inseparability_threshold(double lambda);

/// Both sides of prod_{k=1..K} (1 + lambda^(2^k)) = (1 - lambda^(2^(K+1))) / (1 - lambda^2).
struct ProductIdentity {
  double product = 1.0;
  double quotient = 1.0;
};
ProductIdentity product_identity(double lambda, unsigned pair_count);
bool product_identity_check(double lambda, unsigned pair_count, double tolerance = 1e-12);

/// lambda^(2^k) by repeated squaring.
double lambda_pow2(double lambda, unsigned k);

}  // namespace entconv::analytic
