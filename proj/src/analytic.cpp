// analytic.cpp

#include "entconv/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace entconv::analytic {

namespace {

constexpr unsigned kMaxPairs = 60;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0, 1)");
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

void check_pairs(unsigned k) {
  if (k < 1 || k > kMaxPairs) throw std::invalid_argument("pair index must lie in [1, 60]");
}

// x log2 x with the limit 0 at x = 0.
double xlog2x(double x) { return x == 0.0 ? 0.0 : x * std::log2(x); }

}  // namespace

double lambda_pow2(double lambda, unsigned k) {
  double x = lambda;
  for (unsigned i = 0; i < k; ++i) x *= x;
  return x;
}

double e_tmsv(double lambda) {
  check_lambda(lambda);
  const double cosh2 = 1.0 / (1.0 - lambda * lambda);
  const double sinh2 = lambda * lambda * cosh2;
  return xlog2x(cosh2) - xlog2x(sinh2);
}

double e_pair(unsigned k, double lambda) {
  check_pairs(k);
  check_lambda(lambda);
  if (lambda == 0.0) return 0.0;
  const double x = lambda_pow2(lambda, k);
  return std::log1p(x) / std::log(2.0) - x / (1.0 + x) * std::ldexp(1.0, static_cast<int>(k)) *
                                             std::log2(lambda);
}

double e_transferred(unsigned pair_count, double lambda) {
  check_pairs(pair_count);
  check_lambda(lambda);
  if (lambda == 0.0) return 0.0;
  const double l2 = lambda * lambda;
  const double top = lambda_pow2(lambda, pair_count + 1);
  const double scale = std::ldexp(1.0, static_cast<int>(pair_count));
  return std::log2((1.0 - top) / (1.0 - l2)) -
         (l2 / (1.0 - l2) - scale * top / (1.0 - top)) * std::log2(l2);
}

double e_residual(unsigned pair_count, double lambda) {
  check_pairs(pair_count);
  check_lambda(lambda);
  if (lambda == 0.0) return 0.0;
  const double top = lambda_pow2(lambda, pair_count + 1);
  const double scale = std::ldexp(1.0, static_cast<int>(pair_count + 1));
  return -std::log1p(-top) / std::log(2.0) - scale * top / (1.0 - top) * std::log2(lambda);
}

double e_ln_cv(double p, double lambda) {
  check_p(p);
  check_lambda(lambda);
  return std::log2(p * (1.0 + lambda) / (1.0 - lambda) + (1.0 - p) * (1.0 - lambda) / (1.0 + lambda));
}

double e_ln_qubits(double p, double lambda, unsigned pair_count) {
  check_p(p);
  check_lambda(lambda);
  check_pairs(pair_count);
  const double x = lambda_pow2(lambda, pair_count);
  return std::log2(p * (1.0 + lambda) / (1.0 - lambda) * (1.0 - x) / (1.0 + x) +
                   (1.0 - p) * (1.0 - lambda) / (1.0 + lambda) * (1.0 + x) / (1.0 - x));
}

double inseparability_threshold(double lambda) {
  check_lambda(lambda);
  return (1.0 - lambda) / 2.0;
}

ProductIdentity product_identity(double lambda, unsigned pair_count) {
  check_lambda(lambda);
  check_pairs(pair_count);
  ProductIdentity result;
  for (unsigned k = 1; k <= pair_count; ++k) result.product *= 1.0 + lambda_pow2(lambda, k);
  result.quotient = (1.0 - lambda_pow2(lambda, pair_count + 1)) / (1.0 - lambda * lambda);
  return result;
}

bool product_identity_check(double lambda, unsigned pair_count, double tolerance) {
  const ProductIdentity sides = product_identity(lambda, pair_count);
  return std::abs(sides.product - sides.quotient) <= tolerance;
}

}  // namespace entconv::analytic
