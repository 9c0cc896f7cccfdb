// entanglement.cpp

#include "entconv/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace entconv {

namespace {

constexpr double kSchmidtFloor = 1e-15;
constexpr double kNormalizationTolerance = 1e-10;
constexpr std::size_t kDenseGuard = 4096;
constexpr std::size_t kMaxUntruncatedLevels = std::size_t{1} << 22;

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  Complex value;
};

class DisjointSets {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t x, std::size_t y) { parent_[find(x)] = find(y); }

 private:
  std::vector<std::size_t> parent_;
};

// Singular values of a sparse matrix, computed block by block over the
// connected components of its row/column graph.
SchmidtSpectrum sparse_schmidt(const std::vector<SparseEntry>& entries) {
  DisjointSets sets;
  std::unordered_map<std::size_t, std::size_t> row_node, col_node;
  auto node = [&sets](std::unordered_map<std::size_t, std::size_t>& nodes, std::size_t key) {
    auto [it, inserted] = nodes.try_emplace(key, 0);
    if (inserted) it->second = sets.add();
    return it->second;
  };
  for (const auto& e : entries) sets.unite(node(row_node, e.row), node(col_node, e.col));

  struct Block {
    std::unordered_map<std::size_t, Eigen::Index> rows, cols;
    std::vector<const SparseEntry*> items;
  };
  std::unordered_map<std::size_t, Block> blocks;
  for (const auto& e : entries) {
    Block& block = blocks[sets.find(row_node.at(e.row))];
    block.rows.try_emplace(e.row, static_cast<Eigen::Index>(block.rows.size()));
    block.cols.try_emplace(e.col, static_cast<Eigen::Index>(block.cols.size()));
    block.items.push_back(&e);
  }

  SchmidtSpectrum spectrum;
  for (const auto& [root, block] : blocks) {
    if (block.items.size() == 1) {
      spectrum.push_back(std::norm(block.items.front()->value));
      continue;
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(block.rows.size()),
                                                static_cast<Eigen::Index>(block.cols.size()));
    for (const auto* e : block.items) m(block.rows.at(e->row), block.cols.at(e->col)) = e->value;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      const double s = svd.singularValues()(i);
      spectrum.push_back(s * s);
    }
  }
  std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
  return spectrum;
}

void check_square(const Eigen::MatrixXcd& rho, std::size_t d1, std::size_t d2) {
  const auto dim = static_cast<Eigen::Index>(d1 * d2);
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("density shape does not match the subsystem dimensions");
  }
  if (d1 * d2 > kDenseGuard) {
    throw std::invalid_argument("dense partial transpose limited to dimension 4096");
  }
}

void check_werner_params(double p, double lambda, double v) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0, 1)");
  if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("v must lie in [0, 1)");
}

double omitted_trace_norm_bound(double p, double lambda, double v, std::size_t levels) {
  const double l = static_cast<double>(levels);
  const double pure_kept = 1.0 - std::pow(lambda, l);
  const double thermal_kept = 1.0 - std::pow(v, l);
  return p * (1.0 + lambda) / (1.0 - lambda) * (1.0 - pure_kept * pure_kept) +
         (1.0 - p) * (1.0 - thermal_kept * thermal_kept);
}

}  // namespace

SchmidtSpectrum schmidt_spectrum(const PureCVState& state) {
  std::vector<SparseEntry> entries;
  entries.reserve(state.entries().size());
  for (const auto& [idx, c] : state.entries()) entries.push_back({idx.a, idx.b, c});
  return sparse_schmidt(entries);
}

SchmidtSpectrum schmidt_spectrum(const QubitPairState& pair) {
  const auto& a = pair.amplitudes();
  Eigen::Matrix2cd m;
  m << a[0], a[1], a[2], a[3];
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
  const auto& s = svd.singularValues();
  return {s(0) * s(0), s(1) * s(1)};
}

SchmidtSpectrum schmidt_spectrum(const JointState& joint) {
  std::vector<SparseEntry> entries;
  for (const auto& [idx, amps] : joint.entries()) {
    for (std::size_t q = 0; q < 4; ++q) {
      if (amps[q] == Complex{}) continue;
      entries.push_back({idx.a * 2 + q / 2, idx.b * 2 + q % 2, amps[q]});
    }
  }
  return sparse_schmidt(entries);
}

double entropy_from_spectrum(const SchmidtSpectrum& spectrum) {
  const double total = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument("entropy of a non-normalized state (weight " +
                                std::to_string(total) + ")");
  }
  double entropy = 0.0;
  for (double p : spectrum) {
    if (p < kSchmidtFloor) continue;
    entropy -= p * std::log2(p);
  }
  return std::max(entropy, 0.0);
}

double entropy_of_entanglement(const PureCVState& state) {
  return entropy_from_spectrum(schmidt_spectrum(state));
}
double entropy_of_entanglement(const QubitPairState& pair) {
  return entropy_from_spectrum(schmidt_spectrum(pair));
}
double entropy_of_entanglement(const JointState& joint) {
  return entropy_from_spectrum(schmidt_spectrum(joint));
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, std::size_t dim_first,
                                   std::size_t dim_second, Subsystem subsystem) {
  check_square(rho, dim_first, dim_second);
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  auto at = [dim_second](std::size_t i1, std::size_t i2) {
    return static_cast<Eigen::Index>(i1 * dim_second + i2);
  };
  for (std::size_t i1 = 0; i1 < dim_first; ++i1)
    for (std::size_t i2 = 0; i2 < dim_second; ++i2)
      for (std::size_t j1 = 0; j1 < dim_first; ++j1)
        for (std::size_t j2 = 0; j2 < dim_second; ++j2) {
          out(at(i1, i2), at(j1, j2)) = subsystem == Subsystem::First ? rho(at(j1, i2), at(i1, j2))
                                                                      : rho(at(i1, j2), at(j1, i2));
        }
  return out;
}

double log_negativity_dense(const Eigen::MatrixXcd& rho, std::size_t dim_first,
                            std::size_t dim_second) {
  check_square(rho, dim_first, dim_second);
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kNormalizationTolerance) {
    throw std::invalid_argument("log negativity of a non-Hermitian matrix");
  }
  const Eigen::MatrixXcd pt = partial_transpose(rho, dim_first, dim_second, Subsystem::First);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
  return std::log2(es.eigenvalues().cwiseAbs().sum());
}

double log_negativity(const QubitPairState& pair) {
  return log_negativity_dense(pair.density(), 2, 2);
}

double log_negativity(const CVDensity& state) {
  const auto n = state.cutoff().levels();
  return log_negativity_dense(state.matrix(), n, n);
}

// ---------------------------------------------------------------------------

PTSpectrum::PTSpectrum(std::vector<PTEigenvalue> values, std::size_t levels)
    : values_(std::move(values)), levels_(levels) {}

std::size_t PTSpectrum::count() const {
  std::size_t total = 0;
  for (const auto& e : values_) total += e.multiplicity;
  return total;
}

double PTSpectrum::trace() const {
  double total = 0.0;
  for (const auto& e : values_) total += e.value * static_cast<double>(e.multiplicity);
  return total;
}

double PTSpectrum::trace_norm() const {
  double total = 0.0;
  for (const auto& e : values_) total += std::abs(e.value) * static_cast<double>(e.multiplicity);
  return total;
}

double PTSpectrum::min_value() const {
  double lowest = values_.empty() ? 0.0 : values_.front().value;
  for (const auto& e : values_) lowest = std::min(lowest, e.value);
  return lowest;
}

std::vector<double> PTSpectrum::expanded_sorted() const {
  std::vector<double> out;
  out.reserve(count());
  for (const auto& e : values_) out.insert(out.end(), e.multiplicity, e.value);
  std::sort(out.begin(), out.end());
  return out;
}

PTSpectrum werner_pt_spectrum_cv(double p, double lambda, double v, std::size_t levels,
                                 WernerNormalization normalization) {
  check_werner_params(p, lambda, v);
  if (levels < 1) throw std::invalid_argument("spectrum needs at least one level");
  const double l = static_cast<double>(levels);
  double pure = p * (1.0 - lambda * lambda);
  double thermal = (1.0 - p) * (1.0 - v) * (1.0 - v);
  if (normalization == WernerNormalization::Truncated) {
    pure /= 1.0 - std::pow(lambda, 2.0 * l);
    const double kept = 1.0 - std::pow(v, l);
    thermal /= kept * kept;
  }

  std::vector<PTEigenvalue> values;
  values.reserve(3 * levels);
  for (std::size_t i = 0; i < levels; ++i) {
    const double s = 2.0 * static_cast<double>(i);
    values.push_back({pure * std::pow(lambda, s) + thermal * std::pow(v, s), 1});
  }
  // Off-diagonal blocks {|m n>, |n m>}, m < n < L, grouped by s = m + n.
  for (std::size_t s = 1; s + 2 < 2 * levels; ++s) {
    const std::size_t lo = s >= levels ? s - levels + 1 : 0;
    const std::size_t hi = (s - 1) / 2;
    if (hi < lo) continue;
    const std::size_t count = hi - lo + 1;
    const double diag = thermal * std::pow(v, static_cast<double>(s));
    const double off = pure * std::pow(lambda, static_cast<double>(s));
    values.push_back({diag + off, count});
    values.push_back({diag - off, count});
  }
  return PTSpectrum(std::move(values), levels);
}

PTSpectrum werner_pt_spectrum_converted(double p, double lambda, double v, unsigned pair_count) {
  if (pair_count < 1 || pair_count > 30) {
    throw std::invalid_argument("pair count must lie in [1, 30]");
  }
  return werner_pt_spectrum_cv(p, lambda, v, std::size_t{1} << pair_count,
                               WernerNormalization::Truncated);
}

UntruncatedSpectrum werner_pt_spectrum_untruncated(double p, double lambda, double v,
                                                   double tolerance) {
  check_werner_params(p, lambda, v);
  std::size_t levels = 1;
  while (omitted_trace_norm_bound(p, lambda, v, levels) > tolerance) {
    if (levels >= kMaxUntruncatedLevels) {
      throw std::invalid_argument("lambda or v too close to 1 for an untruncated spectrum");
    }
    ++levels;
  }
  return UntruncatedSpectrum{
      werner_pt_spectrum_cv(p, lambda, v, levels, WernerNormalization::Infinite),
      omitted_trace_norm_bound(p, lambda, v, levels)};
}

double log_negativity_from_spectrum(const PTSpectrum& spectrum, double tolerance) {
  const double trace = spectrum.trace();
  if (std::abs(trace - 1.0) > tolerance) {
    throw std::invalid_argument("partial-transpose spectrum sums to " + std::to_string(trace));
  }
  return std::log2(spectrum.trace_norm());
}

AdditivityCheck ln_additivity_check(std::span<const QubitPairState> pairs) {
  if (pairs.empty() || pairs.size() > 3) {
    throw std::invalid_argument("additivity check needs 1 to 3 pairs");
  }
  AdditivityCheck check;
  for (const auto& pair : pairs) check.sum_of_pairs += log_negativity(pair);
  const std::size_t side = std::size_t{1} << pairs.size();
  check.of_product = log_negativity_dense(pairs_tensor_density(pairs), side, side);
  return check;
}

}  // namespace entconv
