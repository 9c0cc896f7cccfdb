// evolution.cpp

#include "entconv/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

namespace entconv {

namespace {

constexpr unsigned kMaxStep = 40;
constexpr unsigned kMaxDensePairs = 3;
constexpr std::size_t kMaxDenseReverseCutoff = 16;
constexpr unsigned kMaxTensorPairs = 5;

void check_step(unsigned k) {
  if (k < 1 || k > kMaxStep) {
    throw std::invalid_argument("step index must lie in [1, 40], got " + std::to_string(k));
  }
}

bool is_zero(const PairAmplitudes& amps) {
  return std::all_of(amps.begin(), amps.end(), [](const Complex& c) { return c == Complex{}; });
}

// Applies step k to every column of a dense operator whose rows
// are indexed (a * N + b) * 4 + q.
Eigen::MatrixXcd apply_step_to_columns(const Eigen::MatrixXcd& x, FockCutoff cutoff, unsigned k,
                                       Direction direction) {
  const auto n = cutoff.levels();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
  for (Eigen::Index col = 0; col < x.cols(); ++col) {
    JointState::Entries entries;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        PairAmplitudes amps{};
        for (std::size_t q = 0; q < 4; ++q) {
          amps[q] = x(static_cast<Eigen::Index>((a * n + b) * 4 + q), col);
        }
        if (!is_zero(amps)) entries.emplace(FockIndex{a, b}, amps);
      }
    }
    const JointState evolved = apply_step(JointState(cutoff, std::move(entries)), k, direction);
    for (const auto& [idx, amps] : evolved.entries()) {
      for (std::size_t q = 0; q < 4; ++q) {
        out(static_cast<Eigen::Index>((idx.a * n + idx.b) * 4 + q), col) = amps[q];
      }
    }
  }
  return out;
}

ReverseResult reverse_dense(std::span<const QubitPairState> pairs, FockCutoff cutoff,
                            const ReverseOptions& options) {
  const auto pair_count = static_cast<unsigned>(pairs.size());
  if (pair_count > kMaxDensePairs) {
    throw std::invalid_argument("mixed reverse conversion is limited to 3 pairs");
  }
  const auto n = cutoff.levels();
  if (n > kMaxDenseReverseCutoff) {
    throw std::invalid_argument("mixed reverse conversion is limited to cutoff 16");
  }
  const auto dim = static_cast<Eigen::Index>(n * n);

  Eigen::MatrixXcd cv = Eigen::MatrixXcd::Zero(dim, dim);
  cv(0, 0) = 1.0;
  double max_leftover = 0.0;

  for (unsigned k = pair_count; k >= 1; --k) {
    const Eigen::Matrix4cd pair = pairs[k - 1].density();
    Eigen::MatrixXcd joint(dim * 4, dim * 4);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        joint.block<4, 4>(i * 4, j * 4) = cv(i, j) * pair;
      }
    }
    const Eigen::MatrixXcd left = apply_step_to_columns(joint, cutoff, k, Direction::Reverse);
    const Eigen::MatrixXcd evolved =
        apply_step_to_columns(left.adjoint(), cutoff, k, Direction::Reverse);

    double leftover = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index q = 1; q < 4; ++q) leftover += evolved(i * 4 + q, i * 4 + q).real();
    }
    max_leftover = std::max(max_leftover, leftover);
    if (leftover > options.leftover_threshold) {
      throw ProtocolError("reverse step " + std::to_string(k) + " left weight " +
                          std::to_string(leftover) + " on the consumed pair");
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) cv(i, j) = evolved(i * 4, j * 4);
    }
  }
  return ReverseResult{CVDensity(cutoff, std::move(cv)), max_leftover};
}

}  // namespace

double step_time(unsigned k) {
  check_step(k);
  return std::numbers::pi / std::ldexp(1.0, static_cast<int>(k));
}

Rotation block_rotation(unsigned k, std::size_t m_high) {
  check_step(k);
  const std::size_t half = std::size_t{1} << (k - 1);
  if (m_high % half == 0) {
    switch ((m_high / half) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  // theta = m pi / 2^k has period 2^(k+1) in m.
  const std::size_t period = half << 2;
  const double theta = static_cast<double>(m_high % period) * step_time(k);
  return {std::cos(theta), std::sin(theta)};
}

std::vector<CouplingBlock> coupling_blocks(unsigned k, FockCutoff cutoff) {
  check_step(k);
  const std::size_t half = std::size_t{1} << (k - 1);
  std::vector<CouplingBlock> blocks;
  for (std::size_t m = half; m < cutoff.levels(); ++m) {
    blocks.push_back({k, m, m - half, static_cast<double>(m) * step_time(k)});
  }
  return blocks;
}

// ---------------------------------------------------------------------------

JointState::JointState(FockCutoff cutoff, Entries entries)
    : cutoff_(cutoff), entries_(std::move(entries)) {
  for (const auto& [idx, amps] : entries_) {
    if (idx.a >= cutoff_.levels() || idx.b >= cutoff_.levels()) {
      throw std::invalid_argument("joint state index outside the Fock cutoff");
    }
  }
}

JointState JointState::product(const PureCVState& cv, const PairAmplitudes& pair) {
  Entries entries;
  for (const auto& [idx, c] : cv.entries()) {
    PairAmplitudes amps;
    for (std::size_t q = 0; q < 4; ++q) amps[q] = c * pair[q];
    entries.emplace_hint(entries.end(), idx, amps);
  }
  return JointState(cv.cutoff(), std::move(entries));
}

PairAmplitudes JointState::at(std::size_t a, std::size_t b) const {
  auto it = entries_.find(FockIndex{a, b});
  return it == entries_.end() ? PairAmplitudes{} : it->second;
}

double JointState::norm() const {
  double sum = 0.0;
  for (const auto& [idx, amps] : entries_) {
    for (const auto& c : amps) sum += std::norm(c);
  }
  return std::sqrt(sum);
}

JointState apply_half_step(const JointState& joint, Side side, unsigned k, Direction direction) {
  check_step(k);
  const FockCutoff cutoff = joint.cutoff();
  cutoff.require_multiple_of_pow2(k);
  const std::size_t n = cutoff.levels();
  const std::size_t half = std::size_t{1} << (k - 1);
  const Complex off = direction == Direction::Forward ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
  const bool on_a = side == Side::AC;
  // Qubit bit of the pair index belonging to this side.
  const std::size_t bit = on_a ? 2 : 1;

  JointState::Entries out;
  auto add = [&out](FockIndex idx, std::size_t q, Complex value) {
    if (value == Complex{}) return;
    out[idx][q] += value;
  };
  auto shifted = [on_a](FockIndex idx, std::size_t m) {
    if (on_a) idx.a = m; else idx.b = m;
    return idx;
  };

  for (const auto& [idx, amps] : joint.entries()) {
    const std::size_t m = on_a ? idx.a : idx.b;
    for (std::size_t q = 0; q < 4; ++q) {
      const Complex amp = amps[q];
      if (amp == Complex{}) continue;
      if ((q & bit) == 0) {
        // |m, ->: upper member of the block with |m - half, +>.
        if (m < half) {
          add(idx, q, amp);
          continue;
        }
        const Rotation rot = block_rotation(k, m);
        add(idx, q, rot.cos * amp);
        add(shifted(idx, m - half), q | bit, off * rot.sin * amp);
      } else {
        // |m, +>: lower member of the block with |m + half, ->.
        if (m + half >= n) {
          add(idx, q, amp);
          continue;
        }
        const Rotation rot = block_rotation(k, m + half);
        add(idx, q, rot.cos * amp);
        add(shifted(idx, m + half), q & ~bit, off * rot.sin * amp);
      }
    }
  }
  std::erase_if(out, [](const auto& item) { return is_zero(item.second); });
  return JointState(cutoff, std::move(out));
}

JointState apply_step(const JointState& joint, unsigned k, Direction direction) {
  return apply_half_step(apply_half_step(joint, Side::AC, k, direction), Side::BD, k, direction);
}

// ---------------------------------------------------------------------------

double ConversionReport::max_defect() const {
  double worst = 0.0;
  for (const auto& s : steps) worst = std::max(worst, s.defect);
  return worst;
}

ForwardStepResult forward_step(const PureCVState& cv, unsigned k, const ConversionOptions& options) {
  check_step(k);
  const FockCutoff cutoff = cv.cutoff();
  cutoff.require_multiple_of_pow2(k);
  const std::size_t half = std::size_t{1} << (k - 1);

  PureCVState::Entries supported;
  for (const auto& [idx, c] : cv.entries()) {
    if (idx.a % half == 0 && idx.b % half == 0) {
      supported.emplace_hint(supported.end(), idx, c);
    } else if (std::abs(c) > options.support_tolerance) {
      throw ProtocolError("step " + std::to_string(k) + " input has amplitude " +
                          std::to_string(std::abs(c)) + " off multiples of " +
                          std::to_string(half) + " at (" + std::to_string(idx.a) + ", " +
                          std::to_string(idx.b) + ")");
    }
  }
  const PureCVState input = PureCVState::normalized(cutoff, std::move(supported), cv.tail_weight());

  const JointState joint =
      apply_step(JointState::product(input, QubitPairState::blank().amplitudes()), k,
                 Direction::Forward);

  // Rows: field basis states present in the joint state; columns: pair basis.
  const auto& entries = joint.entries();
  Eigen::MatrixXcd split(static_cast<Eigen::Index>(entries.size()), 4);
  Eigen::Index row = 0;
  for (const auto& [idx, amps] : entries) {
    for (std::size_t q = 0; q < 4; ++q) split(row, static_cast<Eigen::Index>(q)) = amps[q];
    ++row;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(split, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double defect = sigma.size() > 1 ? sigma(1) : 0.0;
  if (defect > options.defect_threshold) {
    throw ProtocolError("step " + std::to_string(k) + " output does not factorize: defect " +
                        std::to_string(defect));
  }

  PairAmplitudes pair;
  for (std::size_t q = 0; q < 4; ++q) {
    pair[q] = std::conj(svd.matrixV()(static_cast<Eigen::Index>(q), 0));
  }
  std::size_t largest = 0;
  for (std::size_t q = 1; q < 4; ++q) {
    if (std::abs(pair[q]) > std::abs(pair[largest])) largest = q;
  }
  const Complex phase = std::polar(1.0, std::arg(pair[largest]));
  for (auto& c : pair) c *= std::conj(phase);

  PureCVState::Entries residual;
  row = 0;
  for (const auto& [idx, amps] : entries) {
    residual.emplace_hint(residual.end(), idx, svd.matrixU()(row, 0) * phase);
    ++row;
  }
  return ForwardStepResult{
      PureCVState::normalized(cutoff, std::move(residual), cv.tail_weight()),
      QubitPairState::pure_normalized(pair), defect, sigma(0)};
}

ForwardResult forward_convert(const PureCVState& cv, unsigned pair_count,
                              const ConversionOptions& options) {
  check_step(pair_count);
  cv.cutoff().require_multiple_of_pow2(pair_count);

  ForwardResult result{cv, {}, {}};
  for (unsigned k = 1; k <= pair_count; ++k) {
    ForwardStepResult step = forward_step(result.residual, k, options);
    result.report.steps.push_back(
        {k, step.defect, step.pair, step.residual_norm, step.residual.tail_weight()});
    result.pairs.push_back(step.pair);
    result.residual = std::move(step.residual);
  }
  return result;
}

DiagonalForwardResult forward_convert_diagonal(const DiagonalCVMixture& mixture,
                                               unsigned pair_count,
                                               const ConversionOptions& options) {
  check_step(pair_count);
  const FockCutoff cutoff = mixture.cutoff();
  cutoff.require_multiple_of_pow2(pair_count);
  const std::size_t n = cutoff.levels();
  const std::size_t high_mask = ~((std::size_t{1} << pair_count) - 1);
  const Eigen::MatrixXd& w = mixture.weights();

  // Pair k receives (digit k of a, digit k of b); the field keeps the rest.
  std::vector<std::array<double, 4>> marginals(pair_count, std::array<double, 4>{});
  Eigen::MatrixXd residual = Eigen::MatrixXd::Zero(w.rows(), w.cols());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double weight = w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (weight == 0.0) continue;
      for (unsigned k = 0; k < pair_count; ++k) {
        marginals[k][2 * ((a >> k) & 1) + ((b >> k) & 1)] += weight;
      }
      residual(static_cast<Eigen::Index>(a & high_mask),
               static_cast<Eigen::Index>(b & high_mask)) += weight;
    }
  }

  double defect = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double product = residual(static_cast<Eigen::Index>(a & high_mask),
                                static_cast<Eigen::Index>(b & high_mask));
      for (unsigned k = 0; k < pair_count; ++k) {
        product *= marginals[k][2 * ((a >> k) & 1) + ((b >> k) & 1)];
      }
      defect = std::max(
          defect,
          std::abs(w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - product));
    }
  }
  if (defect > options.defect_threshold) {
    throw ProtocolError("diagonal conversion output does not factorize: defect " +
                        std::to_string(defect));
  }

  DiagonalForwardResult result{
      DiagonalCVMixture::normalized(cutoff, std::move(residual), mixture.tail_weight()), {},
      defect};
  for (const auto& p : marginals) {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    const double total = p[0] + p[1] + p[2] + p[3];
    for (int q = 0; q < 4; ++q) rho(q, q) = p[static_cast<std::size_t>(q)] / total;
    result.pairs.push_back(QubitPairState::mixed(rho));
  }
  return result;
}

ConvertedWerner forward_convert_werner(const WernerCVState& werner, unsigned pair_count,
                                       const ConversionOptions& options) {
  return ConvertedWerner{werner.p(),
                         forward_convert(werner.pure_branch(), pair_count, options),
                         forward_convert_diagonal(werner.thermal_branch(), pair_count, options)};
}

Eigen::MatrixXcd ConvertedWerner::qubit_density() const {
  if (pair_count() > 4) {
    throw std::invalid_argument("dense qubit marginal limited to 4 pairs");
  }
  return p * pairs_tensor_density(pure.pairs) + (1.0 - p) * pairs_tensor_density(thermal.pairs);
}

Eigen::MatrixXcd pairs_tensor_density(std::span<const QubitPairState> pairs) {
  const auto pair_count = static_cast<unsigned>(pairs.size());
  if (pair_count < 1 || pair_count > kMaxTensorPairs) {
    throw std::invalid_argument("tensor product density needs 1 to 5 pairs");
  }
  std::vector<Eigen::Matrix4cd> rhos;
  for (const auto& pair : pairs) rhos.push_back(pair.density());

  const std::size_t side = std::size_t{1} << pair_count;
  const auto dim = static_cast<Eigen::Index>(side * side);
  Eigen::MatrixXcd out(dim, dim);
  for (std::size_t row = 0; row < side * side; ++row) {
    const std::size_t c = row / side, d = row % side;
    for (std::size_t col = 0; col < side * side; ++col) {
      const std::size_t c2 = col / side, d2 = col % side;
      Complex value{1.0, 0.0};
      for (unsigned k = 0; k < pair_count && value != Complex{}; ++k) {
        const auto i = static_cast<Eigen::Index>(2 * ((c >> k) & 1) + ((d >> k) & 1));
        const auto j = static_cast<Eigen::Index>(2 * ((c2 >> k) & 1) + ((d2 >> k) & 1));
        value *= rhos[k](i, j);
      }
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ReverseResult reverse_convert(std::span<const QubitPairState> pairs, const ReverseOptions& options) {
  const auto pair_count = static_cast<unsigned>(pairs.size());
  check_step(pair_count);
  const FockCutoff cutoff = options.cutoff.value_or(FockCutoff(std::size_t{1} << pair_count));
  cutoff.require_multiple_of_pow2(pair_count);

  const bool all_pure =
      std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.is_pure(); });
  if (!all_pure) return reverse_dense(pairs, cutoff, options);

  PureCVState cv = PureCVState::vacuum(cutoff);
  double max_leftover = 0.0;
  for (unsigned k = pair_count; k >= 1; --k) {
    const JointState evolved = apply_step(
        JointState::product(cv, pairs[k - 1].amplitudes()), k, Direction::Reverse);
    double leftover = 0.0;
    PureCVState::Entries field;
    for (const auto& [idx, amps] : evolved.entries()) {
      leftover += std::norm(amps[1]) + std::norm(amps[2]) + std::norm(amps[3]);
      if (amps[0] != Complex{}) field.emplace_hint(field.end(), idx, amps[0]);
    }
    max_leftover = std::max(max_leftover, leftover);
    if (leftover > options.leftover_threshold) {
      throw ProtocolError("reverse step " + std::to_string(k) + " left weight " +
                          std::to_string(leftover) + " on the consumed pair");
    }
    cv = PureCVState::normalized(cutoff, std::move(field));
  }
  return ReverseResult{std::move(cv), max_leftover};
}

PureCVState reverse_closed_form(std::span<const QubitPairState> pairs, ClosedFormFactors factors) {
  const auto pair_count = static_cast<unsigned>(pairs.size());
  check_step(pair_count);
  if (pair_count > 12) {
    throw std::invalid_argument("closed-form reverse output limited to 12 pairs");
  }
  for (const auto& pair : pairs) {
    if (!pair.is_pure()) throw std::invalid_argument("closed-form reverse output needs pure pairs");
  }
  const std::size_t side = std::size_t{1} << pair_count;
  static constexpr Complex kIPowers[3] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};

  PureCVState::Entries entries;
  for (std::size_t n = 0; n < side; ++n) {
    for (std::size_t m = 0; m < side; ++m) {
      Complex amp{1.0, 0.0};
      for (unsigned j = 0; j < pair_count && amp != Complex{}; ++j) {
        const std::size_t nj = (n >> j) & 1, mj = (m >> j) & 1;
        // Digits beyond the last pair are zero.
        const std::size_t carry = ((n >> (j + 1)) & 1) + ((m >> (j + 1)) & 1);
        if (factors.carry_sign && carry % 2 == 1) amp = -amp;
        if (factors.digit_phase) amp *= kIPowers[nj + mj];
        amp *= pairs[j].amplitudes()[2 * nj + mj];
      }
      if (amp != Complex{}) entries.emplace_hint(entries.end(), FockIndex{n, m}, amp);
    }
  }
  return PureCVState::normalized(FockCutoff(side), std::move(entries));
}

}  // namespace entconv
