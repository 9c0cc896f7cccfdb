// evolution.hpp
// Forward (field -> qubit pairs) and reverse (qubit pairs -> field) conversion.
//
// Step k couples |m, -> with |m - 2^(k-1), +> on each side (A with C, B with
// D). Inside that two-dimensional block the interaction time pi / 2^k gives
// the Rabi angle theta = m * pi / 2^k, and the forward propagator acts as
//
//     [ cos(theta)     -i sin(theta) ]
//     [ -i sin(theta)   cos(theta)   ]
//
// on (|m, ->, |m - 2^(k-1), +>). Reverse time uses the adjoint. States with
// no partner inside the cutoff are left unchanged. Units: Omega = hbar = 1.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "entconv/states.hpp"

namespace entconv {

enum class Side { AC, BD };
enum class Direction { Forward, Reverse };

/// Interaction time of step k in units of 1/Omega: pi / 2^k.
double step_time(unsigned k);

struct CouplingBlock {
  unsigned step = 1;
  std::size_t m_high = 0;  // photon number paired with the qubit in |->
  std::size_t m_low = 0;   // m_high - 2^(step-1), paired with |+>
  double angle = 0.0;      // m_high * pi / 2^step
};

/// Every 2x2 block of step k inside the cutoff, ordered by m_high.
std::vector<CouplingBlock> coupling_blocks(unsigned k, FockCutoff cutoff);

/// cos and sin of the Rabi angle of the block with upper photon number m_high.
/// Exact (0, +-1) at multiples of a quarter turn.
struct Rotation {
  double cos = 1.0;
  double sin = 0.0;
};
Rotation block_rotation(unsigned k, std::size_t m_high);

/// Field pair tensored with one qubit pair, stored sparsely by Fock index.
class JointState {
 public:
  using Entries = std::map<FockIndex, PairAmplitudes>;

  JointState(FockCutoff cutoff, Entries entries);
  static JointState product(const PureCVState& cv, const PairAmplitudes& pair);

  FockCutoff cutoff() const noexcept { return cutoff_; }
  const Entries& entries() const noexcept { return entries_; }
  PairAmplitudes at(std::size_t a, std::size_t b) const;
  double norm() const;

 private:
  FockCutoff cutoff_;
  Entries entries_;
};

/// Applies the step-k propagator on one side. Requires the cutoff to be a
/// multiple of 2^k.
JointState apply_half_step(const JointState& joint, Side side, unsigned k, Direction direction);

/// Both sides, A-C first. The two halves commute.
JointState apply_step(const JointState& joint, unsigned k, Direction direction);

struct ConversionOptions {
  /// Largest allowed second singular value across the field|pair split.
  double defect_threshold = 1e-8;
  /// Amplitude allowed outside the expected support before a step refuses.
  double support_tolerance = 1e-12;
};

struct StepRecord {
  unsigned step = 0;
  double defect = 0.0;
  QubitPairState pair = QubitPairState::blank();
  double residual_norm = 0.0;  // dominant singular value before renormalizing
  double tail_weight = 0.0;
};

struct ConversionReport {
  std::vector<StepRecord> steps;
  double max_defect() const;
};

struct ForwardStepResult {
  PureCVState residual;
  QubitPairState pair;
  double defect = 0.0;
  double residual_norm = 0.0;
};

/// One forward step: tensor with |-->, evolve for t_k, split off the pair.
///
/// The pair keeps its largest-magnitude amplitude real and positive; the
/// compensating phase goes into the residual field state. Throws
/// ProtocolError if the input has amplitude off multiples of 2^(k-1) or the
/// evolved state does not factorize within the threshold.
ForwardStepResult forward_step(const PureCVState& cv, unsigned k,
                               const ConversionOptions& options = {});

struct ForwardResult {
  PureCVState residual;
  std::vector<QubitPairState> pairs;
  ConversionReport report;
};

/// Steps 1..pair_count in order. The cutoff must be a multiple of 2^pair_count.
ForwardResult forward_convert(const PureCVState& cv, unsigned pair_count,
                              const ConversionOptions& options = {});

struct DiagonalForwardResult {
  DiagonalCVMixture residual;
  std::vector<QubitPairState> pairs;
  /// Largest entrywise deviation of the joint output from residual (x) pairs.
  double defect = 0.0;
};

/// Forward conversion of a Fock-diagonal mixture. Each |a b> is mapped onto
/// qubit values (digit k of a, digit k of b) for pair k, so only weights are
/// moved. Throws ProtocolError when the output does not factorize.
DiagonalForwardResult forward_convert_diagonal(const DiagonalCVMixture& mixture,
                                               unsigned pair_count,
                                               const ConversionOptions& options = {});

struct ConvertedWerner {
  double p = 1.0;
  ForwardResult pure;
  DiagonalForwardResult thermal;

  unsigned pair_count() const { return static_cast<unsigned>(pure.pairs.size()); }
  /// Qubit marginal p * prod |Phi_k><Phi_k| + (1-p) * prod rho_k as a dense
  /// matrix over (C index, D index); limited to pair_count <= 4.
  Eigen::MatrixXcd qubit_density() const;
};

ConvertedWerner forward_convert_werner(const WernerCVState& werner, unsigned pair_count,
                                       const ConversionOptions& options = {});

/// Dense density of a list of pairs, reordered so that the row index is
/// c * 2^K + d with c = sum_k c_k 2^(k-1) (C qubits) and likewise d.
Eigen::MatrixXcd pairs_tensor_density(std::span<const QubitPairState> pairs);

struct ReverseOptions {
  /// Output cutoff; defaults to 2^K. Must be a multiple of 2^K.
  std::optional<FockCutoff> cutoff;
  /// Probability allowed to remain outside |--> on a consumed pair.
  double leftover_threshold = 1e-12;
};

struct ReverseResult {
  std::variant<PureCVState, CVDensity> state;
  /// Largest probability left on a consumed pair outside |-->.
  double max_leftover = 0.0;

  bool is_pure() const { return std::holds_alternative<PureCVState>(state); }
};

/// Starts from the field vacuum and feeds pairs K, K-1, ..., 1 through the
/// reversed propagators. Any mixed pair switches to the dense density route,
/// which is limited to K <= 3.
ReverseResult reverse_convert(std::span<const QubitPairState> pairs,
                              const ReverseOptions& options = {});

/// Selects which phase factors of the closed-form reverse amplitude are used.
struct ClosedFormFactors {
  bool carry_sign = true;   // (-1)^(m_{j+1} + n_{j+1})
  bool digit_phase = true;  // i^(m_j + n_j)
};

/// Closed-form reverse output for pure pairs:
///   psi(n, m) = prod_j (-1)^(m_{j+1}+n_{j+1}) i^(m_j+n_j) a^j_{n_j m_j}
/// with n = sum_j n_j 2^(j-1) the mode A label and m likewise for mode B.
PureCVState reverse_closed_form(std::span<const QubitPairState> pairs,
                                ClosedFormFactors factors = {});

}  // namespace entconv
