// dense_oracle.hpp
// Validation path that materializes the step propagators as dense matrices.
// Shares no code with apply_half_step.

#pragma once

#include <Eigen/Dense>

#include "entconv/evolution.hpp"

namespace entconv {

/// Propagator of step k on one mode and its qubit, dimension 2N.
/// Row/column index m * 2 + q with q = 0 for |-> and 1 for |+>.
Eigen::MatrixXcd side_unitary(unsigned k, FockCutoff cutoff, Direction direction);

/// Full step-k propagator on (A, B, C, D), index ((a * N + b) * 4 + 2 q_C + q_D).
/// Cutoff at most 16.
Eigen::MatrixXcd full_step_unitary(unsigned k, FockCutoff cutoff, Direction direction);

/// Dense vector layout of a joint state: ((a * N + b) * 4 + 2 q_C + q_D).
Eigen::VectorXcd to_dense_vector(const JointState& joint);
JointState from_dense_vector(const Eigen::VectorXcd& psi, FockCutoff cutoff);

/// One half step on a dense joint vector. Cutoff at most 64.
Eigen::VectorXcd dense_oracle_step(const Eigen::VectorXcd& psi, FockCutoff cutoff, Side side,
                                   unsigned k, Direction direction);

/// rho -> U rho U^dagger for one half step on a dense joint density matrix.
/// Cutoff at most 16.
Eigen::MatrixXcd dense_oracle_step(const Eigen::MatrixXcd& rho, FockCutoff cutoff, Side side,
                                   unsigned k, Direction direction);

}  // namespace entconv
