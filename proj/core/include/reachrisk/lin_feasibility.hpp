#pragma once

#include <Eigen/Dense>

namespace reachrisk::detail {

/// Decides whether {x in [-1,1]^m | A x = b} is nonempty, exactly up to
/// the residual tolerance. Implemented as a phase-one simplex with
/// bounded variables; the basis has only rows(A) columns, so each pivot
/// is cheap. Bland's rule keeps it from cycling.
bool box_constrained_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              double tol = 1e-9);

}  // namespace reachrisk::detail
