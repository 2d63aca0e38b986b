#pragma once

#include "hm/linalg.hpp"

#include <numbers>

namespace hm::problems {

/// u_t = u_xx on (-pi, pi) with homogeneous Dirichlet conditions, discretized
/// by the three-point stencil on nx interior nodes x_i = -pi + i h,
/// h = 2 pi / (nx + 1).
struct Heat1DProblem {
    int nx = 0;
    double length = 2.0 * std::numbers::pi;
    double h = 0.0;
    linalg::SymmetricOperator op;
    Vector grid;
};

/// Throws InvalidParams for nx < 2.
Heat1DProblem build_heat1d(int nx);

/// sin(x) + sin(2x) + sin(3x) at the interior nodes.
Vector heat1d_initial(const Heat1DProblem& problem);

/// 1x1 operator [lambda]; the exact solution of y' = -lambda y, y(0) = 1 is exp(-lambda t).
/// Throws InvalidParams unless lambda > 0.
linalg::SymmetricOperator scalar_problem(double lambda);

}  // namespace hm::problems
