#include "hm/problems.hpp"

#include "hm/error.hpp"

#include <cmath>

namespace hm::problems {

namespace {

linalg::SymmetricOperator dirichlet_laplacian(int nx, double h) {
    const double inv_h2 = 1.0 / (h * h);
    Matrix A = Matrix::Zero(nx, nx);
    for (int i = 0; i < nx; ++i) {
        A(i, i) = 2.0 * inv_h2;
        if (i > 0) {
            A(i, i - 1) = -inv_h2;
        }
        if (i + 1 < nx) {
            A(i, i + 1) = -inv_h2;
        }
    }
    return linalg::SymmetricOperator(A);
}

}  // namespace

Heat1DProblem build_heat1d(int nx) {
    if (nx < 2) {
        throw Error(Errc::InvalidParams, "heat problem needs at least two interior nodes");
    }
    const double length = 2.0 * std::numbers::pi;
    const double h = length / (nx + 1);
    Vector grid(nx);
    for (int i = 0; i < nx; ++i) {
        grid(i) = -std::numbers::pi + (i + 1) * h;
    }
    return Heat1DProblem{nx, length, h, dirichlet_laplacian(nx, h), std::move(grid)};
}

Vector heat1d_initial(const Heat1DProblem& problem) {
    const Vector& x = problem.grid;
    return (x.array().sin() + (2.0 * x.array()).sin() + (3.0 * x.array()).sin()).matrix();
}

linalg::SymmetricOperator scalar_problem(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(Errc::InvalidParams, "scalar problem needs lambda > 0");
    }
    return linalg::SymmetricOperator(Matrix::Constant(1, 1, lambda));
}

}  // namespace hm::problems
