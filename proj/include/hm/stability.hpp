#pragma once

#include "hm/linalg.hpp"
#include "hm/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hm::stability {

using Complex = std::complex<double>;

/// 2x2 diagonal block of the amplification matrix in the eigenbasis of A:
///
///     S_j = [ (4 et - 2 mu)/(1 + 2 et)   (1 - 2 et)/(1 + 2 et) ]
///           [           1                          0           ],   mu = tau lambda_j.
struct AmplificationBlock {
    double mu = 0.0;
    double eps_tilde = 0.0;
    Matrix2 entries = Matrix2::Zero();

    double s11() const noexcept { return entries(0, 0); }
    double s12() const noexcept { return entries(0, 1); }
    double det() const noexcept { return -entries(0, 1); }
};

/// Roots of (1 + 2 et) xi^2 + (2 mu - 4 et) xi + (2 et - 1) = 0.
/// xi1 takes the + branch of the principal square root.
struct BlockEigen {
    Complex xi1;
    Complex xi2;
    double discriminant = 0.0;  ///< mu^2 + 1 - 4 et mu
    double separation = 0.0;    ///< |xi1 - xi2|

    double spectral_radius() const noexcept { return std::max(std::abs(xi1), std::abs(xi2)); }
};

/// Throws InvalidParams for eps_tilde <= 0 or mu < 0.
AmplificationBlock build_block(double mu, double eps_tilde);
BlockEigen block_eigenvalues(double mu, double eps_tilde);

/// 2 |sqrt(mu^2 + 1 - 4 et mu)| / (1 + 2 et).
double exact_separation(double mu, double eps_tilde);

/// (tau + 2 eps) / (2 tau sqrt|1 - 4 eps lambda|), the small-mu approximation
/// of 1/|xi1 - xi2|. Throws SingularIndicator when |1 - 4 eps lambda| < 1e-14.
double growth_indicator(double lambda, const scheme::HMParams& p);

struct SamarskiiVerdict {
    bool stable = false;    ///< tau < tau_bound, strictly
    double tau_bound = 0.0; ///< sqrt(4 eps / lambda_max)
    double margin = 0.0;    ///< tau_bound - tau
};

SamarskiiVerdict samarskii_check(const scheme::HMParams& p, double lambda_max);

/// Full 2N x 2N amplification matrix acting on stacked (y^n, y^{n-1}).
Matrix build_amplification(const linalg::SymmetricOperator& A, const scheme::HMParams& p);

/// One block per eigenvalue of A.
std::vector<AmplificationBlock> modal_blocks(const linalg::SymmetricOperator& A,
                                             const scheme::HMParams& p);

inline constexpr std::int64_t kMaxPowers = 10'000'000;

/// ||S^n||_2 for n = 1..n_max. When a value exceeds `overflow_guard` it is
/// stored and the curve stops early with `overflowed` set.
struct PowerNormCurve {
    std::vector<double> norms;
    bool overflowed = false;

    double max() const;
};

/// max_j ||S_j^n|| with S_j^n accumulated by repeated 2x2 products.
/// Throws StepCountOverflow for n_max > 1e7 and InvalidParams for n_max < 1.
PowerNormCurve power_norm_curve(const std::vector<AmplificationBlock>& blocks,
                                std::int64_t n_max,
                                double overflow_guard = std::numeric_limits<double>::infinity());
PowerNormCurve power_norm_curve(const linalg::SymmetricOperator& A, const scheme::HMParams& p,
                                std::int64_t n_max,
                                double overflow_guard = std::numeric_limits<double>::infinity());
/// Cross-check path: direct powers of the dense 2N x 2N matrix, norms
/// evaluated at the requested exponents only (ascending).
std::vector<double> full_power_norms(const Matrix& S, const std::vector<std::int64_t>& exponents);

/// y0, y1 > 0 with y2 = S11 y1 + S12 y0 < 0 for the scalar block at `mu`.
struct MonotonicityWitness {
    double mu = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
};

/// Exists when eps_tilde > 1/2 (S12 < 0). y1 = 1 and y0 is the smallest
/// integer above S11/|S12|.
std::optional<MonotonicityWitness> monotonicity_witness(const scheme::HMParams& p,
                                                        double mu = 0.03);

struct ConstEps {
    double eps;
};
struct LinearInTau {
    double c_tilde;  ///< eps = c_tilde * tau
};
struct LinearInH {
    double K;  ///< eps = K h, heat conduction coefficient
    double h;
};
using EpsilonPolicy = std::variant<ConstEps, LinearInTau, LinearInH>;

struct PolicyBound {
    double max_tau = 0.0;
    std::string commentary;
};

/// Largest stable time step under each choice of eps:
///   ConstEps     sqrt(4 eps / lambda_max)
///   LinearInTau  4 c_tilde / lambda_max
///   LinearInH    sqrt(4 K h / lambda_max), which is h^{3/2} for lambda_max = 4K/h^2.
PolicyBound epsilon_policy_bounds(const EpsilonPolicy& policy, double lambda_max);

struct ModeReport {
    double lambda = 0.0;
    double mu = 0.0;
    Complex xi1;
    Complex xi2;
    double inverse_separation = 0.0;  ///< exact 1/|xi1 - xi2|, inf at a double root
    std::optional<double> indicator;  ///< absent at the singular point 4 eps lambda = 1
};

struct StabilityReport {
    double tau_bound = 0.0;
    bool stable = false;
    double lambda_max = 0.0;
    std::vector<ModeReport> per_mode;
    double max_power_norm = 0.0;
    std::int64_t n_max = 0;
};

/// Throws if the eigenvalue verdict disagrees with the Samarskii verdict away
/// from the boundary.
StabilityReport stability_report(const linalg::SymmetricOperator& A, const scheme::HMParams& p,
                                 std::int64_t n_max);

/// Scalar reference stability functions.
inline double exact_stability(double mu) { return std::exp(-mu); }
inline double implicit_euler_stability(double mu) { return 1.0 / (mu + 1.0); }
inline double explicit_euler_stability(double mu) { return 1.0 - mu; }

}  // namespace hm::stability
