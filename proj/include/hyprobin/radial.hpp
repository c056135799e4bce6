#pragma once

#include "hyprobin/hypgeo.hpp"

#include <optional>
#include <vector>

// First Robin eigenvalue of a geodesic ball B_R in H^n, reduced to the radial
// Sturm-Liouville problem
//
//   psi'' + (n-1) coth(r) psi' + lambda psi = 0,   psi'(0) = 0,
//   psi'(R) + beta psi(R) = 0.
//
// Two independent routes are provided: a piecewise-linear weak form on a
// graded grid, and shooting from a series start near the singular origin.
namespace hyprobin::radial {

struct RadialProblem {
    hypgeo::SpaceParams space;
    double radius = 1.0;
    double beta = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct RadialEigenpair {
    double lambda1 = 0.0;
    double beta = 0.0;
    std::vector<double> grid;  // strictly increasing, grid.front() == 0, grid.back() == R
    std::vector<double> psi;   // psi(0) == 1
    double v_min = 0.0;
    double v_max = 0.0;
    double l2_sq = 0.0;        // omega * int psi^2 sinh^{n-1} dr
    double boundary_residual = 0.0;
};

struct EigenQuantities {
    double v_min = 0.0;
    double v_max = 0.0;
    double l2_sq = 0.0;
};

enum class PencilMethod {
    tridiagonal,  // Sturm-count bisection + inverse iteration, O(N) per sweep
    dense,        // Cholesky reduction of the full pencil (Eigen), N <= 4096
};

struct WeakOptions {
    int elements = 512;
    // Size ratio of the element at r = R to the element at r = 0.
    double grading = 0.18530201888518416;  // 0.9^16
    PencilMethod method = PencilMethod::tridiagonal;
};

/// Graded grid on [0, R] refined toward the Robin boundary. Doubling the
/// element count halves every element.
std::vector<double> graded_grid(double radius, int elements, double grading);

RadialEigenpair solve_radial_weak(const RadialProblem& prob, const WeakOptions& opts = {});
RadialEigenpair solve_radial_weak(const RadialProblem& prob, int elements);

/// Richardson extrapolation of the weak eigenvalue from N and 2N elements
/// (second-order error model).
double solve_radial_weak_extrapolated(const RadialProblem& prob, int elements = 2048);

/// Shooting residual F(lambda) = psi'(R) + beta psi(R) for the series launch
/// psi(0) = 1.
double shooting_residual(const RadialProblem& prob, double lambda);

struct ShootingTrace {
    double psi_R = 0.0;
    double dpsi_R = 0.0;
    int sign_changes = 0;  // zero crossings of psi on [r0, R]
    double psi_min = 0.0;
};

ShootingTrace shoot(const RadialProblem& prob, double lambda);

/// Bracket for lambda_1. For beta < 0 returns [lo, 0] with lo found by
/// doubling downward from the constant-trial bound; for beta > 0 returns
/// [0, hi]. The optional seed (typically a weak-form eigenvalue) tightens the
/// upper end for beta > 0 so the bracket excludes lambda_2.
Interval bracket_lambda1(const RadialProblem& prob, std::optional<double> seed = std::nullopt);

/// Smallest root of the shooting residual inside the bracket.
double solve_radial_shooting(const RadialProblem& prob, Interval bracket);

/// Convenience: weak seed, bracket, shooting. Returns the weak eigenpair with
/// lambda1 replaced by the shooting eigenvalue.
RadialEigenpair solve_radial(const RadialProblem& prob, int elements = 512);

/// Extrema and weighted L^2 norm of a sampled eigenfunction. Throws
/// MonotonicityError when beta != 0 and the profile is not strictly monotone
/// in the direction the sign of beta dictates.
EigenQuantities eigen_quantities(const RadialEigenpair& pair, const hypgeo::SpaceParams& sp);

/// beta * |dB_R| / |B_R|, the Rayleigh quotient of u == 1.
double rayleigh_constant_bound(const hypgeo::SpaceParams& sp, double radius, double beta);

/// Eigenpair with psi multiplied by factor (and v_min, v_max, l2_sq rescaled).
RadialEigenpair rescaled(const RadialEigenpair& pair, double factor);

} // namespace hyprobin::radial
