#pragma once

#include "hyprobin/domain2d.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

// Piecewise-linear finite elements for the Robin Laplacian on domains of H^2,
// discretized in the Poincare disk. The Dirichlet energy is conformally
// invariant in two dimensions, so only the mass and boundary terms carry the
// metric factor 2 / (1 - |x|^2).
namespace hyprobin::fem2d {

struct DiskMesh {
    std::vector<Eigen::Vector2d> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> boundary_edges;  // closed loop, counter-clockwise

    std::size_t edge_count() const;
};

/// Structured mesh of the radial domain: geodesic polar (rho r(theta), theta),
/// rho in [0, 1], mapped to Euclidean radius tanh(rho r(theta) / 2). One center
/// vertex, n_r rings of n_theta vertices, boundary on the last ring.
DiskMesh mesh_domain(const domain2d::RadialCurve& curve, int n_r, int n_theta);

/// Plain-text dump: "x y" per vertex, then "i j k" per triangle (zero-based).
void write_mesh(std::ostream& out, const DiskMesh& mesh);

using SparseMatrix = Eigen::SparseMatrix<double>;

struct RobinMatrices {
    SparseMatrix stiffness;      // K, Euclidean
    SparseMatrix boundary_mass;  // B, weight 2/(1-|x|^2) on the boundary loop
    SparseMatrix mass;           // M, weight 4/(1-|x|^2)^2
};

RobinMatrices assemble(const DiskMesh& mesh);

struct RobinEigenResult {
    double lambda1 = 0.0;
    Eigen::VectorXd u;  // positive, max-normalized
    std::size_t dof = 0;
    double residual = 0.0;  // ||(K + beta B - lambda M) u|| / (||K + beta B||_inf ||u||)
};

enum class EigenMethod {
    shift_invert,  // sparse Cholesky of K + beta B - sigma M, inverse iteration
    dense,         // full symmetric-definite reduction; small meshes only
};

/// Smallest eigenpair of (K + beta B) u = lambda M u.
RobinEigenResult solve_pencil(const RobinMatrices& mats, double beta,
                              EigenMethod method = EigenMethod::shift_invert);

struct FemResolution {
    int n_r = 48;
    int n_theta = 192;
    int refinements = 2;
};

struct DomainSolve {
    double beta = 0.0;
    double lambda1 = 0.0;         // Richardson-extrapolated
    double error_estimate = 0.0;  // |last - previous| on the ladder
    std::vector<double> ladder;   // raw eigenvalues, coarse to fine
    double observed_order = 0.0;  // from the last three rungs, 0 if unavailable
    std::string warning;
};

DomainSolve solve_domain(const domain2d::RadialCurve& curve, double beta,
                         const FemResolution& res = {});

/// Same as above for several betas; meshes and matrices are shared.
std::vector<DomainSolve> solve_domain(const domain2d::RadialCurve& curve,
                                      std::span<const double> betas,
                                      const FemResolution& res = {});

/// Constant-trial Rayleigh quotient 1^T (K + beta B) 1 / 1^T M 1.
double constant_rayleigh_quotient(const RobinMatrices& mats, double beta);

} // namespace hyprobin::fem2d
