#include "hyprobin/fem2d.hpp"

#include "hyprobin/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <string>

namespace hyprobin::fem2d {

namespace {

constexpr double kIdealBoundaryGap = 1e-10;

using Triplets = std::vector<Eigen::Triplet<double>>;

double conformal_factor(const Eigen::Vector2d& x)
{
    const double gap = 1.0 - x.squaredNorm();
    if (gap < kIdealBoundaryGap)
        throw MeshError("quadrature point too close to the ideal boundary (1 - |x|^2 = " +
                        std::to_string(gap) + ")");
    return 2.0 / gap;
}

double vector_max_norm(const SparseMatrix& a)
{
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it)
            row_sums(it.row()) += std::abs(it.value());
    return row_sums.maxCoeff();
}

// Orthonormalizes the columns of x against the mass inner product.
void mass_orthonormalize(Eigen::MatrixXd& x, const SparseMatrix& mass)
{
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < j; ++i)
                x.col(j) -= x.col(i).dot(mass * x.col(j)) * x.col(i);
        const double norm = std::sqrt(x.col(j).dot(mass * x.col(j)));
        x.col(j) /= norm;
    }
}

RobinEigenResult finish(const SparseMatrix& a, const SparseMatrix& mass, double lambda,
                        Eigen::VectorXd u)
{
    if (u.sum() < 0.0)
        u = -u;
    u /= u.maxCoeff();
    if (u.minCoeff() <= 0.0)
        throw SolverError("first discrete eigenvector is not positive (min " +
                          std::to_string(u.minCoeff()) + ")");
    RobinEigenResult res;
    res.lambda1 = lambda;
    res.dof = static_cast<std::size_t>(u.size());
    res.residual = (a * u - lambda * (mass * u)).norm() / (vector_max_norm(a) * u.norm());
    res.u = std::move(u);
    return res;
}

RobinEigenResult solve_dense(const SparseMatrix& a, const SparseMatrix& mass)
{
    if (a.rows() > 4000)
        throw SolverError("dense eigensolve limited to 4000 unknowns");
    const Eigen::MatrixXd ad(a);
    const Eigen::MatrixXd md(mass);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(ad, md);
    if (solver.info() != Eigen::Success)
        throw SolverError("mass matrix factorization failed: assembly inconsistency");
    return finish(a, mass, solver.eigenvalues()(0), solver.eigenvectors().col(0));
}

RobinEigenResult solve_shift_invert(const SparseMatrix& a, const SparseMatrix& mass,
                                    const DiskMesh* mesh_hint, double upper)
{
    const Eigen::Index n = a.rows();
    Eigen::SimplicialLLT<SparseMatrix> llt;

    // sigma below lambda_1 <=> A - sigma M positive definite
    double step = std::max(1.0, std::abs(upper));
    double sigma = std::min(upper, 0.0) - step;
    llt.analyzePattern(a);
    for (int k = 0;; ++k) {
        llt.factorize(a - sigma * mass);
        if (llt.info() == Eigen::Success)
            break;
        if (k > 60)
            throw SolverError("no definite shift found below the Robin spectrum");
        step *= 2.0;
        sigma -= step;
    }

    // block inverse subspace iteration with Rayleigh-Ritz
    constexpr int block = 4;
    Eigen::MatrixXd x(n, block);
    x.col(0).setOnes();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Vector2d p = mesh_hint ? mesh_hint->vertices[static_cast<std::size_t>(i)]
                                            : Eigen::Vector2d(std::cos(0.7 * i), std::sin(1.3 * i));
        x(i, 1) = p.x();
        x(i, 2) = p.y();
        x(i, 3) = p.squaredNorm();
    }
    mass_orthonormalize(x, mass);
    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(block);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 500; ++it) {
        Eigen::MatrixXd y = llt.solve(mass * x);
        mass_orthonormalize(y, mass);
        const Eigen::MatrixXd ay = y.transpose() * (a * y);
        const Eigen::MatrixXd my = y.transpose() * (mass * y);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(ay, my);
        x = y * small.eigenvectors();
        ritz = small.eigenvalues();
        if (std::abs(ritz(0) - prev) <= 1e-11 * std::max(1.0, std::abs(ritz(0))))
            break;
        prev = ritz(0);
    }

    // polish with a shift close to lambda_1
    Eigen::VectorXd u = x.col(0);
    double lambda = ritz(0);
    const double gap = std::max(ritz(1) - ritz(0), 1e-6 * std::max(1.0, std::abs(ritz(0))));
    const double sigma2 = ritz(0) - 0.05 * gap;
    llt.factorize(a - sigma2 * mass);
    if (llt.info() == Eigen::Success) {
        for (int it = 0; it < 20; ++it) {
            u = llt.solve(mass * u);
            u /= std::sqrt(u.dot(mass * u));
            const double next = u.dot(a * u);
            const bool done = std::abs(next - lambda) <= 1e-15 * std::max(1.0, std::abs(next));
            lambda = next;
            if (done && it > 1)
                break;
        }
    }
    return finish(a, mass, lambda, std::move(u));
}

} // namespace

std::size_t DiskMesh::edge_count() const
{
    std::set<std::pair<int, int>> edges;
    for (const auto& t : triangles)
        for (int e = 0; e < 3; ++e) {
            const int i = t[static_cast<std::size_t>(e)];
            const int j = t[static_cast<std::size_t>((e + 1) % 3)];
            edges.emplace(std::min(i, j), std::max(i, j));
        }
    return edges.size();
}

DiskMesh mesh_domain(const domain2d::RadialCurve& curve, int n_r, int n_theta)
{
    if (n_r < 8 || n_theta < 64)
        throw MeshError("mesh needs n_r >= 8 and n_theta >= 64");
    const domain2d::TrigSeries series(curve.r);

    DiskMesh mesh;
    mesh.vertices.reserve(1 + static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta));
    mesh.vertices.emplace_back(0.0, 0.0);
    std::vector<double> boundary_r(static_cast<std::size_t>(n_theta));
    for (int j = 0; j < n_theta; ++j) {
        const double th = 2.0 * std::numbers::pi * j / n_theta;
        boundary_r[static_cast<std::size_t>(j)] = series.value(th);
    }
    for (int i = 1; i <= n_r; ++i) {
        const double rho = static_cast<double>(i) / n_r;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n_theta;
            const double euclid = std::tanh(0.5 * rho * boundary_r[static_cast<std::size_t>(j)]);
            mesh.vertices.emplace_back(euclid * std::cos(th), euclid * std::sin(th));
        }
    }

    auto id = [n_theta](int ring, int j) { return 1 + (ring - 1) * n_theta + (j % n_theta); };
    for (int j = 0; j < n_theta; ++j)
        mesh.triangles.push_back({0, id(1, j), id(1, j + 1)});
    for (int i = 1; i < n_r; ++i)
        for (int j = 0; j < n_theta; ++j) {
            mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    for (int j = 0; j < n_theta; ++j)
        mesh.boundary_edges.push_back({id(n_r, j), id(n_r, j + 1)});

    for (const auto& t : mesh.triangles) {
        const Eigen::Vector2d e1 = mesh.vertices[static_cast<std::size_t>(t[1])] -
                                   mesh.vertices[static_cast<std::size_t>(t[0])];
        const Eigen::Vector2d e2 = mesh.vertices[static_cast<std::size_t>(t[2])] -
                                   mesh.vertices[static_cast<std::size_t>(t[0])];
        const double area = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
        if (!(area >= 1e-14))
            throw MeshError("degenerate or inverted triangle (area " + std::to_string(area) + ")");
    }
    for (const auto& v : mesh.vertices)
        if (!(v.squaredNorm() < 1.0))
            throw MeshError("vertex outside the unit disk");
    return mesh;
}

void write_mesh(std::ostream& out, const DiskMesh& mesh)
{
    out.precision(17);
    for (const auto& v : mesh.vertices)
        out << v.x() << ' ' << v.y() << '\n';
    for (const auto& t : mesh.triangles)
        out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

RobinMatrices assemble(const DiskMesh& mesh)
{
    const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
    Triplets k_trip, m_trip, b_trip;
    k_trip.reserve(9 * mesh.triangles.size());
    m_trip.reserve(9 * mesh.triangles.size());
    b_trip.reserve(4 * mesh.boundary_edges.size());

    // degree-2 interior rule, barycentric coordinates
    constexpr double q_pts[3][3] = {{2.0 / 3, 1.0 / 6, 1.0 / 6},
                                    {1.0 / 6, 2.0 / 3, 1.0 / 6},
                                    {1.0 / 6, 1.0 / 6, 2.0 / 3}};

    for (const auto& t : mesh.triangles) {
        const Eigen::Vector2d& p0 = mesh.vertices[static_cast<std::size_t>(t[0])];
        const Eigen::Vector2d& p1 = mesh.vertices[static_cast<std::size_t>(t[1])];
        const Eigen::Vector2d& p2 = mesh.vertices[static_cast<std::size_t>(t[2])];
        const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                           (p2.x() - p0.x()) * (p1.y() - p0.y());
        const double area = 0.5 * det;

        // gradients of the barycentric functions
        Eigen::Matrix<double, 3, 2> grad;
        grad << p1.y() - p2.y(), p2.x() - p1.x(),
                p2.y() - p0.y(), p0.x() - p2.x(),
                p0.y() - p1.y(), p1.x() - p0.x();
        grad /= det;

        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                k_trip.emplace_back(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)],
                                    area * grad.row(i).dot(grad.row(j)));

        for (const auto& bary : q_pts) {
            const Eigen::Vector2d x = bary[0] * p0 + bary[1] * p1 + bary[2] * p2;
            const double f = conformal_factor(x);
            const double w = area / 3.0 * f * f;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    m_trip.emplace_back(t[static_cast<std::size_t>(i)],
                                        t[static_cast<std::size_t>(j)], w * bary[i] * bary[j]);
        }
    }

    const double g = 0.5 / std::sqrt(3.0);
    for (const auto& e : mesh.boundary_edges) {
        const Eigen::Vector2d& a = mesh.vertices[static_cast<std::size_t>(e[0])];
        const Eigen::Vector2d& b = mesh.vertices[static_cast<std::size_t>(e[1])];
        const double len = (b - a).norm();
        for (double s : {0.5 - g, 0.5 + g}) {
            const Eigen::Vector2d x = (1.0 - s) * a + s * b;
            const double w = 0.5 * len * conformal_factor(x);
            const double phi[2] = {1.0 - s, s};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    b_trip.emplace_back(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)],
                                        w * phi[i] * phi[j]);
        }
    }

    RobinMatrices mats;
    mats.stiffness.resize(n, n);
    mats.mass.resize(n, n);
    mats.boundary_mass.resize(n, n);
    mats.stiffness.setFromTriplets(k_trip.begin(), k_trip.end());
    mats.mass.setFromTriplets(m_trip.begin(), m_trip.end());
    mats.boundary_mass.setFromTriplets(b_trip.begin(), b_trip.end());
    // keep one sparsity pattern so K + beta B - sigma M needs no symbolic rework
    mats.boundary_mass = mats.boundary_mass + 0.0 * mats.stiffness;
    return mats;
}

double constant_rayleigh_quotient(const RobinMatrices& mats, double beta)
{
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mats.mass.rows());
    const double energy = ones.dot(mats.stiffness * ones) + beta * ones.dot(mats.boundary_mass * ones);
    return energy / ones.dot(mats.mass * ones);
}

namespace {

RobinEigenResult solve_pencil_impl(const RobinMatrices& mats, double beta, EigenMethod method,
                                   const DiskMesh* mesh)
{
    const SparseMatrix a = mats.stiffness + beta * mats.boundary_mass;
    if (method == EigenMethod::dense)
        return solve_dense(a, mats.mass);
    return solve_shift_invert(a, mats.mass, mesh, constant_rayleigh_quotient(mats, beta));
}

} // namespace

RobinEigenResult solve_pencil(const RobinMatrices& mats, double beta, EigenMethod method)
{
    return solve_pencil_impl(mats, beta, method, nullptr);
}

std::vector<DomainSolve> solve_domain(const domain2d::RadialCurve& curve,
                                      std::span<const double> betas, const FemResolution& res)
{
    if (res.refinements < 0)
        throw DomainError("refinement count must be non-negative");
    std::vector<DomainSolve> out(betas.size());
    for (std::size_t b = 0; b < betas.size(); ++b)
        out[b].beta = betas[b];

    for (int level = 0; level <= res.refinements; ++level) {
        const DiskMesh mesh = mesh_domain(curve, res.n_r << level, res.n_theta << level);
        const RobinMatrices mats = assemble(mesh);
        for (std::size_t b = 0; b < betas.size(); ++b)
            out[b].ladder.push_back(
                solve_pencil_impl(mats, betas[b], EigenMethod::shift_invert, &mesh).lambda1);
    }

    for (DomainSolve& s : out) {
        const auto& l = s.ladder;
        const std::size_t m = l.size();
        if (m == 1) {
            s.lambda1 = l[0];
            continue;
        }
        s.lambda1 = l[m - 1] + (l[m - 1] - l[m - 2]) / 3.0;
        s.error_estimate = std::abs(l[m - 1] - l[m - 2]);
        if (m >= 3) {
            const double d1 = l[m - 2] - l[m - 3];
            const double d2 = l[m - 1] - l[m - 2];
            const double floor = 1e-13 * std::max(1.0, std::abs(l[m - 1]));
            if (std::abs(d1) > floor && std::abs(d2) > floor)
                s.observed_order = std::log2(std::abs(d1 / d2));
            for (std::size_t i = 2; i < m; ++i) {
                const double prev = l[i - 1] - l[i - 2];
                const double cur = l[i] - l[i - 1];
                if (std::abs(prev) > floor && std::abs(cur) > floor && (prev > 0.0) != (cur > 0.0))
                    s.warning = "non-monotone refinement sequence";
            }
        }
    }
    return out;
}

DomainSolve solve_domain(const domain2d::RadialCurve& curve, double beta, const FemResolution& res)
{
    const double b[1] = {beta};
    return solve_domain(curve, std::span<const double>(b, 1), res).front();
}

} // namespace hyprobin::fem2d
