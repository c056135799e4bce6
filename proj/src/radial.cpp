#include "hyprobin/radial.hpp"

#include "hyprobin/errors.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace hyprobin::radial {

namespace {

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563,
                                               0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461,
                                                 0.6521451548625461, 0.3478548451374538};

constexpr double kLaunchRadius = 1e-4;
constexpr double kOdeRelTol = 1e-10;
constexpr double kOdeAbsTol = 1e-12;

void validate(const RadialProblem& prob)
{
    if (prob.space.n < 2)
        throw DomainError("dimension must be >= 2");
    if (!(prob.radius > 0.0) || !std::isfinite(prob.radius))
        throw DomainError("ball radius must be positive");
    if (!std::isfinite(prob.beta))
        throw DomainError("beta must be finite");
}

double weight(const hypgeo::SpaceParams& sp, double r)
{
    return sp.omega * std::pow(std::sinh(r), sp.n - 1);
}

// Symmetric tridiagonal matrix stored as diagonal + first off-diagonal.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }

    std::vector<double> apply(const std::vector<double>& x) const
    {
        const std::size_t n = size();
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = diag[i] * x[i];
            if (i > 0)
                v += off[i - 1] * x[i - 1];
            if (i + 1 < n)
                v += off[i] * x[i + 1];
            y[i] = v;
        }
        return y;
    }
};

struct Pencil {
    Tridiagonal stiffness;  // includes the Robin boundary term
    Tridiagonal mass;
};

Pencil assemble_pencil(const RadialProblem& prob, const std::vector<double>& grid)
{
    const std::size_t nodes = grid.size();
    Pencil p;
    p.stiffness.diag.assign(nodes, 0.0);
    p.stiffness.off.assign(nodes - 1, 0.0);
    p.mass.diag.assign(nodes, 0.0);
    p.mass.off.assign(nodes - 1, 0.0);

    for (std::size_t e = 0; e + 1 < nodes; ++e) {
        const double a = grid[e];
        const double b = grid[e + 1];
        const double h = b - a;
        double w_int = 0.0, m00 = 0.0, m01 = 0.0, m11 = 0.0;
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            const double xi = 0.5 * (kGaussNodes[q] + 1.0);
            const double r = a + xi * h;
            const double wq = 0.5 * h * kGaussWeights[q] * weight(prob.space, r);
            const double phi0 = 1.0 - xi;
            const double phi1 = xi;
            w_int += wq;
            m00 += wq * phi0 * phi0;
            m01 += wq * phi0 * phi1;
            m11 += wq * phi1 * phi1;
        }
        const double k = w_int / (h * h);
        p.stiffness.diag[e] += k;
        p.stiffness.diag[e + 1] += k;
        p.stiffness.off[e] -= k;
        p.mass.diag[e] += m00;
        p.mass.diag[e + 1] += m11;
        p.mass.off[e] += m01;
    }
    p.stiffness.diag.back() += prob.beta * weight(prob.space, grid.back());

    for (double m : p.mass.diag)
        if (!(m > 0.0))
            throw SolverError("radial mass matrix has a non-positive diagonal entry (assembly bug)");
    return p;
}

// Number of eigenvalues of (A, M) strictly below sigma, by Sylvester inertia of
// the LDL^T factorization of A - sigma M.
int sturm_count(const Pencil& p, double sigma)
{
    const std::size_t n = p.stiffness.size();
    int negatives = 0;
    double pivot = 0.0;
    constexpr double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0; i < n; ++i) {
        double d = p.stiffness.diag[i] - sigma * p.mass.diag[i];
        if (i > 0) {
            const double e = p.stiffness.off[i - 1] - sigma * p.mass.off[i - 1];
            d -= e * e / pivot;
        }
        if (d == 0.0)
            d = -tiny;
        if (d < 0.0)
            ++negatives;
        pivot = d;
    }
    return negatives;
}

// Solves (A - sigma M) x = rhs by the Thomas algorithm.
std::vector<double> shifted_solve(const Pencil& p, double sigma, const std::vector<double>& rhs)
{
    const std::size_t n = rhs.size();
    std::vector<double> c(n, 0.0), d(n, 0.0);
    auto diag = [&](std::size_t i) { return p.stiffness.diag[i] - sigma * p.mass.diag[i]; };
    auto off = [&](std::size_t i) { return p.stiffness.off[i] - sigma * p.mass.off[i]; };

    double denom = diag(0);
    c[0] = n > 1 ? off(0) / denom : 0.0;
    d[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag(i) - off(i - 1) * c[i - 1];
        if (denom == 0.0)
            denom = std::numeric_limits<double>::epsilon() * std::abs(diag(i));
        c[i] = i + 1 < n ? off(i) / denom : 0.0;
        d[i] = (rhs[i] - off(i - 1) * d[i - 1]) / denom;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

struct PencilSolution {
    double lambda = 0.0;
    std::vector<double> vector;
};

PencilSolution smallest_tridiagonal(const Pencil& p)
{
    const std::size_t n = p.stiffness.size();
    const std::vector<double> ones(n, 1.0);
    const double upper_rq = dot(ones, p.stiffness.apply(ones)) / dot(ones, p.mass.apply(ones));

    // At beta = 0 the bound is attained, so round-off in the LDL^T pivots can
    // put lambda_1 a hair above it; widen the slack a few decades if needed.
    double slack = 1e-10 * std::max(1.0, std::abs(upper_rq));
    double hi = upper_rq + slack;
    for (int k = 0; sturm_count(p, hi) < 1; ++k) {
        if (k == 6)
            throw SolverError("Sturm count found no eigenvalue below the constant-trial bound");
        slack *= 10.0;
        hi = upper_rq + slack;
    }
    double step = std::max(1.0, std::abs(upper_rq));
    double lo = std::min(upper_rq, 0.0) - step;
    for (int k = 0; sturm_count(p, lo) > 0; ++k) {
        if (k > 200)
            throw SolverError("could not find a lower bound for the radial eigenvalue");
        step *= 2.0;
        lo -= step;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (sturm_count(p, mid) > 0)
            hi = mid;
        else
            lo = mid;
    }

    // Inverse iteration just below lambda_1, where A - sigma M is positive definite.
    const double sigma = lo - 1e-12 * std::max(1.0, std::abs(lo));
    std::vector<double> x = ones;
    for (int it = 0; it < 4; ++it) {
        x = shifted_solve(p, sigma, p.mass.apply(x));
        const double norm = std::sqrt(dot(x, p.mass.apply(x)));
        for (double& v : x)
            v /= norm;
    }
    const double rq = dot(x, p.stiffness.apply(x)) / dot(x, p.mass.apply(x));
    return {rq, std::move(x)};
}

PencilSolution smallest_dense(const Pencil& p)
{
    const Eigen::Index n = static_cast<Eigen::Index>(p.stiffness.size());
    if (n > 4097)
        throw SolverError("dense radial pencil limited to 4096 elements");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        a(i, i) = p.stiffness.diag[ui];
        m(i, i) = p.mass.diag[ui];
        if (i + 1 < n) {
            a(i, i + 1) = a(i + 1, i) = p.stiffness.off[ui];
            m(i, i + 1) = m(i + 1, i) = p.mass.off[ui];
        }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, m);
    if (solver.info() != Eigen::Success)
        throw SolverError("dense generalized eigensolver failed (mass matrix not positive definite?)");
    const Eigen::VectorXd v = solver.eigenvectors().col(0);
    return {solver.eigenvalues()(0), std::vector<double>(v.data(), v.data() + n)};
}

double simpson_nonuniform(const std::vector<double>& x, const std::vector<double>& f)
{
    const std::size_t n = x.size();
    double total = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) {
        const double h0 = x[i + 1] - x[i];
        const double h1 = x[i + 2] - x[i + 1];
        total += (h0 + h1) / 6.0 *
                 ((2.0 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] +
                  (2.0 - h0 / h1) * f[i + 2]);
    }
    if (i + 1 < n)
        total += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
    return total;
}

} // namespace

std::vector<double> graded_grid(double radius, int elements, double grading)
{
    if (elements < 1)
        throw DomainError("grid needs at least one element");
    if (!(grading > 0.0))
        throw DomainError("grading ratio must be positive");
    std::vector<double> grid(static_cast<std::size_t>(elements) + 1);
    for (int i = 0; i <= elements; ++i) {
        const double xi = static_cast<double>(i) / elements;
        grid[static_cast<std::size_t>(i)] =
            grading == 1.0 ? radius * xi
                           : radius * (1.0 - std::pow(grading, xi)) / (1.0 - grading);
    }
    grid.front() = 0.0;
    grid.back() = radius;
    return grid;
}

RadialEigenpair solve_radial_weak(const RadialProblem& prob, int elements)
{
    WeakOptions opts;
    opts.elements = elements;
    return solve_radial_weak(prob, opts);
}

RadialEigenpair solve_radial_weak(const RadialProblem& prob, const WeakOptions& opts)
{
    validate(prob);
    if (opts.elements < 16)
        throw DomainError("radial weak form needs at least 16 elements");

    RadialEigenpair pair;
    pair.beta = prob.beta;
    pair.grid = graded_grid(prob.radius, opts.elements, opts.grading);
    const Pencil pencil = assemble_pencil(prob, pair.grid);

    PencilSolution sol = opts.method == PencilMethod::dense ? smallest_dense(pencil)
                                                            : smallest_tridiagonal(pencil);
    if (sol.vector.front() == 0.0)
        throw SolverError("radial eigenvector vanishes at the origin");
    const double scale = 1.0 / sol.vector.front();
    for (double& v : sol.vector)
        v *= scale;

    pair.lambda1 = sol.lambda;
    pair.psi = std::move(sol.vector);

    const std::size_t n = pair.grid.size();
    const double h0 = pair.grid[n - 1] - pair.grid[n - 2];
    const double h1 = pair.grid[n - 2] - pair.grid[n - 3];
    // one-sided quadratic derivative at r = R
    const double d_end = pair.psi[n - 1] * (2.0 * h0 + h1) / (h0 * (h0 + h1)) -
                         pair.psi[n - 2] * (h0 + h1) / (h0 * h1) +
                         pair.psi[n - 3] * h0 / (h1 * (h0 + h1));
    pair.boundary_residual = std::abs(d_end + prob.beta * pair.psi.back());

    const EigenQuantities q = eigen_quantities(pair, prob.space);
    pair.v_min = q.v_min;
    pair.v_max = q.v_max;
    pair.l2_sq = q.l2_sq;
    return pair;
}

double solve_radial_weak_extrapolated(const RadialProblem& prob, int elements)
{
    const double coarse = solve_radial_weak(prob, elements).lambda1;
    const double fine = solve_radial_weak(prob, 2 * elements).lambda1;
    return (4.0 * fine - coarse) / 3.0;
}

ShootingTrace shoot(const RadialProblem& prob, double lambda)
{
    validate(prob);
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;

    const int n = prob.space.n;
    const double r0 = std::min(kLaunchRadius, 0.5 * prob.radius);
    // psi = 1 + a r^2 + c r^4 + O(r^6) with coth r = 1/r + r/3 + O(r^3)
    const double a = -lambda / (2.0 * n);
    const double c = -a * (lambda + 2.0 * (n - 1) / 3.0) / (4.0 * (n + 2));

    State state = {1.0 + a * r0 * r0 + c * r0 * r0 * r0 * r0,
                   2.0 * a * r0 + 4.0 * c * r0 * r0 * r0};
    auto rhs = [n, lambda](const State& x, State& dx, double r) {
        dx[0] = x[1];
        dx[1] = -(n - 1) * (std::cosh(r) / std::sinh(r)) * x[1] - lambda * x[0];
    };

    ShootingTrace trace;
    trace.psi_min = state[0];
    double prev = state[0];
    auto observer = [&](const State& x, double) {
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
            throw SolverError("shooting integration blew up at lambda = " + std::to_string(lambda));
        if ((x[0] > 0.0) != (prev > 0.0))
            ++trace.sign_changes;
        prev = x[0];
        trace.psi_min = std::min(trace.psi_min, x[0]);
    };

    auto stepper = odeint::make_controlled(kOdeAbsTol, kOdeRelTol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, state, r0, prob.radius, 1e-3 * prob.radius, observer);
    trace.psi_R = state[0];
    trace.dpsi_R = state[1];
    return trace;
}

double shooting_residual(const RadialProblem& prob, double lambda)
{
    const ShootingTrace t = shoot(prob, lambda);
    return t.dpsi_R + prob.beta * t.psi_R;
}

Interval bracket_lambda1(const RadialProblem& prob, std::optional<double> seed)
{
    validate(prob);
    if (prob.beta == 0.0)
        throw DomainError("beta = 0 needs no bracket: lambda_1 = 0");
    const double bound = rayleigh_constant_bound(prob.space, prob.radius, prob.beta);
    const bool start_positive = prob.beta > 0.0;  // sign of F(0) = beta

    if (prob.beta < 0.0) {
        double lo = bound;
        if (seed && *seed < lo)
            lo = *seed;
        for (int k = 0; k < 60; ++k) {
            if ((shooting_residual(prob, lo) > 0.0) != start_positive)
                return {lo, 0.0};
            lo *= 2.0;
        }
        throw BracketError("no sign change of the shooting residual after 60 doublings");
    }

    double hi = bound;
    if (seed && *seed > 0.0)
        hi = std::min(hi, *seed + 1e-3 * std::max(1.0, std::abs(*seed)));
    for (int k = 0; k < 60; ++k) {
        if ((shooting_residual(prob, hi) > 0.0) != start_positive)
            return {0.0, hi};
        hi *= 2.0;
    }
    throw BracketError("no sign change of the shooting residual after 60 doublings");
}

double solve_radial_shooting(const RadialProblem& prob, Interval bracket)
{
    validate(prob);
    if (!(bracket.lo < bracket.hi))
        throw BracketError("empty bracket");

    // Locate the first sign change: the smallest root inside the bracket.
    constexpr int scan = 32;
    double a = bracket.lo;
    double fa = shooting_residual(prob, a);
    double b = a, fb = fa;
    bool found = fa == 0.0;
    for (int i = 1; i <= scan && !found; ++i) {
        b = bracket.lo + (bracket.hi - bracket.lo) * i / scan;
        fb = shooting_residual(prob, b);
        if (fb == 0.0 || (fa > 0.0) != (fb > 0.0)) {
            found = true;
            break;
        }
        a = b;
        fa = fb;
    }
    if (!found)
        throw BracketError("shooting residual has no sign change in [" + std::to_string(bracket.lo) +
                           ", " + std::to_string(bracket.hi) + "]");
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;

    const double width0 = b - a;
    double root = 0.5 * (a + b);
    for (int it = 0; it < 300; ++it) {
        double candidate;
        if (b - a > 1e-3 * width0) {
            candidate = 0.5 * (a + b);
        } else {
            candidate = b - fb * (b - a) / (fb - fa);
            if (!(candidate > a && candidate < b))
                candidate = 0.5 * (a + b);
        }
        const ShootingTrace t = shoot(prob, candidate);
        const double fc = t.dpsi_R + prob.beta * t.psi_R;
        root = candidate;
        const double scale = std::max(1.0, std::abs(t.psi_R));
        if (std::abs(fc) <= 1e-9 * scale || (b - a) <= 1e-14 * std::max(1.0, std::abs(candidate)))
            break;
        if ((fc > 0.0) == (fa > 0.0)) {
            a = candidate;
            fa = fc;
        } else {
            b = candidate;
            fb = fc;
        }
    }

    const ShootingTrace final_trace = shoot(prob, root);
    if (final_trace.sign_changes != 0 || final_trace.psi_R <= 0.0)
        throw SolverError("shooting root " + std::to_string(root) +
                          " has a sign-changing eigenfunction; bracket missed lambda_1");
    return root;
}

RadialEigenpair solve_radial(const RadialProblem& prob, int elements)
{
    RadialEigenpair pair = solve_radial_weak(prob, elements);
    if (prob.beta == 0.0)
        return pair;
    const Interval bracket = bracket_lambda1(prob, pair.lambda1);
    pair.lambda1 = solve_radial_shooting(prob, bracket);
    return pair;
}

EigenQuantities eigen_quantities(const RadialEigenpair& pair, const hypgeo::SpaceParams& sp)
{
    const auto& psi = pair.psi;
    const std::size_t n = psi.size();
    if (n < 3 || pair.grid.size() != n)
        throw ContractError("eigenpair grid and samples must have equal length >= 3");
    for (double v : psi)
        if (!(v > 0.0))
            throw MonotonicityError("first radial eigenfunction is not positive");

    EigenQuantities q;
    if (pair.beta != 0.0) {
        const bool increasing = pair.beta < 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const bool ok = increasing ? psi[i] > psi[i - 1] : psi[i] < psi[i - 1];
            if (!ok)
                throw MonotonicityError("radial eigenfunction not strictly " +
                                        std::string(increasing ? "increasing" : "decreasing") +
                                        " at r = " + std::to_string(pair.grid[i]));
        }
        q.v_min = increasing ? psi.front() : psi.back();
        q.v_max = increasing ? psi.back() : psi.front();
    } else {
        const auto [mn, mx] = std::minmax_element(psi.begin(), psi.end());
        q.v_min = *mn;
        q.v_max = *mx;
    }

    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = psi[i] * psi[i] * weight(sp, pair.grid[i]);
    q.l2_sq = simpson_nonuniform(pair.grid, f);
    return q;
}

double rayleigh_constant_bound(const hypgeo::SpaceParams& sp, double radius, double beta)
{
    return beta * hypgeo::ball_perimeter(sp, radius) / hypgeo::ball_volume(sp, radius);
}

RadialEigenpair rescaled(const RadialEigenpair& pair, double factor)
{
    RadialEigenpair out = pair;
    for (double& v : out.psi)
        v *= factor;
    out.v_min *= factor;
    out.v_max *= factor;
    if (factor < 0.0)
        std::swap(out.v_min, out.v_max);
    out.l2_sq *= factor * factor;
    out.boundary_residual *= std::abs(factor);
    return out;
}

} // namespace hyprobin::radial
