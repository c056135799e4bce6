#include "hyprobin/domain2d.hpp"

#include "hyprobin/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hyprobin::domain2d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHConvexTol = 1e-9;
constexpr double kGaussBonnetTol = 1e-6;
constexpr double kTailTol = 1e-8;
constexpr double kFocalSafety = 1e-6;
// Fourier coefficients below this fraction of max|r| are DFT round-off; the
// k^2 factor of the second derivative would otherwise amplify them.
constexpr double kNoiseFloor = 1e-14;

void drop_roundoff(std::vector<double>& a, std::vector<double>& b, std::span<const double> samples)
{
    double scale = 0.0;
    for (double v : samples)
        scale = std::max(scale, std::abs(v));
    for (std::size_t k = 1; k < a.size(); ++k) {
        if (std::abs(a[k]) < kNoiseFloor * scale)
            a[k] = 0.0;
        if (std::abs(b[k]) < kNoiseFloor * scale)
            b[k] = 0.0;
    }
}

std::vector<double> uniform_angles(std::size_t m)
{
    std::vector<double> theta(m);
    for (std::size_t j = 0; j < m; ++j)
        theta[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    return theta;
}

struct GridDerivatives {
    std::vector<double> r, dr, ddr;
};

// r, r', r'' at the sample angles via the discrete Fourier series.
GridDerivatives spectral_derivatives(const std::vector<double>& samples)
{
    const std::size_t m = samples.size();
    const std::size_t half = m / 2;
    std::vector<double> cos_table(m), sin_table(m);
    for (std::size_t j = 0; j < m; ++j) {
        cos_table[j] = std::cos(kTwoPi * static_cast<double>(j) / static_cast<double>(m));
        sin_table[j] = std::sin(kTwoPi * static_cast<double>(j) / static_cast<double>(m));
    }
    std::vector<double> a(half + 1, 0.0), b(half + 1, 0.0);
    for (std::size_t k = 0; k <= half; ++k) {
        double sa = 0.0, sb = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t idx = (k * j) % m;
            sa += samples[j] * cos_table[idx];
            sb += samples[j] * sin_table[idx];
        }
        const double norm = (k == 0 || k == half) ? 1.0 / m : 2.0 / m;
        a[k] = sa * norm;
        b[k] = (k == 0 || k == half) ? 0.0 : sb * norm;
    }
    drop_roundoff(a, b, samples);

    GridDerivatives d;
    d.r = samples;
    d.dr.assign(m, 0.0);
    d.ddr.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double d1 = 0.0, d2 = 0.0;
        for (std::size_t k = 1; k <= half; ++k) {
            const std::size_t idx = (k * j) % m;
            const double kk = static_cast<double>(k);
            const double c = cos_table[idx];
            const double s = sin_table[idx];
            if (k < half)
                d1 += kk * (-a[k] * s + b[k] * c);
            d2 += -kk * kk * (a[k] * c + b[k] * s);
        }
        d.dr[j] = d1;
        d.ddr[j] = d2;
    }
    return d;
}

template <class F>
double golden_max(F&& f, double lo, double hi, double tol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

RadialCurve make_curve(std::vector<double> radii)
{
    const std::size_t m = radii.size();
    if (m < 128 || m % 2 != 0)
        throw DomainError("curve needs an even number of samples >= 128, got " + std::to_string(m));
    RadialCurve c;
    c.theta = uniform_angles(m);
    for (std::size_t j = 0; j < m; ++j)
        if (!(radii[j] > 0.0) || !std::isfinite(radii[j]))
            throw DomainError("radius " + std::to_string(radii[j]) + " <= 0 at theta = " +
                              std::to_string(c.theta[j]));
    const TrigSeries series(radii);
    if (series.tail_ratio() > kTailTol)
        throw ResolutionError("radial samples are not spectrally resolved (tail ratio " +
                              std::to_string(series.tail_ratio()) + ")");
    c.r = std::move(radii);
    return c;
}

RadialCurve make_family(double r0, std::span<const Mode> modes, int samples)
{
    if (!(r0 > 0.0))
        throw DomainError("base radius r0 must be positive");
    if (samples < 128 || samples % 2 != 0)
        throw DomainError("curve needs an even number of samples >= 128");
    const auto m = static_cast<std::size_t>(samples);
    const std::vector<double> theta = uniform_angles(m);
    std::vector<double> r(m, r0);
    for (const Mode& mode : modes) {
        if (mode.k < 0 || 2 * mode.k >= samples)
            throw DomainError("mode index " + std::to_string(mode.k) + " not resolved by " +
                              std::to_string(samples) + " samples");
        for (std::size_t j = 0; j < m; ++j)
            r[j] += mode.amplitude * std::cos(mode.k * theta[j] + mode.phase);
    }
    for (std::size_t j = 0; j < m; ++j)
        if (!(r[j] > 0.0))
            throw DomainError("invalid family parameters: r = " + std::to_string(r[j]) +
                              " <= 0 at theta = " + std::to_string(theta[j]));
    return make_curve(std::move(r));
}

TrigSeries::TrigSeries(std::span<const double> samples) : samples_(samples.size())
{
    const std::size_t m = samples.size();
    if (m < 4 || m % 2 != 0)
        throw DomainError("trigonometric interpolation needs an even sample count");
    const std::size_t half = m / 2;
    cos_coef_.assign(half + 1, 0.0);
    sin_coef_.assign(half + 1, 0.0);
    for (std::size_t k = 0; k <= half; ++k) {
        double sa = 0.0, sb = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double phase = kTwoPi * static_cast<double>((k * j) % m) / static_cast<double>(m);
            sa += samples[j] * std::cos(phase);
            sb += samples[j] * std::sin(phase);
        }
        const bool edge = (k == 0 || k == half);
        cos_coef_[k] = sa * (edge ? 1.0 / m : 2.0 / m);
        sin_coef_[k] = edge ? 0.0 : sb * 2.0 / m;
    }
    drop_roundoff(cos_coef_, sin_coef_, samples);
}

double TrigSeries::value(double theta) const
{
    double v = cos_coef_[0];
    for (std::size_t k = 1; k < cos_coef_.size(); ++k) {
        const double kt = static_cast<double>(k) * theta;
        v += cos_coef_[k] * std::cos(kt) + sin_coef_[k] * std::sin(kt);
    }
    return v;
}

double TrigSeries::derivative(double theta) const
{
    double v = 0.0;
    for (std::size_t k = 1; k + 1 < cos_coef_.size(); ++k) {
        const double kk = static_cast<double>(k);
        v += kk * (-cos_coef_[k] * std::sin(kk * theta) + sin_coef_[k] * std::cos(kk * theta));
    }
    return v;
}

double TrigSeries::second_derivative(double theta) const
{
    double v = 0.0;
    for (std::size_t k = 1; k < cos_coef_.size(); ++k) {
        const double kk = static_cast<double>(k);
        v -= kk * kk * (cos_coef_[k] * std::cos(kk * theta) + sin_coef_[k] * std::sin(kk * theta));
    }
    return v;
}

double TrigSeries::tail_ratio() const
{
    const std::size_t cutoff = (3 * samples_) / 8;
    double tail = 0.0, total = 0.0;
    for (std::size_t k = 0; k < cos_coef_.size(); ++k) {
        const double e = cos_coef_[k] * cos_coef_[k] + sin_coef_[k] * sin_coef_[k];
        total += e;
        if (k > cutoff)
            tail += e;
    }
    return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

double CurveGeometry::gauss_bonnet_residual() const
{
    const double expected = kTwoPi + area;
    return std::abs(total_curvature - expected) / expected;
}

bool CurveGeometry::h_convex() const
{
    return kappa_min >= 1.0 - kHConvexTol;
}

CurveGeometry curve_geometry(const RadialCurve& curve)
{
    const std::size_t m = curve.size();
    if (m < 128 || m % 2 != 0 || curve.theta.size() != m)
        throw ContractError("radial curve must have matching theta/r arrays of even size >= 128");
    const GridDerivatives d = spectral_derivatives(curve.r);
    const double dtheta = kTwoPi / static_cast<double>(m);

    CurveGeometry g;
    g.kappa.resize(m);
    g.speed.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double f = std::sinh(d.r[j]);
        const double fp = std::cosh(d.r[j]);
        const double rp = d.dr[j];
        const double q = rp * rp + f * f;
        g.speed[j] = std::sqrt(q);
        g.kappa[j] = (-f * d.ddr[j] + 2.0 * fp * rp * rp + f * f * fp) / (q * g.speed[j]);
        g.perimeter += g.speed[j] * dtheta;
        g.area += (fp - 1.0) * dtheta;
        g.total_curvature += g.kappa[j] * g.speed[j] * dtheta;
    }
    const auto [mn, mx] = std::minmax_element(g.kappa.begin(), g.kappa.end());
    g.kappa_min = *mn;
    g.kappa_max = *mx;
    if (g.gauss_bonnet_residual() > kGaussBonnetTol)
        throw ResolutionError("Gauss-Bonnet residual " + std::to_string(g.gauss_bonnet_residual()) +
                              " above tolerance; refine the angle grid");
    return g;
}

HConvexity check_hconvex(const CurveGeometry& geometry)
{
    return {geometry.h_convex(), geometry.kappa_min - 1.0};
}

double parallel_curvature(double kappa, double t)
{
    const double th = std::tanh(t);
    const double denom = 1.0 - kappa * th;
    if (!(denom > 0.0))
        throw FocalError("offset " + std::to_string(t) + " reaches the focal distance of curvature " +
                         std::to_string(kappa));
    return (kappa - th) / denom;
}

double focal_horizon(const CurveGeometry& geometry)
{
    if (geometry.kappa_max <= 1.0)
        return std::numeric_limits<double>::infinity();
    return std::atanh(1.0 / geometry.kappa_max) - kFocalSafety;
}

double inner_parallel_perimeter(const CurveGeometry& geometry, double t)
{
    const double ch = std::cosh(t);
    const double sh = std::sinh(t);
    const double dtheta = kTwoPi / static_cast<double>(geometry.kappa.size());
    double p = 0.0;
    for (std::size_t j = 0; j < geometry.kappa.size(); ++j)
        p += (ch - geometry.kappa[j] * sh) * geometry.speed[j] * dtheta;
    return p;
}

ParallelProfile inner_parallel_profile(const CurveGeometry& geometry,
                                       std::span<const double> t_grid)
{
    if (!geometry.h_convex())
        throw HypothesisError("inner parallel profile needs an h-convex curve (kappa_min = " +
                              std::to_string(geometry.kappa_min) + ")");
    ParallelProfile profile;
    profile.t_valid = focal_horizon(geometry);
    double prev = -1.0;
    for (double t : t_grid) {
        if (t < 0.0 || t <= prev)
            throw ContractError("offset grid must be non-negative and strictly increasing");
        prev = t;
        if (t > profile.t_valid)
            continue;
        profile.t.push_back(t);
        profile.perimeter.push_back(inner_parallel_perimeter(geometry, t));
    }
    return profile;
}

ParallelProfile inner_parallel_profile(const RadialCurve& curve, std::span<const double> t_grid)
{
    return inner_parallel_profile(curve_geometry(curve), t_grid);
}

double outer_parallel_perimeter(const CurveGeometry& geometry, double s)
{
    if (s < 0.0)
        throw DomainError("outer offset must be non-negative");
    return inner_parallel_perimeter(geometry, -s);
}

double outer_parallel_perimeter(const RadialCurve& curve, double s)
{
    return outer_parallel_perimeter(curve_geometry(curve), s);
}

HyperboloidPoint HyperboloidPoint::from_polar(double r, double theta)
{
    const double sh = std::sinh(r);
    return {std::cosh(r), sh * std::cos(theta), sh * std::sin(theta)};
}

double minkowski_dot(const HyperboloidPoint& p, const HyperboloidPoint& q)
{
    return -p.x0 * q.x0 + p.x1 * q.x1 + p.x2 * q.x2;
}

double hyperboloid_distance(const HyperboloidPoint& p, const HyperboloidPoint& q)
{
    for (const HyperboloidPoint* x : {&p, &q}) {
        const double norm = minkowski_dot(*x, *x);
        if (std::abs(norm + 1.0) > 1e-10 * std::max(1.0, x->x0 * x->x0) || x->x0 < 1.0 - 1e-12)
            throw DomainError("point is not on the upper hyperboloid sheet");
    }
    const double c = -minkowski_dot(p, q);
    if (c < 1.0 - 1e-9)
        throw DomainError("-<p,q> = " + std::to_string(c) + " < 1: invalid point pair");
    return std::acosh(std::max(c, 1.0));
}

double inradius(const RadialCurve& curve, const InradiusOptions& opts)
{
    if (opts.grid < 4 || opts.boundary_samples < 16)
        throw ResolutionError("inradius grid too coarse");
    const TrigSeries series(curve.r);
    const auto nb = static_cast<std::size_t>(opts.boundary_samples);
    std::vector<HyperboloidPoint> boundary(nb);
    double r_max = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
        const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(nb);
        const double r = series.value(th);
        if (!(r > 0.0))
            throw DomainError("curve interpolant is not star-shaped about its center");
        r_max = std::max(r_max, r);
        boundary[k] = HyperboloidPoint::from_polar(r, th);
    }

    // distance from an interior point to the sampled boundary
    auto depth = [&](const HyperboloidPoint& p) {
        double best = std::numeric_limits<double>::infinity();
        for (const HyperboloidPoint& b : boundary)
            best = std::min(best, -minkowski_dot(p, b));
        return std::acosh(std::max(best, 1.0));
    };
    // points addressed in the exponential chart at the center
    auto depth_xy = [&](double x, double y) {
        const double r = std::hypot(x, y);
        const double th = std::atan2(y, x);
        if (r > 0.0 && r >= series.value(th))
            return 0.0;
        return depth(HyperboloidPoint::from_polar(r, th));
    };

    double best = -1.0, bx = 0.0, by = 0.0;
    for (int i = 0; i < opts.grid; ++i) {
        const double rho = static_cast<double>(i) / opts.grid;
        for (int j = 0; j < (i == 0 ? 1 : opts.grid); ++j) {
            const double th = kTwoPi * j / opts.grid;
            const double r = rho * series.value(th);
            const double d = depth(HyperboloidPoint::from_polar(r, th));
            if (d > best) {
                best = d;
                bx = r * std::cos(th);
                by = r * std::sin(th);
            }
        }
    }

    const std::array<std::array<double, 2>, 4> dirs = {
        {{1.0, 0.0}, {0.0, 1.0}, {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2},
         {std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2}}};
    double h = 2.0 * r_max / opts.grid;
    for (int sweep = 0; sweep < 40 && h > 1e-7; ++sweep) {
        const double before = best;
        for (const auto& u : dirs) {
            auto line = [&](double s) { return depth_xy(bx + s * u[0], by + s * u[1]); };
            const double s = golden_max(line, -h, h, 1e-3 * h);
            const double v = line(s);
            if (v > best) {
                best = v;
                bx += s * u[0];
                by += s * u[1];
            }
        }
        if (best - before < 1e-10)
            h *= 0.5;
    }
    return best;
}

} // namespace hyprobin::domain2d
