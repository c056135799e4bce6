#include "hyprobin/hypgeo.hpp"

#include "hyprobin/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace hyprobin::hypgeo {

namespace {

void require_positive_radius(double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw DomainError("ball radius must be positive and finite, got " + std::to_string(radius));
}

double binomial(int n, int k)
{
    double c = 1.0;
    for (int j = 1; j <= k; ++j)
        c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
    return c;
}

} // namespace

double unit_sphere_area(int n)
{
    if (n < 2)
        throw DomainError("dimension must be >= 2, got " + std::to_string(n));
    const double half = 0.5 * static_cast<double>(n);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

SpaceParams SpaceParams::make(int n)
{
    return SpaceParams{n, unit_sphere_area(n)};
}

BallGeometry ball_geometry(const SpaceParams& sp, double radius)
{
    return BallGeometry{radius, ball_perimeter(sp, radius), ball_volume(sp, radius)};
}

double ball_perimeter(const SpaceParams& sp, double radius)
{
    require_positive_radius(radius);
    return sp.omega * std::pow(std::sinh(radius), sp.n - 1);
}

double ball_volume(const SpaceParams& sp, double radius)
{
    require_positive_radius(radius);
    if (sp.n == 2)
        return sp.omega * (std::cosh(radius) - 1.0);

    const int power = sp.n - 1;
    auto integrand = [power](double s) { return std::pow(std::sinh(s), power); };
    double error = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        integrand, 0.0, radius, 20, 1e-14, &error);
    if (sp.omega * error > 1e-10 * std::max(1.0, sp.omega * integral))
        throw SolverError("ball volume quadrature did not reach tolerance");
    return sp.omega * integral;
}

double radius_from_perimeter(const SpaceParams& sp, double perimeter)
{
    if (!(perimeter > 0.0) || !std::isfinite(perimeter))
        throw DomainError("perimeter must be positive, got " + std::to_string(perimeter));
    return std::asinh(std::pow(perimeter / sp.omega, 1.0 / static_cast<double>(sp.n - 1)));
}

double ball_parallel_perimeter(const SpaceParams& sp, double radius, double t)
{
    require_positive_radius(radius);
    if (t < 0.0)
        throw DomainError("parallel offset must be non-negative");
    if (t >= radius)
        throw DomainError("offset " + std::to_string(t) + " exhausts ball of radius " +
                          std::to_string(radius));
    return sp.omega * std::pow(std::sinh(radius - t), sp.n - 1);
}

double ball_curvature_integral(const SpaceParams& sp, double radius, int index)
{
    require_positive_radius(radius);
    if (index < 0 || index > sp.n - 1)
        throw DomainError("curvature integral index " + std::to_string(index) +
                          " outside [0, " + std::to_string(sp.n - 1) + "]");
    const double coth = std::cosh(radius) / std::sinh(radius);
    return ball_perimeter(sp, radius) * std::pow(coth, sp.n - 1 - index);
}

std::vector<double> ball_curvature_integrals(const SpaceParams& sp, double radius)
{
    std::vector<double> v(static_cast<std::size_t>(sp.n));
    for (int i = 0; i < sp.n; ++i)
        v[static_cast<std::size_t>(i)] = ball_curvature_integral(sp, radius, i);
    return v;
}

double af_rhs(const SpaceParams& sp, double perimeter)
{
    if (!(perimeter > 0.0))
        throw DomainError("perimeter must be positive, got " + std::to_string(perimeter));
    const double x = perimeter / sp.omega;
    const double exponent = 2.0 * (sp.n - 2) / static_cast<double>(sp.n - 1);
    return (sp.n - 1) * sp.omega * std::sqrt(x * x + std::pow(x, exponent));
}

double steiner_outer_perimeter(const SpaceParams& sp, std::span<const double> curvature_integrals,
                               double s)
{
    if (curvature_integrals.size() != static_cast<std::size_t>(sp.n))
        throw ContractError("Steiner formula needs " + std::to_string(sp.n) +
                            " curvature integrals, got " +
                            std::to_string(curvature_integrals.size()));
    if (s < 0.0)
        throw DomainError("outer offset must be non-negative");
    const double ch = std::cosh(s);
    const double sh = std::sinh(s);
    double total = 0.0;
    for (int i = 0; i < sp.n; ++i)
        total += binomial(sp.n - 1, i) * std::pow(ch, i) * std::pow(sh, sp.n - 1 - i) *
                 curvature_integrals[static_cast<std::size_t>(i)];
    return total;
}

} // namespace hyprobin::hypgeo
