#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hyprobin/errors.hpp"
#include "hyprobin/hypgeo.hpp"

#include <cmath>
#include <numbers>

using namespace hyprobin;
using namespace hyprobin::hypgeo;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("unit sphere areas")
{
    CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(unit_sphere_area(4) == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
    CHECK(unit_sphere_area(5) == doctest::Approx(8.0 * pi * pi / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(SpaceParams::make(1), DomainError);
}

TEST_CASE("ball perimeter and volume")
{
    const auto h2 = SpaceParams::make(2);
    const auto h3 = SpaceParams::make(3);

    CHECK(ball_perimeter(h2, 1.0) == doctest::Approx(7.38400687288264534).epsilon(1e-14));
    CHECK(ball_perimeter(h2, std::asinh(1.0)) == doctest::Approx(2.0 * pi).epsilon(1e-14));
    CHECK(ball_volume(h2, 1.0) == doctest::Approx(3.41227626528490230).epsilon(1e-14));
    // 4 pi int_0^1 sinh^2 = pi (sinh 2 - 2)
    CHECK(ball_volume(h3, 1.0) == doctest::Approx(5.11093270570828897).epsilon(1e-12));
    CHECK(ball_volume(SpaceParams::make(4), 0.8) ==
          doctest::Approx(2.0 * pi * pi * (std::pow(std::cosh(0.8), 3) / 3.0 - std::cosh(0.8) + 2.0 / 3.0))
              .epsilon(1e-12));

    // small-radius Euclidean limits
    CHECK(rel(ball_perimeter(h3, 1e-4), 4.0 * pi * 1e-8) < 1e-7);
    CHECK(rel(ball_volume(h2, 1e-4), pi * 1e-8) < 1e-7);

    CHECK_THROWS_AS(ball_perimeter(h2, 0.0), DomainError);
    CHECK_THROWS_AS(ball_volume(h3, -1.0), DomainError);
}

TEST_CASE("radius from perimeter")
{
    const auto h2 = SpaceParams::make(2);
    CHECK(radius_from_perimeter(h2, 2.0 * pi) == doctest::Approx(0.881373587019543025).epsilon(1e-14));
    CHECK(radius_from_perimeter(h2, 2.0 * pi * std::sinh(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(radius_from_perimeter(SpaceParams::make(3), 4.0 * pi * std::pow(std::sinh(0.5), 2)) ==
          doctest::Approx(0.5).epsilon(1e-14));
    for (int n = 2; n <= 5; ++n) {
        const auto sp = SpaceParams::make(n);
        for (double p : {0.01, 1.0, 7.0, 300.0})
            CHECK(rel(ball_perimeter(sp, radius_from_perimeter(sp, p)), p) < 1e-12);
    }
    CHECK_THROWS_AS(radius_from_perimeter(h2, 0.0), DomainError);
}

TEST_CASE("inner parallel perimeter of a ball")
{
    const auto h2 = SpaceParams::make(2);
    CHECK(ball_parallel_perimeter(h2, 1.0, 0.5) == doctest::Approx(3.27413836711857147).epsilon(1e-14));
    CHECK(ball_parallel_perimeter(h2, 1.0, 0.0) == doctest::Approx(ball_perimeter(h2, 1.0)));
    CHECK_THROWS(ball_parallel_perimeter(h2, 1.0, 1.0));
}

TEST_CASE("curvature integrals of balls")
{
    const auto h2 = SpaceParams::make(2);
    const auto h3 = SpaceParams::make(3);
    CHECK(ball_curvature_integral(h2, 1.0, 0) == doctest::Approx(2.0 * pi * std::cosh(1.0)).epsilon(1e-14));
    // Gauss-Bonnet: V_0 = 2 pi + |B|
    CHECK(ball_curvature_integral(h2, 1.0, 0) ==
          doctest::Approx(2.0 * pi + ball_volume(h2, 1.0)).epsilon(1e-14));
    CHECK(ball_curvature_integral(h2, 1.0, 1) == doctest::Approx(ball_perimeter(h2, 1.0)));
    CHECK(ball_curvature_integral(h3, 1.0, 0) ==
          doctest::Approx(4.0 * pi * std::pow(std::cosh(1.0), 2)).epsilon(1e-14));
    CHECK(ball_curvature_integrals(SpaceParams::make(4), 0.7).size() == 4);
}

TEST_CASE("outer Steiner polynomial reproduces ball perimeters")
{
    for (int n = 2; n <= 4; ++n) {
        const auto sp = SpaceParams::make(n);
        for (double R : {0.3, 1.0, 2.0}) {
            const auto v = ball_curvature_integrals(sp, R);
            for (double s : {0.0, 0.1, 0.5, 1.5})
                CHECK(rel(steiner_outer_perimeter(sp, v, s), ball_perimeter(sp, R + s)) <= 1e-10);
        }
    }
    const auto h2 = SpaceParams::make(2);
    const double P = 7.0, A = 3.0, s = 0.4;
    const double v[] = {2.0 * pi + A, P};
    CHECK(steiner_outer_perimeter(h2, v, s) ==
          doctest::Approx(P * std::cosh(s) + (2.0 * pi + A) * std::sinh(s)).epsilon(1e-14));
    const double short_v[] = {1.0};
    CHECK_THROWS_AS(steiner_outer_perimeter(h2, short_v, s), ContractError);
}

TEST_CASE("perimeter decay bound is attained by balls")
{
    const auto h2 = SpaceParams::make(2);
    CHECK(af_rhs(h2, 7.0) == doctest::Approx(std::sqrt(49.0 + 4.0 * pi * pi)).epsilon(1e-14));
    CHECK(af_rhs(h2, 2.0 * pi * std::sinh(0.8)) == doctest::Approx(2.0 * pi * std::cosh(0.8)).epsilon(1e-14));
    CHECK(af_rhs(SpaceParams::make(3), 4.0 * pi * std::pow(std::sinh(0.8), 2)) ==
          doctest::Approx(8.0 * pi * std::sinh(0.8) * std::cosh(0.8)).epsilon(1e-13));

    // -d/dt of the inner parallel perimeter at t = 0, one-sided second-order difference
    const double h = 1e-5;
    for (int n = 2; n <= 4; ++n) {
        const auto sp = SpaceParams::make(n);
        for (double R : {0.5, 1.0, 2.0}) {
            const double f0 = ball_parallel_perimeter(sp, R, 0.0);
            const double f1 = ball_parallel_perimeter(sp, R, h);
            const double f2 = ball_parallel_perimeter(sp, R, 2.0 * h);
            const double dpdt = (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * h);
            CHECK(rel(dpdt, af_rhs(sp, ball_perimeter(sp, R))) <= 1e-6);
        }
    }
}
