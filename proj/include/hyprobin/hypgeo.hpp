#pragma once

#include <span>
#include <vector>

// Closed-form geometry of geodesic balls in the hyperbolic space H^n of
// curvature -1. All lengths and measures are dimensionless.
namespace hyprobin::hypgeo {

/// Area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

struct SpaceParams {
    int n = 2;
    double omega = 0.0;

    /// Validated constructor; throws DomainError for n < 2.
    static SpaceParams make(int n);
};

struct BallGeometry {
    double radius = 0.0;
    double perimeter = 0.0;
    double volume = 0.0;
};

BallGeometry ball_geometry(const SpaceParams& sp, double radius);

/// omega * sinh^{n-1}(R)
double ball_perimeter(const SpaceParams& sp, double radius);

/// omega * int_0^R sinh^{n-1}(s) ds. Closed form for n = 2, adaptive
/// Gauss-Kronrod otherwise.
double ball_volume(const SpaceParams& sp, double radius);

/// Inverse of ball_perimeter.
double radius_from_perimeter(const SpaceParams& sp, double perimeter);

/// Perimeter of the inner parallel ball at distance t, valid for 0 <= t < R.
double ball_parallel_perimeter(const SpaceParams& sp, double radius, double t);

/// V_i = int H_{n-1-i} over the sphere of radius R, where H_k = coth^k R.
double ball_curvature_integral(const SpaceParams& sp, double radius, int index);

/// All curvature integrals V_0 .. V_{n-1} of the ball.
std::vector<double> ball_curvature_integrals(const SpaceParams& sp, double radius);

/// Alexandrov-Fenchel lower bound (k = 1) for -dP/dt of the inner parallel
/// family with current perimeter P:
///   (n-1) omega { (P/omega)^2 + (P/omega)^{2(n-2)/(n-1)} }^{1/2}
double af_rhs(const SpaceParams& sp, double perimeter);

/// Steiner polynomial for the outer parallel perimeter P(K^s), given
/// V = (V_0, ..., V_{n-1}).
double steiner_outer_perimeter(const SpaceParams& sp, std::span<const double> curvature_integrals,
                               double s);

} // namespace hyprobin::hypgeo
