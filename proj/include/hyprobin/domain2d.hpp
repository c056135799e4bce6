#pragma once

#include <span>
#include <vector>

// Star-shaped domains in the hyperbolic plane H^2, described as radial graphs
// r(theta) in geodesic polar coordinates ds^2 = dr^2 + sinh^2(r) dtheta^2.
namespace hyprobin::domain2d {

/// Closed boundary curve sampled on a uniform periodic angle grid.
struct RadialCurve {
    std::vector<double> theta;
    std::vector<double> r;

    std::size_t size() const { return r.size(); }
};

/// Builds a curve from radial samples at theta_j = 2 pi j / M. Validates
/// M even, M >= 128, r > 0 and spectral resolution of the samples.
RadialCurve make_curve(std::vector<double> radii);

struct Mode {
    int k = 0;
    double amplitude = 0.0;
    double phase = 0.0;

    bool operator==(const Mode&) const = default;
};

/// r(theta) = r0 + sum_k eps_k cos(k theta + phi_k) sampled on M points.
RadialCurve make_family(double r0, std::span<const Mode> modes, int samples = 512);

/// Trigonometric interpolant of the radial samples; evaluates r and its
/// derivatives at arbitrary angles.
class TrigSeries {
public:
    explicit TrigSeries(std::span<const double> samples);

    double value(double theta) const;
    double derivative(double theta) const;
    double second_derivative(double theta) const;

    /// Relative magnitude of the upper quarter of the spectrum.
    double tail_ratio() const;

private:
    std::vector<double> cos_coef_;  // a_0 .. a_{M/2}
    std::vector<double> sin_coef_;  // b_0 .. b_{M/2}
    std::size_t samples_ = 0;
};

struct CurveGeometry {
    double perimeter = 0.0;
    double area = 0.0;
    std::vector<double> kappa;  // geodesic curvature at the grid angles
    std::vector<double> speed;  // ds/dtheta at the grid angles
    double kappa_min = 0.0;
    double kappa_max = 0.0;
    double total_curvature = 0.0;  // int kappa ds

    /// |int kappa ds - (2 pi + A)| / (2 pi + A)
    double gauss_bonnet_residual() const;
    bool h_convex() const;
};

/// Perimeter, area and curvature via spectral differentiation and the
/// periodic trapezoid rule. Throws ResolutionError when the Gauss-Bonnet
/// residual exceeds 1e-6.
CurveGeometry curve_geometry(const RadialCurve& curve);

struct HConvexity {
    bool h_convex = false;
    double margin = 0.0;  // kappa_min - 1
};

HConvexity check_hconvex(const CurveGeometry& geometry);

/// Principal curvature after a normal offset t (t > 0 inward, t < 0 outward):
///   (kappa - tanh t) / (1 - kappa tanh t)
double parallel_curvature(double kappa, double t);

struct ParallelProfile {
    std::vector<double> t;
    std::vector<double> perimeter;
    double t_valid = 0.0;  // below the focal time min arctanh(1/kappa)
};

/// Offset past which the inner flow formula is not used.
double focal_horizon(const CurveGeometry& geometry);

/// Perimeters of the inner parallel curves, P(t) = int (cosh t - kappa sinh t) ds.
/// Entries with t > t_valid are dropped. Throws HypothesisError for curves that
/// are not h-convex.
ParallelProfile inner_parallel_profile(const RadialCurve& curve, std::span<const double> t_grid);
ParallelProfile inner_parallel_profile(const CurveGeometry& geometry,
                                       std::span<const double> t_grid);

/// Inner parallel perimeter at a single offset (no h-convexity requirement).
double inner_parallel_perimeter(const CurveGeometry& geometry, double t);

/// int (cosh s + kappa sinh s) ds
double outer_parallel_perimeter(const RadialCurve& curve, double s);
double outer_parallel_perimeter(const CurveGeometry& geometry, double s);

struct HyperboloidPoint {
    double x0 = 1.0;
    double x1 = 0.0;
    double x2 = 0.0;

    static HyperboloidPoint from_polar(double r, double theta);
};

/// -x0 y0 + x1 y1 + x2 y2
double minkowski_dot(const HyperboloidPoint& p, const HyperboloidPoint& q);

/// arccosh(-<p, q>)
double hyperboloid_distance(const HyperboloidPoint& p, const HyperboloidPoint& q);

struct InradiusOptions {
    int grid = 64;
    int boundary_samples = 4096;
};

/// Largest distance from an interior point to the boundary.
double inradius(const RadialCurve& curve, const InradiusOptions& opts = {});

} // namespace hyprobin::domain2d
