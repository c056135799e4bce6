#pragma once

#include "hyprobin/domain2d.hpp"
#include "hyprobin/fem2d.hpp"
#include "hyprobin/radial.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Both sides of the eigenvalue-deficit inequalities, the perimeter-decay lemma
// and the parallel-perimeter comparison, evaluated on concrete domains.
//
// Margins are oriented so that margin >= 0 means the inequality holds.
namespace hyprobin::verify {

inline constexpr double kMarginTol = 1e-6;         // eigenvalue-based inequalities
inline constexpr double kEqualityTol = 2e-3;       // eigenvalue-based equality cases
inline constexpr double kGeometricTol = 1e-8;      // quadrature-only comparisons
inline constexpr double kLemmaCircleTol = 1e-6;    // relative, circle equality table

enum class Theorem {
    deficit_negative,  // beta < 0: (l* - l) / |l| >= v_m^2 (|B| - |O|) / ||v||^2
    deficit_positive,  // beta > 0: (l - l*) / l <= v_M^2 (|B| - |O|) / ||v||^2
};

const char* theorem_name(Theorem t);
const char* orientation(Theorem t);

struct Resolution {
    int radial_elements = 512;
    fem2d::FemResolution fem;
};

struct DeficitReport {
    std::string domain_id;
    Theorem theorem = Theorem::deficit_negative;
    double beta = 0.0;
    double lambda_omega = 0.0;
    double lambda_star = 0.0;
    double perimeter = 0.0;
    double vol_omega = 0.0;
    double vol_star = 0.0;
    double radius_star = 0.0;
    double v_extreme = 0.0;  // v_m for beta < 0, v_M for beta > 0
    double l2_sq = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double fem_error = 0.0;
    double kappa_min = 0.0;
    bool passed = false;
    std::string status;  // "ok", "violation", or the error that stopped the row
};

/// Pure evaluation of both sides from precomputed ingredients.
DeficitReport make_report(Theorem theorem, std::string domain_id, double beta,
                          const domain2d::CurveGeometry& geometry, double lambda_omega,
                          const radial::RadialEigenpair& star, double radius_star);

DeficitReport verify_thm1(const domain2d::RadialCurve& curve, double beta,
                          const Resolution& res = {}, std::string domain_id = "domain");
DeficitReport verify_thm4(const domain2d::RadialCurve& curve, double beta,
                          const Resolution& res = {}, std::string domain_id = "domain");

/// lambda(Omega) <= lambda(Omega*) + 1e-6 |lambda(Omega*)|
bool verify_cor1(const DeficitReport& report);

/// Remark after the positive-beta theorem: its left-hand side is >= -1e-6.
bool lhs_nonnegative(const DeficitReport& report);

/// Multi-line dump of every intermediate quantity.
std::string diagnostic_dump(const DeficitReport& report);

struct LemmaRow {
    double t = 0.0;
    double perimeter = 0.0;
    double minus_dpdt = 0.0;  // centered difference
    double af_rhs = 0.0;
    double margin = 0.0;      // minus_dpdt - af_rhs
};

struct LemmaTable {
    std::vector<LemmaRow> rows;
    double t_max = 0.0;
    bool inconclusive = false;
    double total_curvature = 0.0;  // int kappa ds = -dP/dt at t = 0
    double gauss_bonnet = 0.0;     // 2 pi + A
    double max_relative_deviation = 0.0;  // max |margin| / af_rhs
    double min_scaled_margin = 0.0;       // min margin / af_rhs
};

/// Horizon of the comparison grid: min(0.9 t_valid, 0.9 inradius).
double comparison_horizon(const domain2d::RadialCurve& curve,
                          const domain2d::CurveGeometry& geometry);

LemmaTable verify_lemma_diffP(const domain2d::RadialCurve& curve, int points = 32);

struct ComparisonRow {
    double t = 0.0;
    double perimeter = 0.0;       // P(Omega_t)
    double ball_perimeter = 0.0;  // P(Omega*_t)
    double margin = 0.0;          // ball_perimeter - perimeter
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    double t_max = 0.0;
    double min_margin = 0.0;
};

ComparisonTable verify_perimeter_comparison(const domain2d::RadialCurve& curve, int points = 32);

struct FamilyDomain {
    std::string id;
    double r0 = 1.0;
    std::vector<domain2d::Mode> modes;

    bool operator==(const FamilyDomain&) const = default;
};

struct FamilySpec {
    int count = 20;
    int circles = 2;
    std::uint64_t seed = 1;
    double r0_min = 0.6;
    double r0_max = 1.2;
    int max_modes = 2;
    int k_min = 2;
    int k_max = 5;
    double amplitude_max = 0.06;
    int samples = 512;

    bool operator==(const FamilySpec&) const = default;
};

/// Deterministic family of h-convex radial domains; the first `circles` entries
/// are geodesic circles, the rest random perturbations accepted only if
/// h-convex.
std::vector<FamilyDomain> generate_family(const FamilySpec& spec);

domain2d::RadialCurve build_curve(const FamilyDomain& d, int samples = 512);

struct SweepConfig {
    std::vector<FamilyDomain> domains;
    std::vector<double> betas;
    Resolution resolution;
    int samples = 512;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// One report per (domain, beta), ordered by domain id then beta. Row failures
/// are recorded in the row status; the sweep continues.
std::vector<DeficitReport> sweep(const SweepConfig& config);

/// Thread count from HYPROBIN_THREADS, else hardware concurrency.
int default_threads();

} // namespace hyprobin::verify
