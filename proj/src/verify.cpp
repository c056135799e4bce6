#include "hyprobin/verify.hpp"

#include "hyprobin/errors.hpp"
#include "hyprobin/hypgeo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace hyprobin::verify {

namespace {

constexpr double kDifferenceStep = 1e-4;

const hypgeo::SpaceParams& plane()
{
    static const hypgeo::SpaceParams sp = hypgeo::SpaceParams::make(2);
    return sp;
}

void require_hconvex(const domain2d::CurveGeometry& g)
{
    if (!g.h_convex())
        throw HypothesisError("domain is not horospherically convex (kappa_min = " +
                              std::to_string(g.kappa_min) + ")");
}

// splitmix64; explicit so generated families are identical on every platform
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi)
    {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int integer(int lo, int hi)
    {
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

DeficitReport run_theorem(Theorem theorem, const domain2d::RadialCurve& curve, double beta,
                          const Resolution& res, std::string domain_id)
{
    const bool negative = theorem == Theorem::deficit_negative;
    if (negative ? !(beta < 0.0) : !(beta > 0.0))
        throw HypothesisError(std::string("theorem requires beta ") + (negative ? "< 0" : "> 0"));
    const domain2d::CurveGeometry geometry = domain2d::curve_geometry(curve);
    require_hconvex(geometry);

    const double radius_star = hypgeo::radius_from_perimeter(plane(), geometry.perimeter);
    const radial::RadialEigenpair star =
        radial::solve_radial({plane(), radius_star, beta}, res.radial_elements);
    const fem2d::DomainSolve fem = fem2d::solve_domain(curve, beta, res.fem);

    DeficitReport r = make_report(theorem, std::move(domain_id), beta, geometry, fem.lambda1, star,
                                  radius_star);
    r.fem_error = fem.error_estimate;
    return r;
}

std::vector<double> offsets(double t_max, int points, bool include_zero)
{
    std::vector<double> t;
    if (include_zero)
        t.push_back(0.0);
    for (int i = 1; i <= points; ++i)
        t.push_back(t_max * i / points);
    return t;
}

} // namespace

const char* theorem_name(Theorem t)
{
    return t == Theorem::deficit_negative ? "thm1" : "thm4";
}

const char* orientation(Theorem t)
{
    return t == Theorem::deficit_negative ? "lhs-rhs" : "rhs-lhs";
}

DeficitReport make_report(Theorem theorem, std::string domain_id, double beta,
                          const domain2d::CurveGeometry& geometry, double lambda_omega,
                          const radial::RadialEigenpair& star, double radius_star)
{
    DeficitReport r;
    r.domain_id = std::move(domain_id);
    r.theorem = theorem;
    r.beta = beta;
    r.lambda_omega = lambda_omega;
    r.lambda_star = star.lambda1;
    r.perimeter = geometry.perimeter;
    r.vol_omega = geometry.area;
    r.radius_star = radius_star;
    r.vol_star = hypgeo::ball_volume(plane(), radius_star);
    r.kappa_min = geometry.kappa_min;
    r.l2_sq = star.l2_sq;
    const double deficit = r.vol_star - r.vol_omega;

    if (theorem == Theorem::deficit_negative) {
        r.v_extreme = star.v_min;
        r.lhs = (r.lambda_star - r.lambda_omega) / std::abs(r.lambda_omega);
        r.rhs = r.v_extreme * r.v_extreme * deficit / r.l2_sq;
        r.margin = r.lhs - r.rhs;
    } else {
        r.v_extreme = star.v_max;
        r.lhs = (r.lambda_omega - r.lambda_star) / r.lambda_omega;
        r.rhs = r.v_extreme * r.v_extreme * deficit / r.l2_sq;
        r.margin = r.rhs - r.lhs;
    }
    r.passed = r.margin >= -kMarginTol;
    r.status = r.passed ? "ok" : "violation";
    return r;
}

DeficitReport verify_thm1(const domain2d::RadialCurve& curve, double beta, const Resolution& res,
                          std::string domain_id)
{
    return run_theorem(Theorem::deficit_negative, curve, beta, res, std::move(domain_id));
}

DeficitReport verify_thm4(const domain2d::RadialCurve& curve, double beta, const Resolution& res,
                          std::string domain_id)
{
    return run_theorem(Theorem::deficit_positive, curve, beta, res, std::move(domain_id));
}

bool verify_cor1(const DeficitReport& report)
{
    return report.lambda_omega <= report.lambda_star + kMarginTol * std::abs(report.lambda_star);
}

bool lhs_nonnegative(const DeficitReport& report)
{
    return report.lhs >= -kMarginTol;
}

std::string diagnostic_dump(const DeficitReport& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "domain_id     " << r.domain_id << '\n'
       << "theorem       " << theorem_name(r.theorem) << " (margin = " << orientation(r.theorem)
       << ")\n"
       << "beta          " << r.beta << '\n'
       << "lambda_omega  " << r.lambda_omega << " (fem error estimate " << r.fem_error << ")\n"
       << "lambda_star   " << r.lambda_star << '\n'
       << "perimeter     " << r.perimeter << '\n'
       << "vol_omega     " << r.vol_omega << '\n'
       << "vol_star      " << r.vol_star << " (radius " << r.radius_star << ")\n"
       << "v_extreme     " << r.v_extreme << '\n'
       << "l2_sq         " << r.l2_sq << '\n'
       << "lhs           " << r.lhs << '\n'
       << "rhs           " << r.rhs << '\n'
       << "margin        " << r.margin << '\n'
       << "kappa_min     " << r.kappa_min << '\n'
       << "status        " << r.status << '\n';
    return os.str();
}

double comparison_horizon(const domain2d::RadialCurve& curve,
                          const domain2d::CurveGeometry& geometry)
{
    const double t_valid = domain2d::focal_horizon(geometry);
    return std::min(0.9 * t_valid, 0.9 * domain2d::inradius(curve));
}

LemmaTable verify_lemma_diffP(const domain2d::RadialCurve& curve, int points)
{
    const domain2d::CurveGeometry g = domain2d::curve_geometry(curve);
    require_hconvex(g);

    LemmaTable table;
    table.t_max = comparison_horizon(curve, g);
    table.total_curvature = g.total_curvature;
    table.gauss_bonnet = 2.0 * std::numbers::pi + g.area;
    if (table.t_max < 1e-3) {
        table.inconclusive = true;
        return table;
    }

    table.min_scaled_margin = std::numeric_limits<double>::infinity();
    for (double t : offsets(table.t_max, points, true)) {
        LemmaRow row;
        row.t = t;
        row.perimeter = domain2d::inner_parallel_perimeter(g, t);
        row.minus_dpdt = (domain2d::inner_parallel_perimeter(g, t - kDifferenceStep) -
                          domain2d::inner_parallel_perimeter(g, t + kDifferenceStep)) /
                         (2.0 * kDifferenceStep);
        row.af_rhs = hypgeo::af_rhs(plane(), row.perimeter);
        row.margin = row.minus_dpdt - row.af_rhs;
        table.max_relative_deviation =
            std::max(table.max_relative_deviation, std::abs(row.margin) / row.af_rhs);
        table.min_scaled_margin = std::min(table.min_scaled_margin, row.margin / row.af_rhs);
        table.rows.push_back(row);
    }
    return table;
}

ComparisonTable verify_perimeter_comparison(const domain2d::RadialCurve& curve, int points)
{
    const domain2d::CurveGeometry g = domain2d::curve_geometry(curve);
    require_hconvex(g);

    ComparisonTable table;
    table.t_max = comparison_horizon(curve, g);
    const double radius_star = hypgeo::radius_from_perimeter(plane(), g.perimeter);
    const domain2d::ParallelProfile profile =
        domain2d::inner_parallel_profile(g, offsets(table.t_max, points, true));

    table.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < profile.t.size(); ++i) {
        ComparisonRow row;
        row.t = profile.t[i];
        row.perimeter = profile.perimeter[i];
        row.ball_perimeter = hypgeo::ball_parallel_perimeter(plane(), radius_star, row.t);
        row.margin = row.ball_perimeter - row.perimeter;
        table.min_margin = std::min(table.min_margin, row.margin);
        table.rows.push_back(row);
    }
    return table;
}

domain2d::RadialCurve build_curve(const FamilyDomain& d, int samples)
{
    return domain2d::make_family(d.r0, d.modes, samples);
}

std::vector<FamilyDomain> generate_family(const FamilySpec& spec)
{
    if (spec.count < 0 || spec.circles < 0)
        throw DomainError("family sizes must be non-negative");
    std::vector<FamilyDomain> out;
    SplitMix rng(spec.seed);
    auto make_id = [](int i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "d%03d", i);
        return std::string(buf);
    };

    for (int i = 0; i < spec.count && i < spec.circles; ++i) {
        const double r0 = spec.circles == 1
                              ? 0.5 * (spec.r0_min + spec.r0_max)
                              : spec.r0_min + (spec.r0_max - spec.r0_min) * i / (spec.circles - 1);
        out.push_back({make_id(i), r0, {}});
    }

    int attempts = 0;
    while (static_cast<int>(out.size()) < spec.count) {
        if (++attempts > 100000)
            throw DomainError("could not generate enough h-convex domains; shrink amplitudes");
        FamilyDomain d;
        d.id = make_id(static_cast<int>(out.size()));
        d.r0 = rng.uniform(spec.r0_min, spec.r0_max);
        const int modes = rng.integer(1, std::max(1, spec.max_modes));
        for (int m = 0; m < modes; ++m) {
            domain2d::Mode mode;
            mode.k = rng.integer(spec.k_min, spec.k_max);
            mode.amplitude = rng.uniform(0.005, spec.amplitude_max) / (mode.k * mode.k / 4.0);
            mode.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            d.modes.push_back(mode);
        }
        try {
            const domain2d::CurveGeometry g = domain2d::curve_geometry(build_curve(d, spec.samples));
            if (!g.h_convex())
                continue;
        } catch (const std::exception&) {
            continue;
        }
        out.push_back(std::move(d));
    }
    return out;
}

int default_threads()
{
    if (const char* env = std::getenv("HYPROBIN_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<DeficitReport> sweep(const SweepConfig& config)
{
    const std::size_t nd = config.domains.size();
    const std::size_t nb = config.betas.size();
    std::vector<DeficitReport> rows(nd * nb);

    auto process_domain = [&](std::size_t di) {
        const FamilyDomain& d = config.domains[di];
        auto fail_all = [&](const std::string& status) {
            for (std::size_t bi = 0; bi < nb; ++bi) {
                DeficitReport& r = rows[di * nb + bi];
                r.domain_id = d.id;
                r.beta = config.betas[bi];
                r.theorem = r.beta < 0.0 ? Theorem::deficit_negative : Theorem::deficit_positive;
                r.lhs = r.rhs = r.margin = std::numeric_limits<double>::quiet_NaN();
                r.status = status;
            }
        };
        try {
            const domain2d::RadialCurve curve = build_curve(d, config.samples);
            const domain2d::CurveGeometry g = domain2d::curve_geometry(curve);
            if (!g.h_convex()) {
                fail_all("hypothesis: domain not h-convex");
                return;
            }
            std::vector<double> nonzero;
            for (double b : config.betas)
                if (b != 0.0)
                    nonzero.push_back(b);
            const std::vector<fem2d::DomainSolve> fem =
                fem2d::solve_domain(curve, nonzero, config.resolution.fem);
            const double radius_star = hypgeo::radius_from_perimeter(plane(), g.perimeter);

            std::size_t fi = 0;
            for (std::size_t bi = 0; bi < nb; ++bi) {
                const double beta = config.betas[bi];
                DeficitReport& r = rows[di * nb + bi];
                if (beta == 0.0) {
                    r.domain_id = d.id;
                    r.beta = beta;
                    r.lhs = r.rhs = r.margin = std::numeric_limits<double>::quiet_NaN();
                    r.status = "hypothesis: theorems require beta != 0";
                    continue;
                }
                const fem2d::DomainSolve& s = fem[fi++];
                try {
                    const radial::RadialEigenpair star = radial::solve_radial(
                        {plane(), radius_star, beta}, config.resolution.radial_elements);
                    r = make_report(beta < 0.0 ? Theorem::deficit_negative
                                               : Theorem::deficit_positive,
                                    d.id, beta, g, s.lambda1, star, radius_star);
                    r.fem_error = s.error_estimate;
                } catch (const std::exception& e) {
                    r.domain_id = d.id;
                    r.beta = beta;
                    r.lhs = r.rhs = r.margin = std::numeric_limits<double>::quiet_NaN();
                    r.status = std::string("error: ") + e.what();
                }
            }
        } catch (const std::exception& e) {
            fail_all(std::string("error: ") + e.what());
        }
    };

    const int threads = std::max(1, std::min<int>(config.threads, static_cast<int>(nd)));
    if (threads <= 1) {
        for (std::size_t di = 0; di < nd; ++di)
            process_domain(di);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t di = next++; di < nd; di = next++)
                    process_domain(di);
            });
        for (auto& th : pool)
            th.join();
    }

    std::stable_sort(rows.begin(), rows.end(), [](const DeficitReport& a, const DeficitReport& b) {
        if (a.domain_id != b.domain_id)
            return a.domain_id < b.domain_id;
        return a.beta < b.beta;
    });
    return rows;
}

} // namespace hyprobin::verify
