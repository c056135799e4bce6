#include "hyprobin/cli.hpp"

#include "hyprobin/errors.hpp"
#include "hyprobin/fem2d.hpp"
#include "hyprobin/hypgeo.hpp"
#include "hyprobin/radial.hpp"
#include "hyprobin/report_io.hpp"
#include "hyprobin/verify.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hyprobin::cli {

namespace {

using json = nlohmann::json;

std::string fmt(double v, int digits = 12)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Column-aligned text table.
class Table {
public:
    explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out) const
    {
        std::vector<std::size_t> width(rows_.front().size(), 0);
        for (const auto& row : rows_)
            for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
                width[i] = std::max(width[i], row[i].size());
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << row[i];
                if (i + 1 < row.size())
                    out << std::string(width[i] - row[i].size() + 2, ' ');
            }
            out << '\n';
        }
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

// Generic numeric table for plot-ready output.
struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_data(std::ostream& out, const DataTable& t, const std::string& format)
{
    if (format == "json") {
        json arr = json::array();
        for (const auto& row : t.rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < row.size(); ++i)
                obj[t.columns[i]] = std::isfinite(row[i]) ? json(row[i]) : json(nullptr);
            arr.push_back(obj);
        }
        out << arr.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << io::csv_field(t.columns[i]);
    out << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << io::format_double(row[i]);
        out << "\r\n";
    }
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("output", "cannot open '" + path + "' for writing");
    return f;
}

void write_data_file(const RunConfig& c, const DataTable& t)
{
    if (c.output.empty())
        return;
    std::ofstream f = open_output(c.output);
    write_data(f, t, c.format);
}

void write_reports(const RunConfig& c, const std::vector<verify::DeficitReport>& reports)
{
    if (c.output.empty())
        return;
    std::ofstream f = open_output(c.output);
    if (c.format == "json")
        io::write_report_json(f, reports, c.seed);
    else
        io::write_report_csv(f, reports, c.seed);
}

std::vector<double> betas_or(const RunConfig& c, std::vector<double> fallback)
{
    return c.betas.empty() ? fallback : c.betas;
}

verify::Resolution resolution(const RunConfig& c)
{
    verify::Resolution r;
    r.radial_elements = c.radial_elements;
    r.fem = {c.mesh_nr, c.mesh_ntheta, c.refinements};
    return r;
}

void dump_mesh(const RunConfig& c, const domain2d::RadialCurve& curve)
{
    if (c.mesh_dump.empty())
        return;
    std::ofstream f(c.mesh_dump);
    if (!f)
        throw ConfigError("mesh_dump", "cannot open '" + c.mesh_dump + "' for writing");
    fem2d::write_mesh(f, fem2d::mesh_domain(curve, c.mesh_nr, c.mesh_ntheta));
}

int cmd_ball_eig(const RunConfig& c, std::ostream& out)
{
    const auto sp = hypgeo::SpaceParams::make(c.n);
    Table table({"beta", "lambda_weak", "lambda_shoot", "difference", "constant_bound"});
    DataTable data{{"beta", "lambda_weak", "lambda_shoot", "difference"}, {}};
    for (double beta : betas_or(c, {-1.0})) {
        const radial::RadialProblem prob{sp, c.radius, beta};
        const radial::RadialEigenpair weak = radial::solve_radial_weak(prob, c.radial_elements);
        double shoot = weak.lambda1;
        if (beta != 0.0)
            shoot = radial::solve_radial_shooting(prob, radial::bracket_lambda1(prob, weak.lambda1));
        const double diff = weak.lambda1 - shoot;
        table.add({fmt(beta, 6), fmt(weak.lambda1), fmt(shoot), fmt(diff, 3),
                   fmt(radial::rayleigh_constant_bound(sp, c.radius, beta))});
        data.rows.push_back({beta, weak.lambda1, shoot, diff});
    }
    out << "ball n=" << c.n << " R=" << fmt(c.radius) << " (" << c.radial_elements
        << " radial elements)\n";
    table.print(out);
    write_data_file(c, data);
    return kExitOk;
}

int cmd_domain_eig(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const domain2d::RadialCurve curve = build_domain(c);
    const domain2d::CurveGeometry g = domain2d::curve_geometry(curve);
    if (!g.h_convex())
        err << "warning: domain is not h-convex (kappa_min = " << fmt(g.kappa_min) << ")\n";
    dump_mesh(c, curve);
    const std::vector<double> betas = betas_or(c, {-1.0});
    const auto solves = fem2d::solve_domain(curve, betas, {c.mesh_nr, c.mesh_ntheta, c.refinements});
    Table table({"beta", "lambda1", "error_estimate", "observed_order", "constant_bound"});
    DataTable data{{"beta", "lambda1", "error_estimate"}, {}};
    for (const auto& s : solves) {
        const double bound = s.beta * g.perimeter / g.area;
        table.add({fmt(s.beta, 6), fmt(s.lambda1), fmt(s.error_estimate, 3),
                   fmt(s.observed_order, 3), fmt(bound)});
        data.rows.push_back({s.beta, s.lambda1, s.error_estimate});
        if (!s.warning.empty())
            err << "warning (beta=" << fmt(s.beta, 6) << "): " << s.warning << '\n';
    }
    table.print(out);
    write_data_file(c, data);
    return kExitOk;
}

int cmd_geometry(const RunConfig& c, std::ostream& out)
{
    const domain2d::RadialCurve curve = build_domain(c);
    const domain2d::CurveGeometry g = domain2d::curve_geometry(curve);
    const double rin = domain2d::inradius(curve);
    const double horizon = g.h_convex() ? domain2d::focal_horizon(g) : 0.0;
    const double r_star = hypgeo::radius_from_perimeter(hypgeo::SpaceParams::make(2), g.perimeter);
    Table table({"quantity", "value"});
    table.add({"perimeter", fmt(g.perimeter)});
    table.add({"area", fmt(g.area)});
    table.add({"kappa_min", fmt(g.kappa_min)});
    table.add({"kappa_max", fmt(g.kappa_max)});
    table.add({"total_curvature", fmt(g.total_curvature)});
    table.add({"gauss_bonnet_residual", fmt(g.gauss_bonnet_residual(), 3)});
    table.add({"h_convex", g.h_convex() ? "yes" : "no"});
    table.add({"inradius", fmt(rin)});
    table.add({"focal_horizon", fmt(horizon)});
    table.add({"radius_star", fmt(r_star)});
    table.print(out);
    write_data_file(c, {{"perimeter", "area", "kappa_min", "kappa_max", "total_curvature",
                         "inradius", "focal_horizon", "radius_star"},
                        {{g.perimeter, g.area, g.kappa_min, g.kappa_max, g.total_curvature, rin,
                          horizon, r_star}}});
    return kExitOk;
}

int cmd_steiner(const RunConfig& c, std::ostream& out)
{
    const auto sp = hypgeo::SpaceParams::make(c.n);
    const std::vector<double> v = hypgeo::ball_curvature_integrals(sp, c.radius);
    Table table({"s", "steiner", "exact", "relative_difference"});
    DataTable data{{"s", "steiner", "exact"}, {}};
    for (double s : c.offsets) {
        const double steiner = hypgeo::steiner_outer_perimeter(sp, v, s);
        const double exact = hypgeo::ball_perimeter(sp, c.radius + s);
        table.add({fmt(s, 6), fmt(steiner), fmt(exact), fmt((steiner - exact) / exact, 3)});
        data.rows.push_back({s, steiner, exact});
    }
    out << "outer parallel perimeters of the ball n=" << c.n << " R=" << fmt(c.radius) << '\n';
    table.print(out);
    write_data_file(c, data);
    return kExitOk;
}

int cmd_parallel(const RunConfig& c, std::ostream& out)
{
    const domain2d::RadialCurve curve = build_domain(c);
    const verify::ComparisonTable t = verify::verify_perimeter_comparison(curve, c.t_points);
    Table table({"t", "P(t)", "P_ball(t)", "difference"});
    for (const auto& row : t.rows)
        table.add({fmt(row.t, 6), fmt(row.perimeter), fmt(row.ball_perimeter), fmt(row.margin, 3)});
    table.print(out);
    if (!c.output.empty()) {
        std::ofstream f = open_output(c.output);
        if (c.format == "json") {
            DataTable d{{"t", "perimeter", "ball_perimeter", "margin"}, {}};
            for (const auto& row : t.rows)
                d.rows.push_back({row.t, row.perimeter, row.ball_perimeter, row.margin});
            write_data(f, d, "json");
        } else {
            io::write_comparison_csv(f, t);
        }
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& c, verify::Theorem theorem, std::ostream& out, std::ostream& err)
{
    const domain2d::RadialCurve curve = build_domain(c);
    dump_mesh(c, curve);
    const bool negative = theorem == verify::Theorem::deficit_negative;
    std::vector<verify::DeficitReport> reports;
    for (double beta : betas_or(c, {negative ? -1.0 : 1.0})) {
        reports.push_back(negative ? verify::verify_thm1(curve, beta, resolution(c))
                                   : verify::verify_thm4(curve, beta, resolution(c)));
    }
    Table table({"beta", "lambda_omega", "lambda_star", "lhs", "rhs", "margin", "status"});
    int code = kExitOk;
    for (const auto& r : reports) {
        table.add({fmt(r.beta, 6), fmt(r.lambda_omega), fmt(r.lambda_star), fmt(r.lhs, 8),
                   fmt(r.rhs, 8), fmt(r.margin, 4), r.status});
        bool ok = r.passed;
        if (negative && !verify::verify_cor1(r)) {
            err << "eigenvalue comparison fails: lambda_omega > lambda_star\n";
            ok = false;
        }
        if (!negative && !verify::lhs_nonnegative(r)) {
            err << "left-hand side is negative\n";
            ok = false;
        }
        if (!ok) {
            err << verify::diagnostic_dump(r);
            code = kExitViolation;
        }
    }
    table.print(out);
    write_reports(c, reports);
    return code;
}

int cmd_lemmas(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const domain2d::RadialCurve curve = build_domain(c);
    const verify::LemmaTable lemma = verify::verify_lemma_diffP(curve, c.t_points);
    const verify::ComparisonTable comp = verify::verify_perimeter_comparison(curve, c.t_points);

    Table table({"t", "P(t)", "-dP/dt", "bound", "margin", "P_ball(t)", "P_ball-P"});
    for (std::size_t i = 0; i < lemma.rows.size(); ++i) {
        const auto& l = lemma.rows[i];
        std::vector<std::string> row = {fmt(l.t, 6), fmt(l.perimeter), fmt(l.minus_dpdt),
                                        fmt(l.af_rhs), fmt(l.margin, 4)};
        // the comparison grid has no t = 0 row, so look the offset up
        std::string pb = "", diff = "";
        for (const auto& r : comp.rows)
            if (std::abs(r.t - l.t) < 1e-12) {
                pb = fmt(r.ball_perimeter);
                diff = fmt(r.margin, 4);
            }
        row.push_back(pb);
        row.push_back(diff);
        table.add(std::move(row));
    }
    table.print(out);
    out << "int kappa ds = " << fmt(lemma.total_curvature) << ", 2 pi + A = "
        << fmt(lemma.gauss_bonnet) << '\n';

    int code = kExitOk;
    if (lemma.inconclusive) {
        err << "lemma check inconclusive: valid offset range below 1e-3\n";
    } else if (lemma.min_scaled_margin < -verify::kMarginTol) {
        err << "perimeter decay bound fails: min scaled margin " << fmt(lemma.min_scaled_margin, 4)
            << '\n';
        code = kExitViolation;
    }
    if (comp.min_margin < -verify::kGeometricTol) {
        err << "parallel perimeter comparison fails: min margin " << fmt(comp.min_margin, 4) << '\n';
        code = kExitViolation;
    }

    if (!c.output.empty()) {
        std::ofstream f = open_output(c.output);
        if (c.format == "json") {
            json doc = json::object();
            json rows = json::array();
            for (const auto& l : lemma.rows)
                rows.push_back({{"t", l.t},
                                {"perimeter", l.perimeter},
                                {"minus_dpdt", l.minus_dpdt},
                                {"af_rhs", l.af_rhs},
                                {"margin", l.margin}});
            doc["lemma"] = rows;
            json cmp = json::array();
            for (const auto& r : comp.rows)
                cmp.push_back({{"t", r.t},
                               {"perimeter", r.perimeter},
                               {"ball_perimeter", r.ball_perimeter},
                               {"margin", r.margin}});
            doc["comparison"] = cmp;
            f << doc.dump(2) << '\n';
        } else {
            io::write_lemma_csv(f, lemma);
            std::ofstream g = open_output(c.output + ".comparison.csv");
            io::write_comparison_csv(g, comp);
        }
    }
    return code;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    verify::SweepConfig sc;
    sc.domains = sweep_domains(c);
    if (sc.domains.empty())
        throw ConfigError("domains", "sweep needs 'domains' or 'family'");
    sc.betas = betas_or(c, {-0.5, -1.0, -2.0, 0.5, 1.0, 2.0});
    sc.resolution = resolution(c);
    sc.samples = c.angles;
    sc.seed = c.seed;
    sc.threads = verify::default_threads();
    const std::vector<verify::DeficitReport> reports = verify::sweep(sc);

    Table table({"domain", "beta", "lambda_omega", "lambda_star", "margin", "status"});
    bool solver_error = false, hypothesis = false, violation = false;
    for (const auto& r : reports) {
        table.add({r.domain_id, fmt(r.beta, 6), fmt(r.lambda_omega), fmt(r.lambda_star),
                   fmt(r.margin, 4), r.status});
        if (r.status.rfind("error", 0) == 0)
            solver_error = true;
        else if (r.status.rfind("hypothesis", 0) == 0)
            hypothesis = true;
        else if (!r.passed ||
                 (r.theorem == verify::Theorem::deficit_negative && !verify::verify_cor1(r)) ||
                 (r.theorem == verify::Theorem::deficit_positive && !verify::lhs_nonnegative(r))) {
            violation = true;
            err << verify::diagnostic_dump(r);
        }
    }
    table.print(out);
    write_reports(c, reports);
    if (solver_error)
        return kExitSolver;
    if (hypothesis)
        return kExitHypothesis;
    return violation ? kExitViolation : kExitOk;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        validate(config);
        switch (config.command) {
        case Command::ball_eig:
            return cmd_ball_eig(config, out);
        case Command::domain_eig:
            return cmd_domain_eig(config, out, err);
        case Command::geometry:
            return cmd_geometry(config, out);
        case Command::steiner:
            return cmd_steiner(config, out);
        case Command::parallel:
            return cmd_parallel(config, out);
        case Command::verify_thm1:
            return cmd_verify(config, verify::Theorem::deficit_negative, out, err);
        case Command::verify_thm4:
            return cmd_verify(config, verify::Theorem::deficit_positive, out, err);
        case Command::verify_lemmas:
            return cmd_lemmas(config, out, err);
        case Command::sweep:
            return cmd_sweep(config, out, err);
        }
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const HypothesisError& e) {
        err << "hypothesis not met: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitSolver;
}

} // namespace hyprobin::cli
