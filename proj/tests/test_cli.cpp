#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hyprobin/cli.hpp"
#include "hyprobin/config.hpp"
#include "hyprobin/errors.hpp"
#include "hyprobin/report_io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace hyprobin;
using namespace hyprobin::cli;
namespace fs = std::filesystem;

namespace {

std::string field_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::string message_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / "hyprobin_cli_tests";
    fs::create_directories(dir);
    return dir;
}

bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

RunConfig quick(Command c)
{
    RunConfig cfg;
    cfg.command = c;
    cfg.mesh_nr = 16;
    cfg.mesh_ntheta = 64;
    return cfg;
}

} // namespace

TEST_CASE("decimal formatting round-trips")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> bits;
    int checked = 0;
    while (checked < 20000) {
        const std::uint64_t b = bits(rng);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v))
            continue;
        CHECK(same_bits(io::parse_double(io::format_double(v)), v));
        ++checked;
    }
    for (double v : {0.0, -0.0, 0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -2.791535576304901})
        CHECK(same_bits(io::parse_double(io::format_double(v)), v));
    CHECK(std::isnan(io::parse_double(io::format_double(std::nan("")))));
    CHECK(io::parse_double(io::format_double(-INFINITY)) == -INFINITY);
    CHECK_THROWS_AS(io::parse_double("1.5x"), ContractError);
}

TEST_CASE("CSV quoting")
{
    CHECK(io::csv_field("plain") == "plain");
    CHECK(io::csv_field("a,b") == "\"a,b\"");
    CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    const std::string line = io::csv_field("x,y") + "," + io::csv_field("q\"q") + ",," + io::csv_field("z");
    const auto f = io::split_csv_line(line);
    REQUIRE(f.size() == 4);
    CHECK(f[0] == "x,y");
    CHECK(f[1] == "q\"q");
    CHECK(f[2].empty());
    CHECK(f[3] == "z");
    CHECK_THROWS_AS(io::split_csv_line("\"open"), ContractError);
}

TEST_CASE("report CSV round trip")
{
    std::vector<verify::DeficitReport> rows(3);
    rows[0].domain_id = "d000";
    rows[0].beta = -0.5;
    rows[0].lambda_omega = -1.234567890123456789;
    rows[0].margin = 1.0 / 3.0;
    rows[0].passed = true;
    rows[0].status = "ok";
    rows[1].domain_id = "needs, quoting";
    rows[1].theorem = verify::Theorem::deficit_positive;
    rows[1].beta = 2.0;
    rows[1].lhs = 5e-324;
    rows[1].margin = std::numeric_limits<double>::quiet_NaN();
    rows[1].status = "error: \"bad\" input";
    rows[2].domain_id = "d002";
    rows[2].kappa_min = 1.186303307476106;
    rows[2].status = "violation";

    std::stringstream ss;
    io::write_report_csv(ss, rows, 42);
    const std::string text = ss.str();
    CHECK(text.rfind("schema,domain_id,theorem,orientation,seed,beta,", 0) == 0);
    CHECK(text.find("hyprobin-report/1,d000,thm1,lhs-rhs,42,") != std::string::npos);

    const auto back = io::read_report_csv(ss);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].domain_id == rows[i].domain_id);
        CHECK(back[i].theorem == rows[i].theorem);
        CHECK(back[i].status == rows[i].status);
        CHECK(back[i].passed == rows[i].passed);
        CHECK(same_bits(back[i].lambda_omega, rows[i].lambda_omega));
        CHECK(same_bits(back[i].lhs, rows[i].lhs));
        CHECK(same_bits(back[i].kappa_min, rows[i].kappa_min));
        CHECK((same_bits(back[i].margin, rows[i].margin) || std::isnan(rows[i].margin)));
    }
    CHECK(std::isnan(back[1].margin));

    std::stringstream json_out;
    io::write_report_json(json_out, rows, 42);
    const auto doc = nlohmann::json::parse(json_out.str());
    REQUIRE(doc.is_array());
    CHECK(doc.size() == 3);
    CHECK(doc[0]["schema"] == "hyprobin-report/1");
    CHECK(doc[1]["margin"].is_null());
    CHECK(doc[0]["lambda_omega"].get<double>() == rows[0].lambda_omega);
}

TEST_CASE("minimal config takes the documented defaults")
{
    const RunConfig c = parse_config("{}");
    CHECK(c == RunConfig{});
    CHECK(c.angles == 512);
    CHECK(c.radial_elements == 512);
    CHECK(c.mesh_nr == 48);
    CHECK(c.mesh_ntheta == 192);
    CHECK(c.refinements == 2);
    CHECK(c.format == "csv");
}

TEST_CASE("config round trip")
{
    RunConfig a;
    a.command = Command::verify_thm4;
    a.domain.r0 = 0.8;
    a.domain.modes = {{2, 0.01, 0.3}, {5, 0.002, 1.0 / 3.0}};
    a.betas = {0.5, 1.0 / 7.0};
    a.output = "out dir/report.csv";
    a.format = "json";
    a.seed = 18446744073709551615ULL;
    a.mesh_dump = "mesh.txt";
    CHECK(parse_config(emit_config(a)) == a);

    RunConfig b;
    b.command = Command::sweep;
    b.n = 2;
    b.betas = {-0.5, -1.0, -2.0};
    verify::FamilySpec fam;
    fam.count = 7;
    fam.amplitude_max = 0.04;
    fam.seed = b.seed;
    fam.samples = b.angles;
    b.family = fam;
    b.domains = {{"first", 1.0, {}}, {"second", 0.9, {{3, 0.01, 0.0}}}};
    CHECK(parse_config(emit_config(b)) == b);

    RunConfig c;
    c.command = Command::ball_eig;
    c.n = 4;
    c.radius = 0.1 + 0.2;
    c.offsets = {0.0, 0.25};
    c.domain.samples = std::vector<double>(128, 0.7);
    CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("strict parsing names the offending field")
{
    CHECK(field_of(R"({"bogus": 1})") == "bogus");
    CHECK(field_of(R"({"domain": {"r0": 1, "radius": 2}})") == "domain.radius");
    CHECK(field_of(R"({"angles": "many"})") == "angles");
    CHECK(field_of(R"({"n": 2.5})") == "n");
    CHECK(field_of(R"({"betas": [1, "x"]})") == "betas[1]");
    CHECK(field_of(R"({"domain": {"modes": [{"k": 2, "amp": 1}]}})") == "domain.modes[0].amp");
    CHECK(field_of(R"({"command": "explode"})") == "command");
    CHECK(field_of(R"({"format": "xml"})") == "format");
    CHECK(field_of(R"({"angles": 100})") == "angles");
    CHECK(field_of(R"({"mesh_nr": 2})") == "mesh_nr");
    CHECK(field_of(R"({"family": {"count": 3, "sigma": 1}})") == "family.sigma");
    CHECK(field_of("{not json") == "<document>");
}

TEST_CASE("config validation")
{
    const std::string neg_radius =
        message_of(R"({"command": "geometry", "domain": {"r0": 1, "modes": [{"k": 2, "amplitude": -1.5}]}})");
    CHECK(neg_radius.find("theta = ") != std::string::npos);
    CHECK(neg_radius.find("<= 0") != std::string::npos);

    CHECK(message_of(R"({"command": "verify-thm1", "betas": [0]})").find("theorems require beta != 0") !=
          std::string::npos);
    CHECK(message_of(R"({"command": "sweep", "betas": [1, 0]})").find("theorems require beta != 0") !=
          std::string::npos);
    CHECK(field_of(R"({"command": "verify-thm1", "betas": [1]})") == "betas");
    CHECK(field_of(R"({"command": "verify-thm4", "betas": [-1]})") == "betas");
    CHECK(field_of(R"({"command": "domain-eig", "n": 3})") == "n");
    CHECK(field_of(R"({"command": "verify-lemmas", "n": 4})") == "n");
    CHECK(field_of(R"({"command": "ball-eig", "n": 3})").empty());
    CHECK(field_of(R"({"command": "steiner", "n": 4})").empty());
    CHECK(field_of(R"({"command": "ball-eig", "radius": 0})") == "radius");
    CHECK(field_of(R"({"command": "domain-eig", "betas": [0]})").empty());
}

TEST_CASE("ball eigenvalue command")
{
    RunConfig c;
    c.command = Command::ball_eig;
    c.betas = {-1.0};
    std::ostringstream out, err;
    CHECK(run(c, out, err) == kExitOk);
    const std::string text = out.str();
    CHECK(text.find("lambda_weak") != std::string::npos);
    CHECK(text.find("lambda_shoot") != std::string::npos);
    CHECK(text.find("difference") != std::string::npos);
    CHECK(text.find("-2.79153") != std::string::npos);
}

TEST_CASE("theorem verification writes a one-row report")
{
    const fs::path out_path = scratch_dir() / "thm1.csv";
    RunConfig c = quick(Command::verify_thm1);
    c.domain.modes = {{2, 0.05, 0.0}};
    c.betas = {-1.0};
    c.output = out_path.string();
    c.mesh_dump = (scratch_dir() / "mesh.txt").string();
    std::ostringstream out, err;
    CHECK(run(c, out, err) == kExitOk);
    std::ifstream f(out_path);
    const auto rows = io::read_report_csv(f);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].margin >= 0.0);
    CHECK(rows[0].status == "ok");
    CHECK(fs::file_size(c.mesh_dump) > 0);
}

TEST_CASE("exit codes")
{
    std::ostringstream out, err;
    RunConfig bumpy = quick(Command::verify_thm1);
    bumpy.domain.modes = {{2, 0.8, 0.0}};
    CHECK(run(bumpy, out, err) == kExitHypothesis);

    RunConfig usage = quick(Command::verify_thm4);
    usage.betas = {-1.0};
    CHECK(run(usage, out, err) == kExitUsage);

    RunConfig circle_lemmas = quick(Command::verify_lemmas);
    circle_lemmas.domain.r0 = 0.9;
    CHECK(run(circle_lemmas, out, err) == kExitOk);

    // in the plane the perimeter decay bound fails off circles; the command reports it
    RunConfig lemmas = quick(Command::verify_lemmas);
    lemmas.domain.modes = {{2, 0.05, 0.0}};
    std::ostringstream lemma_err;
    CHECK(run(lemmas, out, lemma_err) == kExitViolation);
    CHECK(lemma_err.str().find("fails") != std::string::npos);

    RunConfig unwritable = quick(Command::geometry);
    unwritable.output = "/nonexistent-dir/x.csv";
    CHECK(run(unwritable, out, err) == kExitUsage);
}

TEST_CASE("other commands")
{
    std::ostringstream out, err;
    RunConfig g = quick(Command::geometry);
    g.domain.modes = {{2, 0.05, 0.0}};
    CHECK(run(g, out, err) == kExitOk);
    CHECK(out.str().find("7.40198086") != std::string::npos);

    RunConfig s = quick(Command::steiner);
    s.n = 3;
    CHECK(run(s, out, err) == kExitOk);

    const fs::path p = scratch_dir() / "parallel.json";
    RunConfig par = quick(Command::parallel);
    par.domain.r0 = 0.8;
    par.t_points = 4;
    par.format = "json";
    par.output = p.string();
    CHECK(run(par, out, err) == kExitOk);
    const auto doc = nlohmann::json::parse(slurp(p));
    CHECK(doc.size() == 5);

    RunConfig d = quick(Command::domain_eig);
    d.betas = {-1.0, 1.0};
    d.refinements = 1;
    CHECK(run(d, out, err) == kExitOk);
}

TEST_CASE("sweeps are byte-for-byte reproducible")
{
    RunConfig c = quick(Command::sweep);
    verify::FamilySpec fam;
    fam.count = 3;
    fam.circles = 1;
    fam.seed = c.seed;
    fam.samples = c.angles;
    c.family = fam;
    c.betas = {-1.0, 1.0};
    c.refinements = 1;
    const fs::path a = scratch_dir() / "sweep_a.csv";
    const fs::path b = scratch_dir() / "sweep_b.csv";
    std::ostringstream out, err;
    c.output = a.string();
    CHECK(run(c, out, err) == kExitOk);
    c.output = b.string();
    CHECK(run(c, out, err) == kExitOk);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).size() > 100);
}
