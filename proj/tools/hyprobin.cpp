#include "hyprobin/cli.hpp"
#include "hyprobin/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using hyprobin::ConfigError;
using hyprobin::cli::RunConfig;

hyprobin::domain2d::Mode parse_mode(const std::string& text)
{
    std::stringstream ss(text);
    std::string k, eps, phi;
    if (!std::getline(ss, k, ':') || !std::getline(ss, eps, ':'))
        throw ConfigError("--mode", "expected k:amplitude[:phase], got '" + text + "'");
    std::getline(ss, phi, ':');
    try {
        std::size_t used = 0;
        hyprobin::domain2d::Mode m;
        m.k = std::stoi(k, &used);
        if (used != k.size() || m.k < 0)
            throw std::invalid_argument(k);
        m.amplitude = std::stod(eps, &used);
        if (used != eps.size())
            throw std::invalid_argument(eps);
        if (!phi.empty()) {
            m.phase = std::stod(phi, &used);
            if (used != phi.size())
                throw std::invalid_argument(phi);
        }
        return m;
    } catch (const std::logic_error&) {
        throw ConfigError("--mode", "cannot parse '" + text + "'");
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("--config", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv)
{
    const RunConfig defaults;
    CLI::App app{"Robin eigenvalue comparison tools for domains of hyperbolic space"};
    app.require_subcommand(1);

    std::string config_path;
    int n = defaults.n;
    double radius = defaults.radius;
    double r0 = defaults.domain.r0;
    std::vector<std::string> modes;
    std::vector<double> betas;
    int angles = defaults.angles, elements = defaults.radial_elements;
    int mesh_nr = defaults.mesh_nr, mesh_ntheta = defaults.mesh_ntheta;
    int refinements = defaults.refinements, t_points = defaults.t_points;
    std::vector<double> offsets = defaults.offsets;
    std::string output = defaults.output, format = defaults.format, mesh_dump;
    std::uint64_t seed = defaults.seed;

    auto* o_config = app.add_option("--config", config_path, "JSON configuration; flags override it");
    auto* o_n = app.add_option("--n", n, "dimension of H^n")->capture_default_str();
    auto* o_R = app.add_option("--R", radius, "ball radius (ball-eig, steiner)")->capture_default_str();
    auto* o_r0 = app.add_option("--r0", r0, "base radius of the domain")->capture_default_str();
    auto* o_mode = app.add_option("--mode", modes, "boundary mode k:amplitude[:phase], repeatable")
                       ->default_str("none");
    auto* o_beta = app.add_option("--beta", betas, "Robin parameter, repeatable")
                       ->default_str("-1 or +1 by command; sweep: -0.5,-1,-2,0.5,1,2");
    auto* o_angles = app.add_option("--angles", angles, "boundary samples M")->capture_default_str();
    auto* o_elem = app.add_option("--elements", elements, "radial finite elements")->capture_default_str();
    auto* o_nr = app.add_option("--mesh-nr", mesh_nr, "mesh rings")->capture_default_str();
    auto* o_nt = app.add_option("--mesh-ntheta", mesh_ntheta, "mesh angular divisions")->capture_default_str();
    auto* o_ref = app.add_option("--refinements", refinements, "uniform refinements for extrapolation")
                      ->capture_default_str();
    auto* o_t = app.add_option("--t-points", t_points, "offsets on the parallel-set grid")
                    ->capture_default_str();
    auto* o_off = app.add_option("--offset", offsets, "outer offsets for steiner, repeatable")
                      ->default_str("0.1 0.4 1");
    auto* o_out = app.add_option("--out", output, "report file")->default_str("none");
    auto* o_fmt = app.add_option("--format", format, "report format")
                      ->check(CLI::IsMember({"csv", "json"}))
                      ->capture_default_str();
    auto* o_seed = app.add_option("--seed", seed, "seed for generated families")->capture_default_str();
    auto* o_dump = app.add_option("--dump-mesh", mesh_dump, "write the coarse mesh")->default_str("none");

    const std::vector<std::pair<const char*, const char*>> commands = {
        {"ball-eig", "first eigenvalue of a geodesic ball by two solvers"},
        {"domain-eig", "first eigenvalue of a radial domain of H^2 by finite elements"},
        {"geometry", "perimeter, area, curvature and inradius of a domain"},
        {"steiner", "outer parallel perimeters of a ball: polynomial vs exact"},
        {"parallel", "inner parallel perimeters of a domain and of its matched ball"},
        {"verify-thm1", "eigenvalue deficit inequality for beta < 0"},
        {"verify-thm4", "eigenvalue deficit inequality for beta > 0"},
        {"verify-lemmas", "perimeter decay bound and parallel-perimeter comparison"},
        {"sweep", "deficit inequalities over a family of domains"},
    };
    for (const auto& [name, help] : commands)
        app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hyprobin::cli::kExitUsage;
    }

    try {
        RunConfig c;
        if (o_config->count())
            c = hyprobin::cli::parse_config(read_file(config_path));
        c.command = hyprobin::cli::parse_command(app.get_subcommands().front()->get_name());
        if (o_n->count()) c.n = n;
        if (o_R->count()) c.radius = radius;
        if (o_r0->count()) c.domain.r0 = r0;
        if (o_mode->count()) {
            c.domain.modes.clear();
            for (const auto& m : modes)
                c.domain.modes.push_back(parse_mode(m));
        }
        if (o_r0->count() || o_mode->count())
            c.domain.samples.clear();
        if (o_beta->count()) c.betas = betas;
        if (o_angles->count()) c.angles = angles;
        if (o_elem->count()) c.radial_elements = elements;
        if (o_nr->count()) c.mesh_nr = mesh_nr;
        if (o_nt->count()) c.mesh_ntheta = mesh_ntheta;
        if (o_ref->count()) c.refinements = refinements;
        if (o_t->count()) c.t_points = t_points;
        if (o_off->count()) c.offsets = offsets;
        if (o_out->count()) c.output = output;
        if (o_fmt->count()) c.format = format;
        if (o_seed->count()) c.seed = seed;
        if (o_dump->count()) c.mesh_dump = mesh_dump;
        if (c.family) {
            c.family->seed = c.seed;
            c.family->samples = c.angles;
        }
        hyprobin::cli::validate(c);
        return hyprobin::cli::run(c, std::cout, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return hyprobin::cli::kExitUsage;
    }
}
