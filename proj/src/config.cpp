#include "hyprobin/config.hpp"

#include "hyprobin/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace hyprobin::cli {

namespace {

using json = nlohmann::json;

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::ball_eig, "ball-eig"},           {Command::domain_eig, "domain-eig"},
    {Command::geometry, "geometry"},           {Command::steiner, "steiner"},
    {Command::parallel, "parallel"},           {Command::verify_thm1, "verify-thm1"},
    {Command::verify_thm4, "verify-thm4"},     {Command::verify_lemmas, "verify-lemmas"},
    {Command::sweep, "sweep"},
};

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object())
        throw ConfigError(where.empty() ? "<document>" : where, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : obj.items())
        if (!ok.count(item.key()))
            throw ConfigError(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
}

double get_number(const json& v, const std::string& field)
{
    if (!v.is_number())
        throw ConfigError(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw ConfigError(field, "must be finite");
    return d;
}

int get_int(const json& v, const std::string& field)
{
    if (!v.is_number_integer())
        throw ConfigError(field, "expected an integer");
    return v.get<int>();
}

std::uint64_t get_u64(const json& v, const std::string& field)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ConfigError(field, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& v, const std::string& field)
{
    if (!v.is_string())
        throw ConfigError(field, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_numbers(const json& v, const std::string& field)
{
    if (!v.is_array())
        throw ConfigError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(get_number(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<domain2d::Mode> get_modes(const json& v, const std::string& field)
{
    if (!v.is_array())
        throw ConfigError(field, "expected an array of modes");
    std::vector<domain2d::Mode> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        check_keys(v[i], f, {"k", "amplitude", "phase"});
        domain2d::Mode m;
        if (!v[i].contains("k"))
            throw ConfigError(f + ".k", "missing");
        m.k = get_int(v[i]["k"], f + ".k");
        if (m.k < 0)
            throw ConfigError(f + ".k", "must be >= 0");
        if (v[i].contains("amplitude"))
            m.amplitude = get_number(v[i]["amplitude"], f + ".amplitude");
        if (v[i].contains("phase"))
            m.phase = get_number(v[i]["phase"], f + ".phase");
        out.push_back(m);
    }
    return out;
}

json modes_json(const std::vector<domain2d::Mode>& modes)
{
    json arr = json::array();
    for (const auto& m : modes)
        arr.push_back({{"k", m.k}, {"amplitude", m.amplitude}, {"phase", m.phase}});
    return arr;
}

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok)
        throw ConfigError(field, what);
}

// First angle where the radial function is non-positive, if any.
std::optional<std::pair<double, double>> first_nonpositive(double r0,
                                                           const std::vector<domain2d::Mode>& modes,
                                                           int samples)
{
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * std::numbers::pi * j / samples;
        double r = r0;
        for (const auto& m : modes)
            r += m.amplitude * std::cos(m.k * th + m.phase);
        if (!(r > 0.0))
            return std::make_pair(th, r);
    }
    return std::nullopt;
}

} // namespace

const char* command_name(Command c)
{
    for (const auto& [cmd, name] : kCommands)
        if (cmd == c)
            return name;
    return "?";
}

Command parse_command(std::string_view name)
{
    for (const auto& [cmd, n] : kCommands)
        if (name == n)
            return cmd;
    throw ConfigError("command", "unknown command '" + std::string(name) + "'");
}

bool needs_plane(Command c)
{
    return c != Command::ball_eig && c != Command::steiner;
}

RunConfig parse_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
    }
    check_keys(doc, "",
               {"command", "n", "radius", "domain", "betas", "angles", "radial_elements", "mesh_nr",
                "mesh_ntheta", "refinements", "t_points", "offsets", "output", "format", "seed",
                "family", "domains", "mesh_dump"});

    RunConfig c;
    if (doc.contains("command"))
        c.command = parse_command(get_string(doc["command"], "command"));
    if (doc.contains("n"))
        c.n = get_int(doc["n"], "n");
    if (doc.contains("radius"))
        c.radius = get_number(doc["radius"], "radius");
    if (doc.contains("domain")) {
        const json& d = doc["domain"];
        check_keys(d, "domain", {"r0", "modes", "samples"});
        if (d.contains("r0"))
            c.domain.r0 = get_number(d["r0"], "domain.r0");
        if (d.contains("modes"))
            c.domain.modes = get_modes(d["modes"], "domain.modes");
        if (d.contains("samples"))
            c.domain.samples = get_numbers(d["samples"], "domain.samples");
    }
    if (doc.contains("betas"))
        c.betas = get_numbers(doc["betas"], "betas");
    if (doc.contains("angles"))
        c.angles = get_int(doc["angles"], "angles");
    if (doc.contains("radial_elements"))
        c.radial_elements = get_int(doc["radial_elements"], "radial_elements");
    if (doc.contains("mesh_nr"))
        c.mesh_nr = get_int(doc["mesh_nr"], "mesh_nr");
    if (doc.contains("mesh_ntheta"))
        c.mesh_ntheta = get_int(doc["mesh_ntheta"], "mesh_ntheta");
    if (doc.contains("refinements"))
        c.refinements = get_int(doc["refinements"], "refinements");
    if (doc.contains("t_points"))
        c.t_points = get_int(doc["t_points"], "t_points");
    if (doc.contains("offsets"))
        c.offsets = get_numbers(doc["offsets"], "offsets");
    if (doc.contains("output"))
        c.output = get_string(doc["output"], "output");
    if (doc.contains("format"))
        c.format = get_string(doc["format"], "format");
    if (doc.contains("seed"))
        c.seed = get_u64(doc["seed"], "seed");
    if (doc.contains("mesh_dump"))
        c.mesh_dump = get_string(doc["mesh_dump"], "mesh_dump");
    if (doc.contains("family")) {
        const json& f = doc["family"];
        check_keys(f, "family",
                   {"count", "circles", "r0_min", "r0_max", "max_modes", "k_min", "k_max",
                    "amplitude_max"});
        verify::FamilySpec spec;
        if (f.contains("count"))
            spec.count = get_int(f["count"], "family.count");
        if (f.contains("circles"))
            spec.circles = get_int(f["circles"], "family.circles");
        if (f.contains("r0_min"))
            spec.r0_min = get_number(f["r0_min"], "family.r0_min");
        if (f.contains("r0_max"))
            spec.r0_max = get_number(f["r0_max"], "family.r0_max");
        if (f.contains("max_modes"))
            spec.max_modes = get_int(f["max_modes"], "family.max_modes");
        if (f.contains("k_min"))
            spec.k_min = get_int(f["k_min"], "family.k_min");
        if (f.contains("k_max"))
            spec.k_max = get_int(f["k_max"], "family.k_max");
        if (f.contains("amplitude_max"))
            spec.amplitude_max = get_number(f["amplitude_max"], "family.amplitude_max");
        c.family = spec;
    }
    if (doc.contains("domains")) {
        const json& arr = doc["domains"];
        require(arr.is_array(), "domains", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string f = "domains[" + std::to_string(i) + "]";
            check_keys(arr[i], f, {"id", "r0", "modes"});
            verify::FamilyDomain d;
            d.id = arr[i].contains("id") ? get_string(arr[i]["id"], f + ".id") : "d" + std::to_string(i);
            if (arr[i].contains("r0"))
                d.r0 = get_number(arr[i]["r0"], f + ".r0");
            if (arr[i].contains("modes"))
                d.modes = get_modes(arr[i]["modes"], f + ".modes");
            c.domains.push_back(std::move(d));
        }
    }
    // the family seed and sample count follow the top-level settings
    if (c.family) {
        c.family->seed = c.seed;
        c.family->samples = c.angles;
    }
    validate(c);
    return c;
}

std::string emit_config(const RunConfig& c)
{
    json doc = {{"command", command_name(c.command)},
                {"n", c.n},
                {"radius", c.radius},
                {"domain", {{"r0", c.domain.r0}, {"modes", modes_json(c.domain.modes)}}},
                {"betas", c.betas},
                {"angles", c.angles},
                {"radial_elements", c.radial_elements},
                {"mesh_nr", c.mesh_nr},
                {"mesh_ntheta", c.mesh_ntheta},
                {"refinements", c.refinements},
                {"t_points", c.t_points},
                {"offsets", c.offsets},
                {"output", c.output},
                {"format", c.format},
                {"seed", c.seed},
                {"mesh_dump", c.mesh_dump}};
    if (!c.domain.samples.empty())
        doc["domain"]["samples"] = c.domain.samples;
    if (c.family)
        doc["family"] = {{"count", c.family->count},
                         {"circles", c.family->circles},
                         {"r0_min", c.family->r0_min},
                         {"r0_max", c.family->r0_max},
                         {"max_modes", c.family->max_modes},
                         {"k_min", c.family->k_min},
                         {"k_max", c.family->k_max},
                         {"amplitude_max", c.family->amplitude_max}};
    if (!c.domains.empty()) {
        json arr = json::array();
        for (const auto& d : c.domains)
            arr.push_back({{"id", d.id}, {"r0", d.r0}, {"modes", modes_json(d.modes)}});
        doc["domains"] = arr;
    }
    return doc.dump(2);
}

void validate(const RunConfig& c)
{
    require(c.n >= 2, "n", "dimension must be >= 2");
    if (needs_plane(c.command))
        require(c.n == 2, "n", std::string(command_name(c.command)) +
                                   " works on domains of H^2 only; use n = 2");
    require(c.radius > 0.0, "radius", "must be positive");
    require(c.angles >= 128 && c.angles % 2 == 0, "angles", "must be even and >= 128");
    require(c.radial_elements >= 16, "radial_elements", "must be >= 16");
    require(c.mesh_nr >= 8, "mesh_nr", "must be >= 8");
    require(c.mesh_ntheta >= 64, "mesh_ntheta", "must be >= 64");
    require(c.refinements >= 0 && c.refinements <= 4, "refinements", "must be in [0, 4]");
    require(c.t_points >= 2, "t_points", "must be >= 2");
    require(c.format == "csv" || c.format == "json", "format", "must be 'csv' or 'json'");
    for (double s : c.offsets)
        require(s >= 0.0, "offsets", "outer offsets must be non-negative");

    require(c.domain.r0 > 0.0, "domain.r0", "must be positive");
    if (c.domain.samples.empty()) {
        if (const auto bad = first_nonpositive(c.domain.r0, c.domain.modes, c.angles))
            throw ConfigError("domain.modes", "radius r = " + std::to_string(bad->second) +
                                                  " <= 0 at theta = " + std::to_string(bad->first));
    } else {
        for (std::size_t j = 0; j < c.domain.samples.size(); ++j)
            if (!(c.domain.samples[j] > 0.0))
                throw ConfigError("domain.samples",
                                  "radius <= 0 at theta = " +
                                      std::to_string(2.0 * std::numbers::pi * j /
                                                     c.domain.samples.size()));
    }
    for (std::size_t i = 0; i < c.domains.size(); ++i)
        if (const auto bad = first_nonpositive(c.domains[i].r0, c.domains[i].modes, c.angles))
            throw ConfigError("domains[" + std::to_string(i) + "]",
                              "radius r = " + std::to_string(bad->second) +
                                  " <= 0 at theta = " + std::to_string(bad->first));

    const bool verifying = c.command == Command::verify_thm1 || c.command == Command::verify_thm4 ||
                           c.command == Command::sweep;
    if (verifying)
        for (double b : c.betas)
            require(b != 0.0, "betas", "theorems require beta != 0");
    if (c.command == Command::verify_thm1)
        for (double b : c.betas)
            require(b < 0.0, "betas", "verify-thm1 needs beta < 0");
    if (c.command == Command::verify_thm4)
        for (double b : c.betas)
            require(b > 0.0, "betas", "verify-thm4 needs beta > 0");
    if (c.family) {
        require(c.family->count >= 0, "family.count", "must be >= 0");
        require(c.family->circles >= 0, "family.circles", "must be >= 0");
        require(c.family->r0_min > 0.0 && c.family->r0_min <= c.family->r0_max, "family.r0_min",
                "need 0 < r0_min <= r0_max");
        require(c.family->k_min >= 1 && c.family->k_min <= c.family->k_max, "family.k_min",
                "need 1 <= k_min <= k_max");
        require(c.family->max_modes >= 1, "family.max_modes", "must be >= 1");
        require(c.family->amplitude_max > 0.005, "family.amplitude_max", "must exceed 0.005");
    }
}

domain2d::RadialCurve build_domain(const RunConfig& c)
{
    if (!c.domain.samples.empty())
        return domain2d::make_curve(c.domain.samples);
    return domain2d::make_family(c.domain.r0, c.domain.modes, c.angles);
}

std::vector<verify::FamilyDomain> sweep_domains(const RunConfig& c)
{
    if (!c.domains.empty())
        return c.domains;
    if (c.family) {
        verify::FamilySpec spec = *c.family;
        spec.seed = c.seed;
        spec.samples = c.angles;
        return verify::generate_family(spec);
    }
    return {};
}

} // namespace hyprobin::cli
