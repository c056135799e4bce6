#pragma once

#include "hyprobin/domain2d.hpp"
#include "hyprobin/verify.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hyprobin::cli {

enum class Command {
    ball_eig,
    domain_eig,
    geometry,
    steiner,
    parallel,
    verify_thm1,
    verify_thm4,
    verify_lemmas,
    sweep,
};

const char* command_name(Command c);
Command parse_command(std::string_view name);

/// True for commands that operate on a domain of H^2.
bool needs_plane(Command c);

struct DomainSpec {
    double r0 = 1.0;
    std::vector<domain2d::Mode> modes;
    std::vector<double> samples;  // explicit r(theta_j); overrides r0/modes when non-empty

    bool operator==(const DomainSpec&) const = default;
};

struct RunConfig {
    Command command = Command::ball_eig;
    int n = 2;
    double radius = 1.0;  // ball commands
    DomainSpec domain;
    std::vector<double> betas;
    int angles = 512;
    int radial_elements = 512;
    int mesh_nr = 48;
    int mesh_ntheta = 192;
    int refinements = 2;
    int t_points = 32;
    std::vector<double> offsets = {0.1, 0.4, 1.0};  // steiner
    std::string output;
    std::string format = "csv";
    std::uint64_t seed = 1;
    std::optional<verify::FamilySpec> family;    // sweep: generated domains
    std::vector<verify::FamilyDomain> domains;   // sweep: explicit domains
    std::string mesh_dump;

    bool operator==(const RunConfig&) const = default;
};

/// Strict JSON parsing: unknown keys, type mismatches and out-of-range values
/// raise ConfigError naming the field. Missing keys keep their defaults.
RunConfig parse_config(std::string_view text);

/// JSON document that parse_config maps back to the same config.
std::string emit_config(const RunConfig& config);

/// Cross-field checks (dimension vs command, sign of beta, radii > 0).
void validate(const RunConfig& config);

/// The curve described by config.domain on config.angles samples.
domain2d::RadialCurve build_domain(const RunConfig& config);

/// Domains a sweep runs over: explicit list, else the generated family.
std::vector<verify::FamilyDomain> sweep_domains(const RunConfig& config);

} // namespace hyprobin::cli
