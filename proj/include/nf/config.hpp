#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nf/compare.hpp"
#include "nf/steppers.hpp"

namespace nf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Initial-condition library entry.
struct InitialSpec {
    enum class Kind { gaussian, sp_ground, snapshot };
    Kind kind = Kind::gaussian;
    double sigma = 1.0;   // gaussian width
    double norm = 1.0;    // ||u||^2 (gaussian) or mass (sp_ground)
    std::string path;     // snapshot path
};

struct CompareSpec {
    std::string reference;          // system name
    ErrorNorm norm = ErrorNorm::L2_state;
    std::string error_time = "final";  // "final" | "sup"
};

/// Schema-validated experiment description; unknown keys are rejected.
struct ExperimentConfig {
    int schema_version = 1;
    std::vector<System> systems;
    Grid grid;
    std::vector<double> epsilons;
    InitialSpec initial;
    Scheme scheme = Scheme::strang;
    double dt = 0.0;  // 0 = default_dt
    double t_end = 1.0;
    int diagnostics_period = 100;
    bool jeans = false;
    std::optional<CompareSpec> compare;
    std::string transform = "none";  // "none" | "g1"
    bool write_snapshots = true;
    bool write_svg = false;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical re-serialization used for the manifest hash.
std::string canonical_json(const ExperimentConfig& cfg);

System system_from_name(const std::string& name);
ErrorNorm norm_from_name(const std::string& name);

}  // namespace nf
