#include "nf/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace nf {

using json = nlohmann::json;

System system_from_name(const std::string& name) {
    if (name == "kgw") return System::kgw;
    if (name == "kgw_complex") return System::kgw_complex;
    if (name == "sw") return System::sw;
    if (name == "sp") return System::sp;
    if (name == "nf2") return System::nf2;
    throw ConfigError("unknown system '" + name + "'");
}

ErrorNorm norm_from_name(const std::string& name) {
    if (name == "L2_state") return ErrorNorm::L2_state;
    if (name == "L2_psi") return ErrorNorm::L2_psi;
    if (name == "mass_gap") return ErrorNorm::mass_gap;
    if (name == "observable_h") return ErrorNorm::observable_h;
    throw ConfigError("unknown error norm '" + name + "'");
}

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
    for (const auto& k : required) {
        if (!obj.contains(k)) throw ConfigError("missing key '" + k + "' in " + where);
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    require_keys(j,
                 {"schema_version", "systems", "grid", "epsilons", "initial", "scheme", "dt",
                  "t_end", "diagnostics_period", "jeans", "compare", "transform", "output"},
                 {"schema_version", "systems", "grid", "epsilons", "initial", "t_end"}, "config");

    ExperimentConfig c;
    c.schema_version = j["schema_version"].get<int>();
    if (c.schema_version != 1) throw ConfigError("unsupported schema_version");

    if (!j["systems"].is_array() || j["systems"].empty())
        throw ConfigError("systems must be a non-empty list");
    for (const auto& s : j["systems"]) c.systems.push_back(system_from_name(s.get<std::string>()));

    const json& g = j["grid"];
    require_keys(g, {"dim", "n", "length"}, {"dim", "n", "length"}, "grid");
    c.grid.dim = g["dim"].get<int>();
    c.grid.n = g["n"].get<int>();
    c.grid.length = g["length"].get<double>();
    if (!c.grid.valid())
        throw ConfigError("invalid grid: dim in 1..3, n a power of two, length > 0");

    if (!j["epsilons"].is_array() || j["epsilons"].empty())
        throw ConfigError("epsilons must be a non-empty list");
    for (const auto& e : j["epsilons"]) {
        double v = e.get<double>();
        if (!(v > 0)) throw ConfigError("epsilon values must be positive");
        c.epsilons.push_back(v);
    }

    const json& init = j["initial"];
    require_keys(init, {"type", "sigma", "norm", "mass", "path"}, {"type"}, "initial");
    std::string kind = init["type"].get<std::string>();
    if (kind == "gaussian") {
        c.initial.kind = InitialSpec::Kind::gaussian;
        if (init.contains("sigma")) c.initial.sigma = init["sigma"].get<double>();
        if (init.contains("norm")) c.initial.norm = init["norm"].get<double>();
    } else if (kind == "sp_ground") {
        c.initial.kind = InitialSpec::Kind::sp_ground;
        if (init.contains("mass")) c.initial.norm = init["mass"].get<double>();
    } else if (kind == "snapshot") {
        c.initial.kind = InitialSpec::Kind::snapshot;
        if (!init.contains("path")) throw ConfigError("initial.type snapshot requires path");
        c.initial.path = init["path"].get<std::string>();
    } else {
        throw ConfigError("unknown initial.type '" + kind + "'");
    }

    if (j.contains("scheme")) {
        std::string s = j["scheme"].get<std::string>();
        if (s == "strang") c.scheme = Scheme::strang;
        else if (s == "rk4") c.scheme = Scheme::rk4;
        else throw ConfigError("scheme must be strang or rk4");
    }
    if (j.contains("dt")) c.dt = j["dt"].get<double>();
    c.t_end = j["t_end"].get<double>();
    if (j.contains("diagnostics_period")) {
        c.diagnostics_period = j["diagnostics_period"].get<int>();
        if (c.diagnostics_period < 1) throw ConfigError("diagnostics_period must be >= 1");
    }
    if (j.contains("jeans")) c.jeans = j["jeans"].get<bool>();
    if (j.contains("compare")) {
        const json& cmp = j["compare"];
        require_keys(cmp, {"reference", "norm", "error_time"}, {"reference"}, "compare");
        CompareSpec spec;
        spec.reference = cmp["reference"].get<std::string>();
        system_from_name(spec.reference);  // validate
        if (cmp.contains("norm")) spec.norm = norm_from_name(cmp["norm"].get<std::string>());
        if (cmp.contains("error_time")) {
            spec.error_time = cmp["error_time"].get<std::string>();
            if (spec.error_time != "final" && spec.error_time != "sup")
                throw ConfigError("compare.error_time must be final or sup");
        }
        c.compare = spec;
    }
    if (j.contains("transform")) {
        c.transform = j["transform"].get<std::string>();
        if (c.transform != "none" && c.transform != "g1")
            throw ConfigError("transform must be none or g1");
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        require_keys(o, {"snapshots", "svg"}, {}, "output");
        if (o.contains("snapshots")) c.write_snapshots = o["snapshots"].get<bool>();
        if (o.contains("svg")) c.write_svg = o["svg"].get<bool>();
    }
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_json(const ExperimentConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    json systems = json::array();
    for (System s : c.systems) systems.push_back(system_name(s));
    j["systems"] = systems;
    j["grid"] = {{"dim", c.grid.dim}, {"n", c.grid.n}, {"length", c.grid.length}};
    j["epsilons"] = c.epsilons;
    switch (c.initial.kind) {
        case InitialSpec::Kind::gaussian:
            j["initial"] = {{"type", "gaussian"}, {"sigma", c.initial.sigma}, {"norm", c.initial.norm}};
            break;
        case InitialSpec::Kind::sp_ground:
            j["initial"] = {{"type", "sp_ground"}, {"mass", c.initial.norm}};
            break;
        case InitialSpec::Kind::snapshot:
            j["initial"] = {{"type", "snapshot"}, {"path", c.initial.path}};
            break;
    }
    j["scheme"] = c.scheme == Scheme::strang ? "strang" : "rk4";
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["diagnostics_period"] = c.diagnostics_period;
    j["jeans"] = c.jeans;
    if (c.compare) {
        const char* norm = "L2_state";
        switch (c.compare->norm) {
            case ErrorNorm::L2_state: norm = "L2_state"; break;
            case ErrorNorm::L2_psi: norm = "L2_psi"; break;
            case ErrorNorm::mass_gap: norm = "mass_gap"; break;
            case ErrorNorm::observable_h: norm = "observable_h"; break;
        }
        j["compare"] = {{"reference", c.compare->reference},
                        {"norm", norm},
                        {"error_time", c.compare->error_time}};
    }
    j["transform"] = c.transform;
    j["output"] = {{"snapshots", c.write_snapshots}, {"svg", c.write_svg}};
    return j.dump();
}

}  // namespace nf
