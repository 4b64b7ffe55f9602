// nf: normal-form laboratory command line.
//
// Subcommands: normal-form, simulate, compare, sweep, stationary,
// convert-units.  Exit code 0 on success; failures print a machine-readable
// JSON error record to stderr and exit nonzero.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "nf/experiment.hpp"
#include "nf/normalform.hpp"
#include "nf/parse.hpp"
#include "nf/pretty.hpp"
#include "nf/units.hpp"

using njson = nlohmann::json;

namespace {

int fail(const std::string& type, const std::string& what) {
    njson err;
    err["error"] = what;
    err["type"] = type;
    std::cerr << err.dump() << "\n";
    return 1;
}

std::string render(const nf::Functional& f, const std::string& format) {
    if (format == "latex") return nf::pretty_print(f, nf::PrintStyle::latex);
    if (format == "json") return nf::to_json(f);
    return nf::pretty_print(f, nf::PrintStyle::laplacian);
}

int cmd_normal_form(int order, const std::string& format) {
    nf::NormalFormResult res = nf::normal_form(order);

    auto diff_line = [&](const std::string& name, const nf::Functional& computed,
                         const nf::Functional& reference) {
        bool match = computed == reference;
        return name + ": " + (match ? "match" : "MISMATCH");
    };

    if (format == "json") {
        njson j;
        j["order"] = order;
        j["H0"] = njson::parse(nf::to_json(res.H0));
        njson z = njson::array(), g = njson::array(), r = njson::array();
        for (int k = 0; k < order; ++k) {
            z.push_back(njson::parse(nf::to_json(res.Z[k])));
            g.push_back(njson::parse(nf::to_json(res.G[k])));
            r.push_back(res.residuals[k].is_zero());
        }
        j["Z"] = z;
        j["G"] = g;
        j["residuals_zero"] = r;
        if (order >= 1) j["diff"]["Z1"] = (res.Z[0] == nf::kgw::Z1());
        if (order >= 1) j["diff"]["G1"] = (res.G[0] == nf::kgw::G1());
        if (order >= 2) j["diff"]["Z2"] = (res.Z[1] == nf::kgw::Z2());
        if (order >= 2) j["diff"]["G2"] = (res.G[1] == nf::kgw::G2());
        if (order >= 3) j["diff"]["order>=3"] = "no closed-form reference";
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    for (int k = 0; k < order; ++k) {
        std::cout << "Z_" << (k + 1) << " = " << render(res.Z[k], format) << "\n\n";
        std::cout << "G_" << (k + 1) << " = " << render(res.G[k], format) << "\n\n";
        std::cout << "residual_" << (k + 1) << " = "
                  << (res.residuals[k].is_zero() ? "0 (exact)" : "NONZERO") << "\n\n";
    }
    std::cout << "reference comparison:\n";
    if (order >= 1) {
        std::cout << "  " << diff_line("Z1", res.Z[0], nf::kgw::Z1()) << "\n";
        std::cout << "  " << diff_line("G1", res.G[0], nf::kgw::G1()) << "\n";
    }
    if (order >= 2) {
        std::cout << "  " << diff_line("Z2", res.Z[1], nf::kgw::Z2()) << "\n";
        std::cout << "  " << diff_line("G2", res.G[1], nf::kgw::G2()) << "\n";
    }
    for (int k = 3; k <= order; ++k)
        std::cout << "  Z" << k << ", G" << k << ": no closed-form reference\n";
    return 0;
}

int cmd_stationary(int nodes, double tol, const std::string& csv_path,
                   const std::string& snapshot_path, int grid_n, double grid_length,
                   int grid_dim) {
    nf::EigenResult res = nf::shoot_radial(nodes, tol);
    njson j;
    j["nodes"] = res.nodes;
    j["omega"] = res.omega;
    j["mu"] = res.mu;
    j["residual"] = res.residual;
    j["normalization"] = res.profile.normalization;
    std::cout << j.dump(2) << "\n";

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw nf::IoError("cannot write " + csv_path);
        csv << "r,chi,phi\n";
        csv.precision(17);
        for (Eigen::Index i = 0; i < res.profile.r.size(); ++i)
            csv << res.profile.r[i] << "," << res.profile.chi[i] << "," << res.profile.phi[i]
                << "\n";
    }
    if (!snapshot_path.empty()) {
        nf::Grid g{grid_dim, grid_n, grid_length};
        nf::SpectralToolbox tb(g);
        nf::ComplexState s;
        s.psi = nf::profile_to_grid(res.profile, tb);
        s.phi = tb.inverse_laplacian_zero_mean(s.psi.abs2());
        s.pphi = nf::ArrayXd::Zero(g.size());
        s.frame = nf::Frame::T;
        s.gauged = true;
        nf::write_snapshot(snapshot_path, nf::snapshot_of(s, g, 0.0));
    }
    return 0;
}

int cmd_convert_units(double m_grams, double total_grams, double total_solar,
                      const std::string& format) {
    double total = total_grams > 0 ? total_grams : total_solar * nf::constants::solar_mass;
    nf::PhysicalParams p = nf::convert_units(m_grams, total);
    if (format == "csv") {
        std::cout << "particle_mass_g,total_mass_g,N,mu,mu2,epsilon,lambda_cm\n";
        std::cout.precision(17);
        std::cout << p.particle_mass_g << "," << p.total_mass_g << "," << p.N << "," << p.mu << ","
                  << p.mu2 << "," << p.epsilon << "," << p.lambda_cm << "\n";
        return 0;
    }
    njson j;
    j["particle_mass_g"] = p.particle_mass_g;
    j["total_mass_g"] = p.total_mass_g;
    j["N"] = p.N;
    j["mu"] = p.mu;
    j["mu2"] = p.mu2;
    j["epsilon"] = p.epsilon;
    j["lambda_cm"] = p.lambda_cm;
    if (format == "text") {
        std::cout << "N       = " << p.N << "\n"
                  << "mu      = " << p.mu << "\n"
                  << "mu^2    = " << p.mu2 << "\n"
                  << "epsilon = " << p.epsilon << "\n"
                  << "lambda  = " << p.lambda_cm << " cm\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian normal-form laboratory for the Klein-Gordon-Wave system"};
    app.require_subcommand(1);

    // normal-form
    auto* nfcmd = app.add_subcommand("normal-form", "compute Z_j, G_j to a given order");
    int order = 2;
    std::string nf_format = "text";
    nfcmd->add_option("--order", order, "normal-form order (>= 1)")->default_val(2);
    nfcmd->add_option("--format", nf_format, "text, latex or json")
        ->check(CLI::IsMember({"text", "latex", "json"}));

    // simulate / compare / sweep share config/out/workers
    std::string config_path, out_dir = "out";
    int workers = 1;
    auto add_run_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config JSON")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--workers", workers, "concurrent runs");
    };
    auto* simulate = app.add_subcommand("simulate", "run configured systems, write diagnostics");
    add_run_opts(simulate);
    auto* compare = app.add_subcommand("compare", "run systems against a reference");
    add_run_opts(compare);
    auto* sweep = app.add_subcommand("sweep", "epsilon sweep with fitted slope");
    add_run_opts(sweep);

    // stationary
    auto* stationary = app.add_subcommand("stationary", "radial SP stationary states");
    int nodes = 0, grid_n = 256, grid_dim = 1;
    double tol = 1e-8, grid_length = 16.0 * M_PI;
    std::string csv_path, snapshot_path;
    stationary->add_option("--nodes", nodes, "radial node count j");
    stationary->add_option("--tol", tol, "eigen-equation residual tolerance");
    stationary->add_option("--csv", csv_path, "profile CSV path (r,chi,phi)");
    stationary->add_option("--snapshot", snapshot_path, "NFLD1 export on a Cartesian grid");
    stationary->add_option("--grid-n", grid_n, "points per dim for the export");
    stationary->add_option("--grid-length", grid_length, "box length for the export");
    stationary->add_option("--grid-dim", grid_dim, "dimension for the export");

    // convert-units
    auto* units = app.add_subcommand("convert-units", "physical-to-dimensionless parameter conversion");
    double m_grams = 0, total_grams = 0, total_solar = 0;
    std::string u_format = "json";
    units->add_option("--particle-mass-grams", m_grams, "candidate particle mass m")->required();
    units->add_option("--total-mass-grams", total_grams, "total mass N m in grams");
    units->add_option("--total-mass-solar", total_solar, "total mass N m in solar masses");
    units->add_option("--format", u_format, "json, text or csv")
        ->check(CLI::IsMember({"json", "text", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (nfcmd->parsed()) {
            if (order < 1) return fail("usage", "--order must be >= 1");
            return cmd_normal_form(order, nf_format);
        }
        if (simulate->parsed() || compare->parsed() || sweep->parsed()) {
            nf::ExperimentConfig cfg = nf::load_config_file(config_path);
            if ((compare->parsed() || sweep->parsed()) && !cfg.compare)
                return fail("config", "this subcommand needs a compare section in the config");
            if (sweep->parsed() && cfg.epsilons.size() < 2)
                return fail("config", "sweep needs at least two epsilon values");
            nf::ExperimentOutcome out = nf::run_experiment(cfg, out_dir, workers);
            njson j;
            j["manifest"] = out.manifest_path;
            njson sl = njson::array();
            for (const auto& s : out.sweeps) {
                njson e;
                e["system"] = s.system;
                e["reference"] = s.reference;
                e["slope"] = s.slope;
                sl.push_back(e);
            }
            if (!sl.empty()) j["sweeps"] = sl;
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (stationary->parsed())
            return cmd_stationary(nodes, tol, csv_path, snapshot_path, grid_n, grid_length,
                                  grid_dim);
        if (units->parsed()) {
            if (total_grams <= 0 && total_solar <= 0)
                return fail("usage", "provide --total-mass-grams or --total-mass-solar");
            return cmd_convert_units(m_grams, total_grams, total_solar, u_format);
        }
    } catch (const nf::ConfigError& e) {
        return fail("config", e.what());
    } catch (const nf::ParseError& e) {
        return fail("parse", e.what());
    } catch (const nf::SolverError& e) {
        return fail("solver", e.what());
    } catch (const std::exception& e) {
        return fail("runtime", e.what());
    }
    return fail("usage", "no subcommand");
}
