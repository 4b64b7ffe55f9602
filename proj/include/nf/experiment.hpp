#pragma once

#include <optional>

#include "nf/config.hpp"
#include "nf/snapshot.hpp"
#include "nf/stationary.hpp"

namespace nf {

std::string sha256_hex(std::string_view data);

/// Build the configured initial condition as a tau-frame real pair at t = 0.
RealPairState make_initial(const InitialSpec& spec, const SpectralToolbox& tb);

/// One system advanced sample-by-sample in its native frame, exposed in the
/// common gauged frame-T view for comparisons.
class SystemRunner {
  public:
    SystemRunner(System sys, const SpectralToolbox& tb, const SolverConfig& cfg,
                 double sample_interval_T);
    void init(const RealPairState& tau_real);
    void advance_one_sample();
    ComplexState comparable() const;
    double mass() const;
    double hamiltonian() const;
    double native_time() const;
    long long total_steps() const { return steps_total_; }
    double dt() const { return cfg_.dt; }
    const RealPairState& real_state() const { return rs_; }
    System system() const { return sys_; }

  private:
    System sys_;
    const SpectralToolbox& tb_;
    SolverConfig cfg_;
    double interval_T_;
    long long steps_per_sample_ = 0;
    long long steps_total_ = 0;
    long long samples_done_ = 0;
    RealPairState rs_;
    ComplexState cs_;
    std::optional<KgwStepper> kgw_;
    std::optional<KgwComplexStepper> kgwc_;
    std::optional<SwStepper> sw_;
    std::optional<SpStepper> sp_;
    std::optional<Nf2Stepper> nf2_;
};

struct PairSpec {
    System a = System::kgw, b = System::sw;
    double eps = 0.01;
    ErrorNorm norm = ErrorNorm::L2_state;
    double t_end = 1.0;
    int samples = 20;
    double dt_a = 0, dt_b = 0;
    Scheme scheme_a = Scheme::strang, scheme_b = Scheme::strang;
    bool jeans_a = false, jeans_b = false;
    /// Conjugate system a by the G1 flow: initial data mapped forward,
    /// samples pulled back (a must be the kgw system).
    bool g1_transform = false;
};

struct PairResult {
    std::vector<double> times, errors;
    double sup_error = 0, final_error = 0;
};

PairResult run_pair(const SpectralToolbox& tb, const PairSpec& spec, const RealPairState& init);

/// Scheme a system runs with unless overridden.
Scheme default_scheme(System s);

struct SweepOutcome {
    std::string system, reference;
    std::vector<double> eps, errors;
    double slope = 0;
};

struct ExperimentOutcome {
    std::vector<std::string> files;
    std::vector<SweepOutcome> sweeps;
    std::string manifest_path;
};

/// Execute the configured runs, write CSV diagnostics, NFLD1 snapshots, a
/// manifest (config hash, versions, wall time) and optional SVG plots.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::string& outdir,
                                 int workers = 1);

void write_svg_loglog(const std::string& path, const std::string& title,
                      const std::vector<double>& eps, const std::vector<double>& errors,
                      double slope);
void write_svg_trace(const std::string& path, const std::string& title,
                     const std::vector<double>& times, const std::vector<double>& values);

}  // namespace nf
