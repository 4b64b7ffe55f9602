#include "nf/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <thread>

namespace nf {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ------------------------------------------------------------------ sha256

namespace {

struct Sha256 {
    uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                     0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    uint64_t length = 0;
    uint8_t buffer[64];
    std::size_t fill = 0;

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void process(const uint8_t* p) {
        static const uint32_t K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (p[4 * i] << 24) | (p[4 * i + 1] << 16) | (p[4 * i + 2] << 8) | p[4 * i + 3];
        for (int i = 16; i < 64; ++i) {
            uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            uint32_t ch = (e & f) ^ (~e & g);
            uint32_t t1 = hh + S1 + ch + K[i] + w[i];
            uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            uint32_t t2 = S0 + maj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }

    void update(const uint8_t* data, std::size_t len) {
        length += len;
        while (len) {
            std::size_t take = std::min(len, 64 - fill);
            std::memcpy(buffer + fill, data, take);
            fill += take;
            data += take;
            len -= take;
            if (fill == 64) {
                process(buffer);
                fill = 0;
            }
        }
    }

    std::string finish() {
        uint64_t bits = length * 8;
        uint8_t pad = 0x80;
        update(&pad, 1);
        uint8_t zero = 0;
        while (fill != 56) update(&zero, 1);
        uint8_t lenb[8];
        for (int i = 0; i < 8; ++i) lenb[i] = static_cast<uint8_t>(bits >> (56 - 8 * i));
        update(lenb, 8);
        static const char* hex = "0123456789abcdef";
        std::string out;
        for (uint32_t v : h)
            for (int i = 28; i >= 0; i -= 4) out.push_back(hex[(v >> i) & 0xf]);
        return out;
    }
};

}  // namespace

std::string sha256_hex(std::string_view data) {
    Sha256 s;
    s.update(reinterpret_cast<const uint8_t*>(data.data()), data.size());
    return s.finish();
}

// ------------------------------------------------------------ initial data

RealPairState make_initial(const InitialSpec& spec, const SpectralToolbox& tb) {
    switch (spec.kind) {
        case InitialSpec::Kind::gaussian:
            return gaussian_packet(tb, spec.sigma, spec.norm);
        case InitialSpec::Kind::sp_ground: {
            BoxGround g = imaginary_time_ground_box(tb, spec.norm, 1e-10);
            RealPairState r;
            r.u = std::sqrt(2.0) * g.state.psi.real();
            r.pu = std::sqrt(2.0) * g.state.psi.imag();
            r.phi = g.state.phi;
            r.pphi = ArrayXd::Zero(tb.grid().size());
            r.time = 0.0;
            return r;
        }
        case InitialSpec::Kind::snapshot: {
            Snapshot s = read_snapshot(spec.path);
            if (s.grid.n != tb.grid().n || s.grid.dim != tb.grid().dim)
                throw ConfigError("snapshot grid does not match the configured grid");
            if (s.frame != Frame::tau || s.gauged)
                throw ConfigError("initial snapshot must hold a tau-frame ungauged state");
            return real_pair_from(s);
        }
    }
    throw ConfigError("unreachable initial kind");
}

// ------------------------------------------------------------ SystemRunner

Scheme default_scheme(System s) {
    switch (s) {
        case System::kgw: return Scheme::strang;
        case System::kgw_complex: return Scheme::rk4;
        case System::sw: return Scheme::strang;
        case System::sp: return Scheme::strang;
        case System::nf2: return Scheme::rk4;
    }
    return Scheme::strang;
}

SystemRunner::SystemRunner(System sys, const SpectralToolbox& tb, const SolverConfig& cfg,
                           double sample_interval_T)
    : sys_(sys), tb_(tb), cfg_(cfg), interval_T_(sample_interval_T) {
    double native_interval =
        (sys_ == System::kgw) ? sample_interval_T / cfg_.epsilon : sample_interval_T;
    double dt_request = cfg_.dt > 0 ? cfg_.dt : default_dt(tb.grid(), cfg_.epsilon);
    steps_per_sample_ = std::max<long long>(1, std::llround(std::ceil(native_interval / dt_request)));
    cfg_.dt = native_interval / static_cast<double>(steps_per_sample_);
    switch (sys_) {
        case System::kgw: kgw_.emplace(tb_, cfg_); break;
        case System::kgw_complex: kgwc_.emplace(tb_, cfg_); break;
        case System::sw: sw_.emplace(tb_, cfg_); break;
        case System::sp: sp_.emplace(tb_, cfg_); break;
        case System::nf2: nf2_.emplace(tb_, cfg_); break;
    }
}

void SystemRunner::init(const RealPairState& tau_real) {
    samples_done_ = 0;
    steps_total_ = 0;
    if (sys_ == System::kgw) {
        rs_ = tau_real;
        rs_.time = 0.0;
    } else {
        cs_ = gauge_to_T(to_complex(tau_real), cfg_.epsilon);
        cs_.time = 0.0;
        if (sys_ == System::sp) sp_->refresh_potential(cs_);
    }
}

void SystemRunner::advance_one_sample() {
    switch (sys_) {
        case System::kgw: kgw_->run(rs_, steps_per_sample_); break;
        case System::kgw_complex: kgwc_->run(cs_, steps_per_sample_); break;
        case System::sw: sw_->run(cs_, steps_per_sample_); break;
        case System::sp: sp_->run(cs_, steps_per_sample_); break;
        case System::nf2: nf2_->run(cs_, steps_per_sample_); break;
    }
    steps_total_ += steps_per_sample_;
    ++samples_done_;
    // pin the sample time exactly to avoid drift in comparisons
    double t = static_cast<double>(samples_done_) *
               ((sys_ == System::kgw) ? interval_T_ / cfg_.epsilon : interval_T_);
    if (sys_ == System::kgw)
        rs_.time = t;
    else
        cs_.time = t;
}

ComplexState SystemRunner::comparable() const {
    if (sys_ == System::kgw) return gauge_to_T(to_complex(rs_), cfg_.epsilon);
    return cs_;
}

double SystemRunner::mass() const {
    switch (sys_) {
        case System::kgw: return kgw_->mass(rs_);
        case System::kgw_complex: return kgwc_->mass(cs_);
        case System::sw: return sw_->mass(cs_);
        case System::sp: return sp_->mass(cs_);
        case System::nf2: return nf2_->mass(cs_);
    }
    return 0;
}

double SystemRunner::hamiltonian() const {
    switch (sys_) {
        case System::kgw: return kgw_->hamiltonian(rs_);
        case System::kgw_complex:
            // the frame-T generator is explicitly time dependent; report the
            // conserved H_eps of the equivalent real form instead
            return kgw_energy(tb_, to_real_pair(ungauge_to_tau(cs_, cfg_.epsilon)), cfg_.epsilon,
                              cfg_.jeans);
        case System::sw: return sw_->hamiltonian(cs_);
        case System::sp: return sp_->hamiltonian(cs_);
        case System::nf2: return nf2_->hamiltonian(cs_);
    }
    return 0;
}

double SystemRunner::native_time() const { return sys_ == System::kgw ? rs_.time : cs_.time; }

// ----------------------------------------------------------------- pairing

PairResult run_pair(const SpectralToolbox& tb, const PairSpec& spec, const RealPairState& init) {
    if (spec.g1_transform && spec.a != System::kgw)
        throw ConfigError("g1 transform applies to the kgw side of a comparison");

    SolverConfig ca;
    ca.system = spec.a;
    ca.epsilon = spec.eps;
    ca.dt = spec.dt_a;
    ca.scheme = spec.scheme_a;
    ca.jeans = spec.jeans_a;
    SolverConfig cb;
    cb.system = spec.b;
    cb.epsilon = spec.eps;
    cb.dt = spec.dt_b;
    cb.scheme = spec.scheme_b;
    cb.jeans = spec.jeans_b;

    const double interval = spec.t_end / spec.samples;
    SystemRunner ra(spec.a, tb, ca, interval);
    SystemRunner rb(spec.b, tb, cb, interval);

    G1Flow g1(tb, spec.eps, 16, spec.jeans_a);
    RealPairState init_a = init;
    if (spec.g1_transform) {
        ComplexState x0 = to_complex(init);
        init_a = to_real_pair(g1.map(x0, +1));
        init_a.time = 0.0;
    }
    ra.init(init_a);
    rb.init(init);

    PairResult out;
    for (int k = 1; k <= spec.samples; ++k) {
        ra.advance_one_sample();
        rb.advance_one_sample();
        ComplexState sa;
        if (spec.g1_transform) {
            ComplexState native = to_complex(ra.real_state());
            ComplexState back = g1.map(native, -1);
            back.time = native.time;
            sa = gauge_to_T(back, spec.eps);
        } else {
            sa = ra.comparable();
        }
        ComplexState sb = rb.comparable();
        double err = state_error(sa, sb, tb, spec.norm);
        out.times.push_back(static_cast<double>(k) * interval);
        out.errors.push_back(err);
        out.sup_error = std::max(out.sup_error, err);
        out.final_error = err;
    }
    return out;
}

// --------------------------------------------------------------------- svg

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

void write_svg_loglog(const std::string& path, const std::string& title,
                      const std::vector<double>& eps, const std::vector<double>& errors,
                      double slope) {
    const double W = 640, H = 440, L = 80, B = 60;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        xmin = std::min(xmin, std::log10(eps[i]));
        xmax = std::max(xmax, std::log10(eps[i]));
        ymin = std::min(ymin, std::log10(errors[i]));
        ymax = std::max(ymax, std::log10(errors[i]));
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1;
    if (ymax - ymin < 1e-12) ymax = ymin + 1;
    auto X = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - 30); };
    auto Y = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - B - 40); };

    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
        << " (slope " << fmt_short(slope) << ")</text>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - 30 << "' y2='" << H - B
        << "' stroke='black'/>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << L << "' y2='40' stroke='black'/>\n";
    out << "<text x='" << W / 2 << "' y='" << H - 20
        << "' text-anchor='middle' font-size='12'>log10 epsilon</text>\n";
    out << "<text x='20' y='" << H / 2 << "' font-size='12' transform='rotate(-90 20 " << H / 2
        << ")'>log10 error</text>\n";
    out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < eps.size(); ++i)
        out << X(std::log10(eps[i])) << "," << Y(std::log10(errors[i])) << " ";
    out << "'/>\n";
    for (std::size_t i = 0; i < eps.size(); ++i) {
        out << "<circle cx='" << X(std::log10(eps[i])) << "' cy='" << Y(std::log10(errors[i]))
            << "' r='4' fill='crimson'/>\n";
        out << "<text x='" << X(std::log10(eps[i])) + 6 << "' y='" << Y(std::log10(errors[i])) - 6
            << "' font-size='10'>" << fmt_short(errors[i]) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_svg_trace(const std::string& path, const std::string& title,
                     const std::vector<double>& times, const std::vector<double>& values) {
    const double W = 640, H = 440, L = 80, B = 60;
    double xmin = times.front(), xmax = times.back();
    double ymin = 1e300, ymax = -1e300;
    for (double v : values) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    if (ymax - ymin < 1e-300) {
        ymax += 1;
        ymin -= 1;
    }
    auto X = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - 30); };
    auto Y = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - B - 40); };
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - 30 << "' y2='" << H - B
        << "' stroke='black'/>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << L << "' y2='40' stroke='black'/>\n";
    out << "<text x='" << W / 2 << "' y='" << H - 20
        << "' text-anchor='middle' font-size='12'>time</text>\n";
    out << "<text x='" << L << "' y='36' font-size='10'>" << fmt_short(ymax) << "</text>\n";
    out << "<text x='" << L << "' y='" << H - B + 14 << "' font-size='10'>" << fmt_short(ymin)
        << "</text>\n";
    out << "<polyline fill='none' stroke='steelblue' stroke-width='1' points='";
    for (std::size_t i = 0; i < times.size(); ++i) out << X(times[i]) << "," << Y(values[i]) << " ";
    out << "'/>\n";
    out << "</svg>\n";
}

// ---------------------------------------------------------- orchestration

namespace {

std::string eps_tag(double e) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", e);
    std::string s = buf;
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

struct SingleRunRecord {
    std::string system;
    double eps;
    std::string csv, snapshot, trace_svg;
    double mass_initial = 0, mass_final = 0, h_initial = 0, h_final = 0;
    long long steps = 0;
};

SingleRunRecord run_single(const ExperimentConfig& cfg, const SpectralToolbox& tb,
                           const RealPairState& init, System sys, double eps,
                           const std::string& outdir, const std::string& config_hash) {
    SolverConfig sc;
    sc.system = sys;
    sc.epsilon = eps;
    sc.dt = cfg.dt;
    sc.scheme = cfg.scheme == Scheme::strang ? default_scheme(sys) : cfg.scheme;
    sc.jeans = cfg.jeans;

    // sample interval = diagnostics period steps of the requested dt
    double dt_native = sc.dt > 0 ? sc.dt : default_dt(tb.grid(), eps);
    double native_span = (sys == System::kgw) ? cfg.t_end / eps : cfg.t_end;
    long long total_steps = std::max<long long>(
        1, static_cast<long long>(std::llround(std::ceil(native_span / dt_native))));
    long long n_samples = std::max<long long>(1, total_steps / cfg.diagnostics_period);

    SystemRunner runner(sys, tb, sc, cfg.t_end / static_cast<double>(n_samples));
    runner.init(init);

    SingleRunRecord rec;
    rec.system = system_name(sys);
    rec.eps = eps;
    rec.csv = outdir + "/" + system_name(sys) + "_eps" + eps_tag(eps) + ".csv";
    rec.mass_initial = runner.mass();
    rec.h_initial = runner.hamiltonian();

    std::ofstream csv(rec.csv);
    if (!csv) throw IoError("cannot write " + rec.csv);
    csv << "# nf diagnostics schema 1 config " << config_hash << "\n";
    csv << "step,time,mass,hamiltonian,error_vs_ref\n";
    csv << 0 << "," << fmt(runner.native_time()) << "," << fmt(rec.mass_initial) << ","
        << fmt(rec.h_initial) << ",\n";
    std::vector<double> times{runner.native_time()}, masses{rec.mass_initial},
        hams{rec.h_initial};
    for (long long k = 1; k <= n_samples; ++k) {
        runner.advance_one_sample();
        double m = runner.mass(), h = runner.hamiltonian();
        csv << runner.total_steps() << "," << fmt(runner.native_time()) << "," << fmt(m) << ","
            << fmt(h) << ",\n";
        times.push_back(runner.native_time());
        masses.push_back(m);
        hams.push_back(h);
    }
    rec.mass_final = masses.back();
    rec.h_final = hams.back();
    rec.steps = runner.total_steps();

    if (cfg.write_snapshots) {
        rec.snapshot = outdir + "/" + system_name(sys) + "_eps" + eps_tag(eps) + "_final.nfld1";
        if (sys == System::kgw)
            write_snapshot(rec.snapshot, snapshot_of(runner.real_state(), tb.grid(), eps));
        else
            write_snapshot(rec.snapshot, snapshot_of(runner.comparable(), tb.grid(), eps));
    }
    if (cfg.write_svg) {
        rec.trace_svg = outdir + "/trace_" + system_name(sys) + "_eps" + eps_tag(eps) + ".svg";
        std::vector<double> drift;
        drift.reserve(masses.size());
        for (double m : masses) drift.push_back(m - masses.front());
        write_svg_trace(rec.trace_svg, std::string("mass drift, ") + system_name(sys), times,
                        drift);
    }
    return rec;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::string& outdir,
                                 int workers) {
    auto t_start = std::chrono::steady_clock::now();
    fs::create_directories(outdir);
    SpectralToolbox tb(cfg.grid);
    RealPairState init = make_initial(cfg.initial, tb);

    ExperimentOutcome outcome;
    json manifest;
    manifest["schema_version"] = cfg.schema_version;
    manifest["config"] = json::parse(canonical_json(cfg));
    manifest["config_hash"] = sha256_hex(canonical_json(cfg));
    manifest["versions"] = {{"artifact", "1.0.0"},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                          std::to_string(EIGEN_MINOR_VERSION)}};

    if (cfg.compare) {
        System ref = system_from_name(cfg.compare->reference);
        struct Task {
            System sys;
            double eps;
        };
        std::vector<Task> tasks;
        for (System s : cfg.systems)
            for (double e : cfg.epsilons) tasks.push_back({s, e});
        std::vector<PairResult> results(tasks.size());
        std::vector<std::string> errors(tasks.size());

        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    PairSpec ps;
                    ps.a = tasks[i].sys;
                    ps.b = ref;
                    ps.eps = tasks[i].eps;
                    ps.norm = cfg.compare->norm;
                    ps.t_end = cfg.t_end;
                    ps.samples = 20;  // error sampled at 20 uniform times
                    ps.dt_a = cfg.dt;
                    ps.dt_b = cfg.dt;
                    ps.scheme_a = default_scheme(tasks[i].sys);
                    ps.scheme_b = default_scheme(ref);
                    ps.jeans_a = cfg.jeans;
                    ps.jeans_b = cfg.jeans;
                    ps.g1_transform = cfg.transform == "g1" && tasks[i].sys == System::kgw;
                    results[i] = run_pair(tb, ps, init);
                    std::string series = outdir + "/" + system_name(tasks[i].sys) + "_vs_" +
                                         cfg.compare->reference + "_eps" + eps_tag(tasks[i].eps) +
                                         "_series.csv";
                    std::ofstream sc(series);
                    sc << "# nf error-series schema 1 config "
                       << sha256_hex(canonical_json(cfg)) << "\n";
                    sc << "time,error\n";
                    for (std::size_t k = 0; k < results[i].times.size(); ++k)
                        sc << fmt(results[i].times[k]) << "," << fmt(results[i].errors[k])
                           << "\n";
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        int nw = std::max(1, workers);
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (!errors[i].empty())
                throw std::runtime_error("run " + std::string(system_name(tasks[i].sys)) +
                                         " eps=" + std::to_string(tasks[i].eps) + " failed: " +
                                         errors[i]);
        }

        json sweeps = json::array();
        for (System s : cfg.systems) {
            SweepOutcome sw;
            sw.system = system_name(s);
            sw.reference = cfg.compare->reference;
            std::string csv_path = outdir + "/sweep_" + sw.system + "_vs_" + sw.reference + ".csv";
            std::ofstream csv(csv_path);
            csv << "# nf sweep schema 1 config " << manifest["config_hash"].get<std::string>()
                << "\n";
            csv << "epsilon,error\n";
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (tasks[i].sys != s) continue;
                double err = cfg.compare->error_time == "sup" ? results[i].sup_error
                                                              : results[i].final_error;
                sw.eps.push_back(tasks[i].eps);
                sw.errors.push_back(err);
                csv << fmt(tasks[i].eps) << "," << fmt(err) << "\n";
            }
            if (sw.eps.size() >= 2) sw.slope = fit_loglog_slope(sw.eps, sw.errors);
            outcome.files.push_back(csv_path);
            if (cfg.write_svg && sw.eps.size() >= 2) {
                std::string svg = outdir + "/sweep_" + sw.system + "_vs_" + sw.reference + ".svg";
                write_svg_loglog(svg, sw.system + " vs " + sw.reference, sw.eps, sw.errors,
                                 sw.slope);
                outcome.files.push_back(svg);
            }
            json js;
            js["system"] = sw.system;
            js["reference"] = sw.reference;
            js["epsilons"] = sw.eps;
            js["errors"] = sw.errors;
            js["slope"] = sw.slope;
            sweeps.push_back(js);
            outcome.sweeps.push_back(std::move(sw));
        }
        manifest["sweeps"] = sweeps;
    } else {
        struct Task {
            System sys;
            double eps;
        };
        std::vector<Task> tasks;
        for (System s : cfg.systems)
            for (double e : cfg.epsilons) tasks.push_back({s, e});
        std::vector<SingleRunRecord> recs(tasks.size());
        std::vector<std::string> errors(tasks.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    recs[i] = run_single(cfg, tb, init, tasks[i].sys, tasks[i].eps, outdir,
                                         manifest["config_hash"].get<std::string>());
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        int nw = std::max(1, workers);
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        json runs = json::array();
        std::string first_error;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (!errors[i].empty()) {
                if (first_error.empty())
                    first_error = std::string(system_name(tasks[i].sys)) + ": " + errors[i];
                json jr;
                jr["system"] = system_name(tasks[i].sys);
                jr["epsilon"] = tasks[i].eps;
                jr["error"] = errors[i];
                runs.push_back(jr);
                continue;
            }
            const auto& r = recs[i];
            json jr;
            jr["system"] = r.system;
            jr["epsilon"] = r.eps;
            jr["csv"] = r.csv;
            jr["snapshot"] = r.snapshot;
            jr["steps"] = r.steps;
            jr["mass_initial"] = r.mass_initial;
            jr["mass_final"] = r.mass_final;
            jr["hamiltonian_initial"] = r.h_initial;
            jr["hamiltonian_final"] = r.h_final;
            runs.push_back(jr);
            outcome.files.push_back(r.csv);
            if (!r.snapshot.empty()) outcome.files.push_back(r.snapshot);
        }
        manifest["runs"] = runs;
        if (!first_error.empty()) {
            // preserve partial results, then propagate
            manifest["failed"] = first_error;
            std::ofstream mf(outdir + "/manifest.json");
            mf << manifest.dump(2) << "\n";
            throw std::runtime_error(first_error);
        }
    }

    auto t_end = std::chrono::steady_clock::now();
    manifest["walltime_s"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count() / 1000.0;
    outcome.manifest_path = outdir + "/manifest.json";
    std::ofstream mf(outcome.manifest_path);
    if (!mf) throw IoError("cannot write manifest");
    mf << manifest.dump(2) << "\n";
    outcome.files.push_back(outcome.manifest_path);
    return outcome;
}

}  // namespace nf
