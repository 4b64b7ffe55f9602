#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nf/experiment.hpp"
#include "nf/stationary.hpp"
#include "nf/units.hpp"

using namespace nf;

TEST_CASE("unit conversion hits the quoted parameter window") {
    // m = 1e-57 g, total 1e12 solar masses: mu^2 of order 1e4..1e6
    PhysicalParams p = convert_units(1e-57, 1e12 * constants::solar_mass);
    CHECK(p.mu2 > 1e4);
    CHECK(p.mu2 < 1e6);
    int decade = static_cast<int>(std::floor(std::log10(p.mu2)));
    CHECK(decade >= 4);
    CHECK(decade <= 6);

    // N = 1 and m = m_P gives mu = 1 exactly
    double mp = planck_mass();
    PhysicalParams unity = convert_units(mp, mp);
    CHECK(unity.mu == doctest::Approx(1.0).epsilon(1e-14));

    // doubling N halves mu
    PhysicalParams a = convert_units(1e-57, 1.0e12 * constants::solar_mass);
    PhysicalParams b = convert_units(1e-57, 2.0e12 * constants::solar_mass);
    CHECK(a.mu / b.mu == doctest::Approx(2.0).epsilon(1e-14));

    // round trip m from (mu, N)
    CHECK(particle_mass_from(a.mu, a.N) == doctest::Approx(1e-57).epsilon(1e-12));

    CHECK_THROWS_AS(convert_units(-1, 1), std::domain_error);
}

TEST_CASE("snapshot round trips bit-exactly") {
    Grid g{1, 64, 10.0};
    SpectralToolbox tb(g);
    RealPairState s = gaussian_packet(tb, 1.0);
    s.pu = 0.25 * s.u;
    s.time = 1.75;
    std::string path = "/tmp/nf_test_snapshot.nfld1";
    write_snapshot(path, snapshot_of(s, g, 0.02));
    Snapshot r = read_snapshot(path);
    CHECK(r.grid.n == 64);
    CHECK(r.epsilon == 0.02);
    CHECK(r.frame == Frame::tau);
    RealPairState back = real_pair_from(r);
    CHECK((back.u - s.u).abs().maxCoeff() == 0.0);
    CHECK((back.pu - s.pu).abs().maxCoeff() == 0.0);
    CHECK(back.time == s.time);
    std::remove(path.c_str());
}

TEST_CASE("config validation rejects unknown keys and bad values") {
    std::string good = R"({
      "schema_version": 1,
      "systems": ["sw"],
      "grid": {"dim": 1, "n": 64, "length": 20.0},
      "epsilons": [0.01],
      "initial": {"type": "gaussian", "sigma": 1.0},
      "t_end": 0.01
    })";
    ExperimentConfig c = parse_config(good);
    CHECK(c.systems.size() == 1);
    CHECK(c.grid.n == 64);

    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1})"), ConfigError);
    std::string unknown = R"({
      "schema_version": 1, "systems": ["sw"],
      "grid": {"dim": 1, "n": 64, "length": 20.0},
      "epsilons": [0.01], "initial": {"type": "gaussian"},
      "t_end": 1.0, "bogus_key": 2
    })";
    CHECK_THROWS_AS(parse_config(unknown), ConfigError);
    std::string empty_systems = R"({
      "schema_version": 1, "systems": [],
      "grid": {"dim": 1, "n": 64, "length": 20.0},
      "epsilons": [0.01], "initial": {"type": "gaussian"}, "t_end": 1.0
    })";
    CHECK_THROWS_AS(parse_config(empty_systems), ConfigError);
    std::string bad_grid = R"({
      "schema_version": 1, "systems": ["sw"],
      "grid": {"dim": 1, "n": 100, "length": 20.0},
      "epsilons": [0.01], "initial": {"type": "gaussian"}, "t_end": 1.0
    })";
    CHECK_THROWS_AS(parse_config(bad_grid), ConfigError);
}

TEST_CASE("sha256 matches a known vector") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("experiment runs are deterministic byte for byte") {
    std::string cfg_text = R"({
      "schema_version": 1,
      "systems": ["sw"],
      "grid": {"dim": 1, "n": 64, "length": 20.0},
      "epsilons": [0.02],
      "initial": {"type": "gaussian", "sigma": 1.0},
      "dt": 1e-3,
      "t_end": 0.05,
      "diagnostics_period": 10,
      "jeans": true,
      "output": {"snapshots": false, "svg": false}
    })";
    ExperimentConfig cfg = parse_config(cfg_text);
    auto read_file = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    run_experiment(cfg, "/tmp/nf_exp_a", 1);
    run_experiment(cfg, "/tmp/nf_exp_b", 2);
    std::string a = read_file("/tmp/nf_exp_a/sw_eps0p02.csv");
    std::string b = read_file("/tmp/nf_exp_b/sw_eps0p02.csv");
    CHECK(a.size() > 100);
    CHECK(a == b);
    std::filesystem::remove_all("/tmp/nf_exp_a");
    std::filesystem::remove_all("/tmp/nf_exp_b");
}

TEST_CASE("lockstep comparison of a system with itself is zero") {
    Grid g{1, 64, 20.0};
    SpectralToolbox tb(g);
    RealPairState init = gaussian_packet(tb, 1.0);
    PairSpec ps;
    ps.a = System::sw;
    ps.b = System::sw;
    ps.eps = 0.02;
    ps.t_end = 0.05;
    ps.samples = 5;
    ps.jeans_a = ps.jeans_b = true;
    PairResult r = run_pair(tb, ps, init);
    CHECK(r.sup_error == 0.0);

    // kgw vs sw error is finite and small at small eps
    ps.a = System::kgw;
    ps.scheme_a = Scheme::strang;
    PairResult r2 = run_pair(tb, ps, init);
    CHECK(r2.final_error > 0.0);
    CHECK(r2.final_error < 1.0);
}

TEST_CASE("error paths carry typed exceptions") {
    CHECK_THROWS_AS(existence_gate(1.0, {}), PreconditionError);
    CHECK_THROWS_AS(read_snapshot("/tmp/nf_does_not_exist.nfld1"), IoError);

    // corrupted snapshot: valid header, truncated payload
    {
        std::ofstream out("/tmp/nf_trunc.nfld1", std::ios::binary);
        out << "NFLD1 1\ndim 1\nshape 64\nlength 10\nfields u pu phi pphi\n"
               "time 0\nframe tau\ngauged 0\nepsilon 0.01\nend\n";
        double x = 1.0;
        out.write(reinterpret_cast<const char*>(&x), sizeof(x));
    }
    CHECK_THROWS_AS(read_snapshot("/tmp/nf_trunc.nfld1"), IoError);
    std::remove("/tmp/nf_trunc.nfld1");

    // solver failure reports the step index
    Grid g{1, 64, 4.0};
    SpectralToolbox tb(g);
    SolverConfig c;
    c.system = System::nf2;
    c.epsilon = 0.5;
    c.dt = 0.5;  // far beyond the biharmonic stability limit
    c.scheme = Scheme::rk4;
    Nf2Stepper nf2(tb, c);
    ComplexState s = gauge_to_T(to_complex(gaussian_packet(tb, 0.4)), c.epsilon);
    CHECK_THROWS_AS(nf2.run(s, 10000), SolverError);
}

TEST_CASE("sp_ground initial condition is normalized and stationary-ready") {
    Grid g{1, 64, 12.566370614359172};
    SpectralToolbox tb(g);
    InitialSpec spec;
    spec.kind = InitialSpec::Kind::sp_ground;
    spec.norm = 1.0;
    RealPairState s = make_initial(spec, tb);
    CHECK(tb.integrate(0.5 * (s.u * s.u + s.pu * s.pu)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.pu.abs().maxCoeff() == 0.0);
    CHECK(s.pphi.abs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(fit_loglog_slope({0.1, 0.2}, {0.0, 1.0}), std::domain_error);
}
