#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qwdirac/config.hpp"

using namespace qwd;

namespace {

const double PI = std::numbers::pi;

ExperimentConfig from_text(const std::string& text) {
    return make_config(parse_key_values(text));
}

const std::string kConvergenceText =
    "kind = electric_convergence\n"
    "resolutions = 256,512,1024\n"
    "T_final = 10\n"
    "lattice.length = 6.283185307179586\n"
    "packet.sigmaX = 0.15\n"
    "angles.theta = 0.24\n"
    "angles.xi_T = 1.1\n"
    "angles.zeta = 1.5707963267948966\n";

} // namespace

TEST_CASE("parse_key_values: comments, spacing, duplicates") {
    const auto kv = parse_key_values(
        "# leading comment\n"
        "kind = classify   # trailing comment\n"
        "\n"
        "jet.n_steps=2\n"
        "  samples.T =  0, 0.5 \n");
    REQUIRE(kv.size() == 3);
    CHECK(kv[0].first == "kind");
    CHECK(kv[0].second == "classify");
    CHECK(kv[1].second == "2");
    CHECK(kv[2].second == "0, 0.5");

    CHECK_THROWS_AS(parse_key_values("no equals sign here\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("= value\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("a = 1\na = 2\n"), ConfigError);
}

TEST_CASE("set_key replaces or appends") {
    KeyValues kv = parse_key_values("a = 1\nb = 2\n");
    set_key(kv, "a", "3");
    set_key(kv, "c", "4");
    REQUIRE(kv.size() == 3);
    CHECK(kv[0].second == "3");
    CHECK(kv[2].first == "c");
}

TEST_CASE("electric_convergence config parses and echoes") {
    const ExperimentConfig cfg = from_text(kConvergenceText);
    CHECK(cfg.kind == ExperimentKind::ElectricConvergence);
    REQUIRE(cfg.resolutions == std::vector<int>{256, 512, 1024});
    CHECK(cfg.T_final == 10.0);
    CHECK(cfg.packet.sigmaX == 0.15);
    CHECK(cfg.angles.theta == 0.24);
    CHECK(cfg.angles.xi_T == 1.1);
    CHECK(cfg.angles.zeta == doctest::Approx(PI / 2).epsilon(1e-15));
    CHECK(cfg.angles.alpha == 0.0);
    CHECK(!cfg.packet.center.has_value());

    // serialize -> reparse is a fixed point
    const ExperimentConfig again = from_text(serialize_config(cfg));
    CHECK(serialize_config(again) == serialize_config(cfg));
}

TEST_CASE("config validation failures name the offending key") {
    // unknown key for the kind
    CHECK_THROWS_WITH_AS(from_text(kConvergenceText + "schwarzschild.r_g = 1\n"),
                         doctest::Contains("schwarzschild.r_g"), ConfigError);
    CHECK_THROWS_WITH_AS(from_text("kind = geodesic\nT_final = 1\npacket.center = 0.3\n"
                                   "schwarzschild.r_g = 1\nschwarzschild.lambda = 1\n"
                                   "angles.theta = 0.2\n"),
                         doctest::Contains("angles.theta"), ConfigError);

    CHECK_THROWS_AS(from_text("kind = mystery\n"), ConfigError);
    CHECK_THROWS_AS(from_text("T_final = 1\n"), ConfigError); // no kind

    // resolutions: duplicates, order, minimum, parity
    auto conv = [](const std::string& res) {
        return "kind = electric_convergence\nT_final = 1\nresolutions = " + res + "\n";
    };
    CHECK_THROWS_WITH_AS(from_text(conv("64,64")), doctest::Contains("duplicate resolution"),
                         ConfigError);
    CHECK_THROWS_AS(from_text(conv("128,64")), ConfigError);
    CHECK_THROWS_AS(from_text(conv("4")), ConfigError);
    CHECK_THROWS_AS(from_text(conv("63")), ConfigError);
    CHECK_THROWS_AS(from_text(conv("")), ConfigError);

    CHECK_THROWS_AS(from_text("kind = electric_convergence\nresolutions = 64\nT_final = 0\n"),
                    ConfigError);
    CHECK_THROWS_AS(from_text("kind = electric_convergence\nresolutions = 64\nT_final = 1\n"
                              "packet.sigmaX = -0.1\n"),
                    ConfigError);
    CHECK_THROWS_AS(from_text(kConvergenceText + "output.time_samples = 1\n"), ConfigError);
    CHECK_THROWS_AS(from_text(kConvergenceText + "seed = -3\n"), ConfigError);
}

TEST_CASE("electric_density config") {
    const std::string base =
        "kind = electric_density\n"
        "resolutions = 512\n"
        "T_final = 30\n"
        "lattice.length = 0.5\n"
        "packet.sigmaX_list = 0.005, 0.01, 0.03, 0.08\n";
    const ExperimentConfig cfg = from_text(base);
    REQUIRE(cfg.sigma_list == std::vector<double>{0.005, 0.01, 0.03, 0.08});

    // defaults to the single packet width when the list is absent
    const ExperimentConfig single = from_text(
        "kind = electric_density\nresolutions = 512\nT_final = 30\npacket.sigmaX = 0.02\n");
    REQUIRE(single.sigma_list == std::vector<double>{0.02});

    CHECK_THROWS_AS(from_text("kind = electric_density\nresolutions = 256,512\nT_final = 30\n"),
                    ConfigError);
    CHECK_THROWS_AS(from_text(base + "packet.sigmaX = 0\n"), ConfigError);
}

TEST_CASE("schwarzschild config keeps the packet inside the domain") {
    const std::string base =
        "kind = schwarzschild\n"
        "resolutions = 200,800\n"
        "T_final = 40\n"
        "lattice.length = 128\n"
        "packet.sigmaX = 0.5\n"
        "schwarzschild.r_g = 100\n"
        "schwarzschild.lambda = 1\n";
    const ExperimentConfig cfg = from_text(base + "packet.center = 50.5\n");
    REQUIRE(cfg.schwarzschild.has_value());
    CHECK(cfg.schwarzschild->r_g == 100.0);
    CHECK(in_domain(0.0, *cfg.packet.center, *cfg.schwarzschild));

    // domain edge at T = 0 is 2*r_g/3 = 66.67; beyond it the walk angle is undefined
    CHECK_THROWS_WITH_AS(from_text(base + "packet.center = 90\n"),
                         doctest::Contains("outside the walk domain"), ConfigError);
    CHECK_THROWS_AS(from_text(base + "packet.center = 130\n"), ConfigError);
    CHECK_THROWS_AS(from_text(base + "schwarzschild.lambda = 0\n"), ConfigError);
}

TEST_CASE("classify config builds the jet and the sample grid") {
    const ExperimentConfig cfg = from_text(
        "kind = classify\n"
        "jet.n_steps = 2\n"
        "jet.theta0 = wavy\n"
        "jet.xi0 = 1.5707963267948966\n"
        "jet.alpha0 = 1.5707963267948966\n"
        "samples.T = 0, 0.5\n"
        "samples.X = 0.3\n");
    const JetSpec jet = build_jet(cfg);
    CHECK(jet.n_steps == 2);
    CHECK(jet.theta0(0.0, PI / 2) == doctest::Approx(0.65).epsilon(1e-15));
    CHECK(jet.theta0.dX(0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(jet.xi0(3.0, -1.0) == doctest::Approx(PI / 2).epsilon(1e-15));

    const auto pts = jet_samples(cfg);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].T == 0.0);
    CHECK(pts[1].T == 0.5);
    CHECK(pts[0].X == 0.3);

    // default samples exist
    const ExperimentConfig dflt = from_text("kind = classify\njet.n_steps = 1\n");
    CHECK(jet_samples(dflt).size() == 9);

    CHECK_THROWS_AS(from_text("kind = classify\n"), ConfigError);      // n_steps required
    CHECK_THROWS_AS(from_text("kind = classify\njet.n_steps = 3\n"), ConfigError);
    // schwarzschild law needs geometry parameters and only applies to theta0
    CHECK_THROWS_AS(from_text("kind = classify\njet.n_steps = 2\njet.theta0 = schwarzschild\n"),
                    ConfigError);
    CHECK_THROWS_AS(from_text("kind = classify\njet.n_steps = 2\njet.xi0 = schwarzschild\n"
                              "schwarzschild.r_g = 1\nschwarzschild.lambda = 1\n"),
                    ConfigError);

    const ExperimentConfig schw = from_text(
        "kind = classify\njet.n_steps = 2\njet.theta0 = schwarzschild\n"
        "jet.xi0 = 1.5707963267948966\njet.zeta0 = 1.5707963267948966\n"
        "jet.alpha0 = 1.5707963267948966\n"
        "schwarzschild.r_g = 100\nschwarzschild.lambda = 1\n"
        "samples.T = 0\nsamples.X = 30,60\n");
    const JetSpec sj = build_jet(schw);
    CHECK(sj.theta0(0.0, 30.0) ==
          doctest::Approx(walk_theta(0.0, 30.0, *schw.schwarzschild)).epsilon(1e-15));
}

TEST_CASE("geodesic config") {
    const ExperimentConfig cfg = from_text(
        "kind = geodesic\n"
        "T_final = 50\n"
        "packet.center = 50.5\n"
        "geodesic.branch = 1\n"
        "schwarzschild.r_g = 100\n"
        "schwarzschild.lambda = 1\n");
    CHECK(cfg.geo_branch == 1);
    CHECK(cfg.geo_dt == 0.05);
    CHECK(*cfg.packet.center == 50.5);

    CHECK_THROWS_AS(from_text("kind = geodesic\nT_final = 50\n"
                              "schwarzschild.r_g = 100\nschwarzschild.lambda = 1\n"),
                    ConfigError); // center required
    CHECK_THROWS_AS(from_text("kind = geodesic\nT_final = 50\npacket.center = 1\n"
                              "schwarzschild.r_g = 100\nschwarzschild.lambda = 1\n"
                              "geodesic.branch = 2\n"),
                    ConfigError);
}
