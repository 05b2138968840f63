#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "doctest.h"
#include "qwdirac/csvio.hpp"
#include "qwdirac/experiments.hpp"

using namespace qwd;
namespace fs = std::filesystem;

namespace {

const double PI = std::numbers::pi;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qwd_exp_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string dir(const std::string& sub = "") const {
        return sub.empty() ? path.string() : (path / sub).string();
    }
};

ExperimentConfig from_text(const std::string& text) {
    return make_config(parse_key_values(text));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

const std::string kElectricAngles =
    "packet.sigmaX = 0.5\n"
    "angles.theta = 0.24\n"
    "angles.xi_T = 1.1\n"
    "angles.zeta = 1.5707963267948966\n";

} // namespace

TEST_CASE("fit_line recovers an exact line") {
    const LinearFit fit = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(fit_line({1.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_line({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("gaussian_density_state is normalized and split evenly") {
    const Lattice lat(128, 32.0);
    const SpinorField psi = gaussian_density_state(lat, 1.2, 10.0);
    CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-13));
    const auto N = psi.density();
    int peak = 0;
    for (int m = 1; m < lat.n; ++m)
        if (N[m] > N[peak]) peak = m;
    CHECK(lat.x(peak) == doctest::Approx(10.0).epsilon(0.05));
    for (int m = 0; m < lat.n; m += 17) {
        CHECK(std::norm(psi.L[m]) == doctest::Approx(std::norm(psi.R[m])).epsilon(1e-12));
        CHECK(psi.R[m].real() == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("extract_flat_params matches the mass formula") {
    AngleTable table;
    table.theta = 0.24;
    table.xi_T = 1.1;
    table.zeta = PI / 2;
    const FlatRunParams fp = extract_flat_params(table);
    CHECK(fp.mass == doctest::Approx(-0.24).epsilon(1e-12));
    CHECK(fp.efield == 1.1);

    // zeta away from pi/2 mod pi leaves the two components with different
    // complex masses, which the flat solver cannot represent
    table.zeta = 0.3;
    CHECK_THROWS_AS(extract_flat_params(table), ConfigError);
}

TEST_CASE("electric convergence: error shrinks and the files land") {
    TempDir tmp;
    ExperimentConfig cfg = from_text(
        "kind = electric_convergence\n"
        "resolutions = 64,128,256\n"
        "T_final = 2\n" +
        kElectricAngles);
    cfg.output_dir = tmp.dir();

    const ConvergenceResult r = run_electric_convergence(cfg);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.mass == doctest::Approx(-0.24).epsilon(1e-12));
    CHECK(r.rows[0].delta > r.rows[1].delta);
    CHECK(r.rows[1].delta > r.rows[2].delta);
    REQUIRE(r.fit.has_value());
    CHECK(r.fit->slope > 0.5);
    CHECK(r.fit->slope < 1.5);

    const CsvTable table = read_csv(tmp.dir("convergence.csv"));
    REQUIRE(table.rows.size() == 3);
    CHECK(table.header.front() == "n");
    CHECK(table.rows[2][0] == 256.0);
    const std::string meta = read_file(tmp.dir("metadata.txt"));
    CHECK(meta.find("derived.mass = -0.24") != std::string::npos);
    CHECK(meta.find("derived.slope = ") != std::string::npos);
    CHECK(meta.find("code.version = ") != std::string::npos);

    // a single resolution yields a row but no slope
    ExperimentConfig one = from_text(
        "kind = electric_convergence\nresolutions = 64\nT_final = 1\n" + kElectricAngles);
    one.output_dir = tmp.dir("single");
    CHECK(!run_electric_convergence(one).fit.has_value());

    // under-resolved packet names the resolution
    ExperimentConfig bad = from_text(
        "kind = electric_convergence\nresolutions = 64\nT_final = 1\n"
        "packet.sigmaX = 0.15\nangles.theta = 0.24\n"
        "angles.zeta = 1.5707963267948966\n");
    bad.output_dir = tmp.dir("bad");
    CHECK_THROWS_WITH_AS(run_electric_convergence(bad), doctest::Contains("n = 64"),
                         ConfigError);
}

TEST_CASE("free drift moves at the group velocity") {
    TempDir tmp;
    ExperimentConfig cfg = from_text(
        "kind = electric_density\n"
        "resolutions = 1024\n"
        "T_final = 20\n"
        "lattice.length = 40\n"
        "output.time_samples = 40\n"
        "packet.sigmaX = 2\n"
        "packet.center = 10\n"
        "packet.k0 = 0.9424777960769379\n"
        "angles.theta = 0.24\n"
        "angles.zeta = 1.5707963267948966\n");
    cfg.output_dir = tmp.dir();

    const DensityResult r = run_electric_density(cfg);
    REQUIRE(r.outcomes.size() == 1);
    const DensityOutcome& oc = r.outcomes.front();
    CHECK(oc.norm_final == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(oc.drift.has_value());
    CHECK(oc.drift->r2 > 0.999);
    CHECK(std::abs(oc.drift->slope - oc.drift_v_formula) < 0.05);

    const CsvTable summary = read_csv(tmp.dir("density_summary.csv"));
    REQUIRE(summary.rows.size() == 1);
    CHECK(summary.header[3] == "drift_slope");
    CHECK(summary.rows[0][3] == oc.drift->slope);
}

TEST_CASE("density maps round-trip with the norm intact") {
    TempDir tmp;
    ExperimentConfig cfg = from_text(
        "kind = electric_density\n"
        "resolutions = 128\n"
        "T_final = 3\n"
        "output.time_samples = 12\n" +
        kElectricAngles);
    cfg.output_dir = tmp.dir();
    run_electric_density(cfg);

    const CsvTable map = read_csv(tmp.dir("density_sigma_0p5.csv"));
    REQUIRE(map.header.size() == 129);
    REQUIRE(map.rows.size() == 12);
    const double dx = 2.0 * PI / 128;
    for (const auto& row : map.rows) {
        double total = 0.0;
        for (std::size_t c = 1; c < row.size(); ++c) total += row[c];
        CHECK(total * dx == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(map.rows.front()[0] == 0.0);
    CHECK(map.rows.back()[0] == doctest::Approx(3.0).epsilon(0.05));
}

// The electric angle table is spatially uniform, so every Fourier mode of the
// field evolves on its own and the density spectrum (the autocorrelation of
// the field spectrum) keeps its initial support. High spatial modes therefore
// belong to narrow packets; a wide packet can never grow them, no matter how
// long it runs.
TEST_CASE("high mode weight falls as the packet widens") {
    TempDir tmp;
    ExperimentConfig cfg = from_text(
        "kind = electric_density\n"
        "resolutions = 512\n"
        "lattice.length = 0.5\n"
        "T_final = 3\n"
        "output.time_samples = 4\n"
        "packet.sigmaX_list = 0.005, 0.08\n" +
        kElectricAngles);
    cfg.output_dir = tmp.dir();
    const DensityResult res = run_electric_density(cfg);

    REQUIRE(res.outcomes.size() == 2);
    const double narrow = res.outcomes[0].high_mode_fraction;
    const double wide = res.outcomes[1].high_mode_fraction;
    CHECK(narrow > 1e-4);
    CHECK(wide < 1e-18);
}

TEST_CASE("runs are byte reproducible") {
    TempDir tmp;
    const std::string text =
        "kind = electric_density\n"
        "resolutions = 64\n"
        "T_final = 1\n"
        "output.time_samples = 8\n" +
        kElectricAngles;
    ExperimentConfig a = from_text(text);
    a.output_dir = tmp.dir("a");
    ExperimentConfig b = from_text(text);
    b.output_dir = tmp.dir("b");
    run_electric_density(a);
    run_electric_density(b);
    CHECK(read_file(tmp.dir("a") + "/density_sigma_0p5.csv") ==
          read_file(tmp.dir("b") + "/density_sigma_0p5.csv"));
    CHECK(read_file(tmp.dir("a") + "/density_summary.csv") ==
          read_file(tmp.dir("b") + "/density_summary.csv"));
}

TEST_CASE("schwarzschild run: overlays, ridges, conserved norm") {
    TempDir tmp;
    ExperimentConfig cfg = from_text(
        "kind = schwarzschild\n"
        "resolutions = 128,256\n"
        "T_final = 20\n"
        "lattice.length = 128\n"
        "output.time_samples = 24\n"
        "packet.sigmaX = 0.5\n"
        "packet.center = 50.5\n"
        "schwarzschild.r_g = 100\n"
        "schwarzschild.lambda = 1\n");
    cfg.output_dir = tmp.dir();

    const SchwarzschildResult r = run_schwarzschild(cfg);
    CHECK(r.T_sing_left == doctest::Approx(30.4).epsilon(0.02));
    CHECK(r.T_track_end == doctest::Approx(0.8 * r.T_sing_left).epsilon(1e-12));
    CHECK(r.T_sep > 0.0);
    CHECK(r.T_sep < 10.0);
    REQUIRE(r.ridges.size() == 2);
    CHECK(r.ridges[0].tracked_rows > 5);
    CHECK(r.ridges[1].max_abs_err < r.ridges[0].max_abs_err);
    CHECK(r.ridges[1].max_abs_err < 1.0);

    const double dx = 128.0 / 256;
    const CsvTable map = read_csv(tmp.dir("density_n256.csv"));
    for (const auto& row : map.rows) {
        double total = 0.0;
        for (std::size_t c = 1; c < row.size(); ++c) total += row[c];
        CHECK(total * dx == doctest::Approx(1.0).epsilon(1e-10));
    }

    const CsvTable overlay = read_csv(tmp.dir("overlay_n256.csv"));
    REQUIRE(overlay.header.size() == 7);
    CHECK(overlay.header[6] == "prob_outside_domain");
    // nothing escapes the domain this early in the infall
    for (const auto& row : overlay.rows) CHECK(row[6] < 1e-8);
    // geodesics bracket: left below launch point, right above, singularity below left
    const auto& last = overlay.rows.back();
    CHECK(last[1] < last[4]);
    CHECK(last[4] < 50.5);
    CHECK(last[5] > 50.5);

    const CsvTable ridge = read_csv(tmp.dir("ridge_n256.csv"));
    REQUIRE(ridge.rows.size() == static_cast<std::size_t>(r.ridges[1].tracked_rows));
    for (const auto& row : ridge.rows) {
        CHECK(row[0] >= r.T_sep);
        CHECK(row[0] <= r.T_track_end);
        CHECK(row[3] == doctest::Approx(std::abs(row[1] - row[2])).epsilon(1e-12));
    }
}

TEST_CASE("property suite passes across seeds and keeps its canary") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        const PropertyReport r = run_property_suite(seed, 100);
        CHECK(r.all_pass);
        CHECK(r.checks.size() >= 9);
        CHECK(r.text.find("canary") != std::string::npos);
        CHECK(r.text.find("FAIL") == std::string::npos);
    }
}

TEST_CASE("classification examples land in their families") {
    auto family_of = [](const std::string& text) {
        const std::string report = run_classify(from_text(text));
        const auto eol = report.find('\n');
        return report.substr(9, eol - 9); // after "family = "
    };

    CHECK(family_of("kind = classify\njet.n_steps = 1\n") == "S1");
    CHECK(family_of("kind = classify\njet.n_steps = 2\njet.theta0 = wavy\n"
                    "jet.xi0 = 1.5707963267948966\njet.alpha0 = 1.5707963267948966\n") ==
          "Case1");
    CHECK(family_of("kind = classify\njet.n_steps = 2\njet.theta0 = 1.5707963267948966\n"
                    "jet.xi0 = wavy\njet.alpha0 = 1.5707963267948966\n") == "Case2_1");
    CHECK(family_of("kind = classify\njet.n_steps = 2\n") == "Case2_2");
    CHECK(family_of("kind = classify\njet.n_steps = 2\njet.xi0 = 1.5707963267948966\n"
                    "jet.alpha0 = 1.5707963267948966\n") == "Overlap_1_and_2");

    const std::string overlap = run_classify(
        from_text("kind = classify\njet.n_steps = 2\njet.xi0 = 1.5707963267948966\n"
                  "jet.alpha0 = 1.5707963267948966\n"));
    CHECK(overlap.find("also admissible as case 1") != std::string::npos);

    const std::string s1 = run_classify(
        from_text("kind = classify\njet.n_steps = 1\njet.theta_bar = 0.24\n"
                  "jet.zeta0 = 1.5707963267948966\nsamples.T = 0\nsamples.X = 0\n"));
    CHECK(s1.find("mass_minus(0, 0) = -0.24") != std::string::npos);
}

TEST_CASE("geodesic runner writes a falling path") {
    TempDir tmp;
    ExperimentConfig cfg = from_text(
        "kind = geodesic\n"
        "T_final = 50\n"
        "packet.center = 50.5\n"
        "schwarzschild.r_g = 100\n"
        "schwarzschild.lambda = 1\n");
    cfg.output_dir = tmp.dir();

    const std::string report = run_geodesic(cfg);
    CHECK(report.find("branch = left") != std::string::npos);
    CHECK(report.find("hit_boundary = 1") != std::string::npos);

    const CsvTable path = read_csv(tmp.dir("geodesic.csv"));
    REQUIRE(path.rows.size() > 100);
    CHECK(path.rows.front()[1] == 50.5);
    for (std::size_t i = 1; i < path.rows.size(); ++i) {
        CHECK(path.rows[i][1] < path.rows[i - 1][1]); // X falls
        CHECK(path.rows[i][2] < path.rows[i - 1][2]); // r falls
        if (i + 1 < path.rows.size()) CHECK(path.rows[i][3] == 1.0); // in the domain
    }
    // ends on the singularity X = lambda T; r has a two-thirds-power cusp
    // there, so the residual radius is far larger than the coordinate gap
    CHECK(std::abs(path.rows.back()[1] - path.rows.back()[0]) < 1e-3);
    CHECK(path.rows.back()[2] < 0.05);
}

TEST_CASE("run_experiment dispatches on kind") {
    TempDir tmp;
    ExperimentConfig cfg = from_text("kind = classify\njet.n_steps = 1\n");
    CHECK(run_experiment(cfg).find("family = S1") != std::string::npos);

    ExperimentConfig geo = from_text(
        "kind = geodesic\nT_final = 5\npacket.center = 50.5\ngeodesic.branch = 1\n"
        "schwarzschild.r_g = 100\nschwarzschild.lambda = 1\n");
    geo.output_dir = tmp.dir();
    CHECK(run_experiment(geo).find("branch = right") != std::string::npos);
}
