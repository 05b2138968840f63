#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "qwdirac.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qwd_capi_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string take(char* p) {
    REQUIRE(p != nullptr);
    std::string s(p);
    qwd_free(p);
    return s;
}

} // namespace

TEST_CASE("version and error channel") {
    REQUIRE(qwd_version() != nullptr);
    CHECK(std::strlen(qwd_version()) >= 5);

    CHECK(qwd_config_parse("not a config") == nullptr);
    CHECK(std::strlen(qwd_last_error()) > 0);
    CHECK(qwd_config_load("/no/such/file.cfg") == nullptr);
    CHECK(std::string(qwd_last_error()).find("cannot open") != std::string::npos);
}

TEST_CASE("config handles: parse, get, set, validation") {
    qwd_config* cfg = qwd_config_parse("kind = classify\njet.n_steps = 1\n");
    REQUIRE(cfg != nullptr);

    CHECK(take(qwd_config_get(cfg, "kind")) == "classify");
    CHECK(take(qwd_config_get(cfg, "jet.n_steps")) == "1");
    CHECK(take(qwd_config_get(cfg, "seed")) == "1"); // default echoed
    CHECK(qwd_config_get(cfg, "no.such.key") == nullptr);

    CHECK(qwd_config_set(cfg, "seed", "7") == QWD_OK);
    CHECK(take(qwd_config_get(cfg, "seed")) == "7");

    // a rejected set leaves the configuration untouched
    CHECK(qwd_config_set(cfg, "jet.n_steps", "5") == QWD_E_CONFIG);
    CHECK(take(qwd_config_get(cfg, "jet.n_steps")) == "1");
    CHECK(qwd_config_set(cfg, "resolutions", "64") == QWD_E_CONFIG); // wrong kind

    char* report = nullptr;
    CHECK(qwd_run(cfg, &report) == QWD_OK);
    CHECK(take(report).find("family = S1") != std::string::npos);
    qwd_config_free(cfg);
}

TEST_CASE("qwd_run writes experiment outputs") {
    TempDir tmp;
    qwd_config* cfg = qwd_config_parse(
        "kind = geodesic\nT_final = 5\npacket.center = 50.5\n"
        "schwarzschild.r_g = 100\nschwarzschild.lambda = 1\n");
    REQUIRE(cfg != nullptr);
    REQUIRE(qwd_config_set(cfg, "output_dir", tmp.path.string().c_str()) == QWD_OK);

    char* report = nullptr;
    REQUIRE(qwd_run(cfg, &report) == QWD_OK);
    CHECK(take(report).find("branch = left") != std::string::npos);
    CHECK(fs::exists(tmp.path / "geodesic.csv"));
    CHECK(fs::exists(tmp.path / "metadata.txt"));
    qwd_config_free(cfg);
}

TEST_CASE("qwd_check runs the invariant battery") {
    char* report = nullptr;
    CHECK(qwd_check(1, &report) == QWD_OK);
    const std::string text = take(report);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
    CHECK(qwd_check(2, nullptr) == QWD_OK);
}

TEST_CASE("walk handle streams and conserves the norm") {
    CHECK(qwd_walk_create(7, 1.0) == nullptr); // odd site count rejected

    qwd_walk* w = qwd_walk_create(16, 16.0);
    REQUIRE(w != nullptr);
    CHECK(qwd_walk_size(w) == 16);

    // theta = 0, all phases 0: the L component streams one site left per step
    std::vector<double> state(4 * 16, 0.0);
    state[4 * 5] = 1.0; // L at site 5
    REQUIRE(qwd_walk_set_state(w, state.data(), state.size()) == QWD_OK);
    CHECK(qwd_walk_set_state(w, state.data(), 8) == QWD_E_CONFIG);

    REQUIRE(qwd_walk_step(w, 2) == QWD_OK);
    std::vector<double> out(4 * 16, 0.0);
    REQUIRE(qwd_walk_get_state(w, out.data(), out.size()) == QWD_OK);
    CHECK(out[4 * 3] == 1.0);
    CHECK(std::abs(qwd_walk_norm(w) - 1.0) < 1e-12); // dx = 1 here

    // a mixing coin keeps the norm
    REQUIRE(qwd_walk_set_uniform_angles(w, 0.7, 0.3, -0.2, 0.1) == QWD_OK);
    REQUIRE(qwd_walk_step(w, 25) == QWD_OK);
    CHECK(std::abs(qwd_walk_norm(w) - 1.0) < 1e-12);

    qwd_walk_free(w);
    qwd_walk_free(nullptr);
}
