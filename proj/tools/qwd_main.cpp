#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwdirac.h"

namespace {

struct RunOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int resolution = 0;
    bool seed_given = false;
    bool resolution_given = false;
};

void add_config_option(CLI::App* cmd, RunOptions& opt) {
    cmd->add_option("--config", opt.config_path, "configuration file (key = value)")
        ->required();
}

void add_override_options(CLI::App* cmd, RunOptions& opt, bool with_resolution) {
    cmd->add_option("--out", opt.out_dir, "override output_dir");
    cmd->add_option("--seed", opt.seed, "override the random seed")
        ->trigger_on_parse()
        ->each([&opt](const std::string&) { opt.seed_given = true; });
    if (with_resolution)
        cmd->add_option("--resolution", opt.resolution, "run a single lattice resolution")
            ->trigger_on_parse()
            ->each([&opt](const std::string&) { opt.resolution_given = true; });
}

int fail(int code) {
    std::fprintf(stderr, "error: %s\n", qwd_last_error());
    return code;
}

int run_subcommand(const RunOptions& opt, const std::vector<std::string>& kinds,
                   const char* subcommand) {
    qwd_config* cfg = qwd_config_load(opt.config_path.c_str());
    if (!cfg) return fail(QWD_E_CONFIG);

    int rc = QWD_OK;
    char* kind_value = qwd_config_get(cfg, "kind");
    const std::string kind = kind_value ? kind_value : "";
    qwd_free(kind_value);

    bool kind_ok = false;
    for (const auto& k : kinds) kind_ok = kind_ok || k == kind;
    if (!kind_ok) {
        std::string expected;
        for (const auto& k : kinds) {
            if (!expected.empty()) expected += " or ";
            expected += k;
        }
        std::fprintf(stderr, "error: config kind '%s' does not belong to '%s' (expected %s)\n",
                     kind.c_str(), subcommand, expected.c_str());
        qwd_config_free(cfg);
        return QWD_E_CONFIG;
    }

    if (!opt.out_dir.empty()) rc = qwd_config_set(cfg, "output_dir", opt.out_dir.c_str());
    if (rc == QWD_OK && opt.seed_given)
        rc = qwd_config_set(cfg, "seed", std::to_string(opt.seed).c_str());
    if (rc == QWD_OK && opt.resolution_given)
        rc = qwd_config_set(cfg, "resolutions", std::to_string(opt.resolution).c_str());
    if (rc != QWD_OK) {
        qwd_config_free(cfg);
        return fail(rc);
    }

    char* report = nullptr;
    rc = qwd_run(cfg, &report);
    if (report) {
        std::fputs(report, stdout);
        qwd_free(report);
    }
    qwd_config_free(cfg);
    return rc == QWD_OK ? 0 : fail(rc);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete-time quantum walk simulator and continuum-limit tools"};
    app.set_version_flag("--version", qwd_version());
    app.require_subcommand(1);

    RunOptions sim_opt, conv_opt, cls_opt, geo_opt;
    std::uint64_t check_seed = 1;

    CLI::App* simulate =
        app.add_subcommand("simulate", "run a density experiment (electric or Schwarzschild)");
    add_config_option(simulate, sim_opt);
    add_override_options(simulate, sim_opt, true);

    CLI::App* converge =
        app.add_subcommand("converge", "walk versus continuum solver convergence sweep");
    add_config_option(converge, conv_opt);
    add_override_options(converge, conv_opt, true);

    CLI::App* classify =
        app.add_subcommand("classify", "classify a coin-angle jet and print its coefficients");
    add_config_option(classify, cls_opt);

    CLI::App* geodesic =
        app.add_subcommand("geodesic", "integrate a null characteristic of the walk metric");
    add_config_option(geodesic, geo_opt);
    geodesic->add_option("--out", geo_opt.out_dir, "override output_dir");

    CLI::App* check = app.add_subcommand("check", "run the randomized invariant battery");
    check->add_option("--seed", check_seed, "seed for the random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return QWD_E_CONFIG;
    }

    if (simulate->parsed())
        return run_subcommand(sim_opt, {"electric_density", "schwarzschild"}, "simulate");
    if (converge->parsed())
        return run_subcommand(conv_opt, {"electric_convergence"}, "converge");
    if (classify->parsed()) return run_subcommand(cls_opt, {"classify"}, "classify");
    if (geodesic->parsed()) return run_subcommand(geo_opt, {"geodesic"}, "geodesic");
    if (check->parsed()) {
        char* report = nullptr;
        const int rc = qwd_check(check_seed, &report);
        if (report) {
            std::fputs(report, stdout);
            qwd_free(report);
        }
        return rc == QWD_OK ? 0 : fail(rc);
    }
    return QWD_E_CONFIG;
}
