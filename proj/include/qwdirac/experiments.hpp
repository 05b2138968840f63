#ifndef QWDIRAC_EXPERIMENTS_HPP
#define QWDIRAC_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwdirac/config.hpp"
#include "qwdirac/lattice.hpp"

namespace qwd {

const char* core_version();

// Least-squares line y = slope * x + intercept with the coefficient of
// determination. Needs at least two distinct x values.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Gaussian probability lump split evenly between the two components,
// N_0(x) proportional to exp(-(x - center)^2 / (2 sigma^2)) with total
// probability 1; psi^L = sqrt(N_0 / 2), psi^R = i sqrt(N_0 / 2).
SpinorField gaussian_density_state(const Lattice& lat, double sigma, double center);

// Walk angles and the matching flat Dirac parameters of an electric run.
// The mass is the S1 mass formula evaluated at the table's angles; it must
// come out real and component-independent or the table has no flat-solver
// counterpart and a ConfigError is raised.
struct FlatRunParams {
    JetSpec jet;
    double mass = 0.0;
    double efield = 0.0;
};

FlatRunParams extract_flat_params(const AngleTable& angles);

struct ConvergenceRow {
    int n = 0;
    double eps = 0.0;
    long long steps = 0;
    double T_actual = 0.0;
    double delta = 0.0; // relative L2 density mismatch at T_actual
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    std::optional<LinearFit> fit; // log delta vs log eps; absent for one row
    double mass = 0.0;
    double efield = 0.0;
};

ConvergenceResult run_electric_convergence(const ExperimentConfig& cfg);

struct DensityOutcome {
    double sigmaX = 0.0;
    // spectral weight of the final density row above mode 20, DC excluded
    double high_mode_fraction = 0.0;
    double norm_final = 0.0;
    std::optional<LinearFit> drift; // centroid vs T, free-drift runs only
    double drift_v_formula = 0.0;   // group velocity k0 / sqrt(k0^2 + m^2)
};

struct DensityResult {
    std::vector<DensityOutcome> outcomes;
    double mass = 0.0;
    double efield = 0.0;
    double T_actual = 0.0;
};

DensityResult run_electric_density(const ExperimentConfig& cfg);

struct RidgeReport {
    int n = 0;
    double dx = 0.0;
    double max_abs_err = 0.0; // ridge vs left geodesic over the tracked rows
    int tracked_rows = 0;
};

struct SchwarzschildResult {
    std::vector<RidgeReport> ridges;
    double T_sing_left = 0.0;  // left geodesic meets the singularity
    double T_sing_right = 0.0; // right geodesic, NaN if it survives the run
    double T_sep = 0.0;        // branch separation clears the search window
    double T_track_end = 0.0;  // 80 % of the left branch's infall time
};

SchwarzschildResult run_schwarzschild(const ExperimentConfig& cfg);

struct PropertyCheck {
    std::string name;
    int instances = 0;
    double worst = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;
    bool all_pass = false;
    std::string text;
};

// Randomized invariant battery: unitarity, norm conservation, the two-step
// stroboscope identity, Fourier versus physical translation, discrete gauge
// covariance, solver unitarity, spinor eigenpairs, metric identities, plus a
// deliberately corrupted coin that the checks must catch.
PropertyReport run_property_suite(std::uint64_t seed, int instances = 100);

std::string run_classify(const ExperimentConfig& cfg);
std::string run_geodesic(const ExperimentConfig& cfg);

// Dispatches on cfg.kind and returns the human-readable run report.
// ConfigError propagates; any other failure is a run error.
std::string run_experiment(const ExperimentConfig& cfg);

} // namespace qwd

#endif
