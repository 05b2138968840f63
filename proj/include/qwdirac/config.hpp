#ifndef QWDIRAC_CONFIG_HPP
#define QWDIRAC_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qwdirac/jet.hpp"
#include "qwdirac/schwarzschild.hpp"

namespace qwd {

// Unparsable or semantically invalid experiment configuration. The CLI maps
// this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    ElectricConvergence,
    ElectricDensity,
    Schwarzschild,
    Classify,
    Geodesic,
};

const char* kind_name(ExperimentKind k);

struct PacketConfig {
    double sigmaX = 0.1;
    std::optional<double> center; // window midpoint when absent
    double k0 = 0.0;
};

// Angle laws of the electric experiments, given as rates per unit time: the
// per-step coin angles at spacing eps are theta*eps, (xi_T*T)*eps, while zeta
// and alpha0 = 0 stay fixed. In jet language these are the first-order fields
// theta_bar = theta, xi_bar = xi_T * T, alpha_bar = alpha, with zeta carried
// at zeroth order. The electric field is E = xi_T and the solver mass is the
// signed value of the S1 mass formula at these angles.
struct AngleTable {
    double theta = 0.0;
    double xi_T = 0.0;
    double zeta = 0.0;
    double alpha = 0.0;
};

// Zeroth-order angle law for classify jets: a constant, the built-in test
// function wavy(T, X) = 0.4 + 0.25 sin(X) cos(T), or the Schwarzschild walk
// angle (theta0 only, needs the schwarzschild section).
struct AngleLaw {
    enum class Form { Constant, Wavy, Schwarzschild };
    Form form = Form::Constant;
    double value = 0.0;
};

struct JetConfig {
    int n_steps = 1;
    AngleLaw theta0, xi0, zeta0, alpha0;
    double theta_bar = 0.0;
    double xi_bar = 0.0;
    double alpha_bar = 0.0;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Classify;
    std::string output_dir = "out";
    std::uint64_t seed = 1;

    std::vector<int> resolutions;
    double T_final = 0.0;
    double length = 6.283185307179586;
    int time_samples = 200;

    PacketConfig packet;
    AngleTable angles;
    std::vector<double> sigma_list; // electric_density maps, one per entry

    std::optional<SchwarzschildConfig> schwarzschild;

    JetConfig jet;                        // classify
    std::vector<double> sample_T, sample_X; // classify sample grid (cross product)

    int geo_branch = -1;   // geodesic: -1 left, +1 right
    double geo_dt = 0.05;  // geodesic sample cadence
};

// Ordered key=value pairs; duplicates are rejected at parse time and
// replaced by set_key.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Parses the flat key = value format: one pair per line, '#' starts a
// comment, blank lines are skipped. Throws ConfigError on malformed lines or
// duplicate keys.
KeyValues parse_key_values(const std::string& text);

// Replaces key's value, or appends the pair if absent.
void set_key(KeyValues& kv, const std::string& key, const std::string& value);

// Applies the schema: checks every key against the experiment kind, fills
// defaults, and validates the semantic invariants (resolutions ascending and
// at least 8, T_final > 0, packet inside the Schwarzschild domain, ...).
ExperimentConfig make_config(const KeyValues& kv);

ExperimentConfig load_config(const std::string& path);

// Resolved configuration echo (defaults included) in canonical key order.
// Serialized into metadata sidecars so every run records its full inputs.
KeyValues config_key_values(const ExperimentConfig& cfg);
std::string serialize_config(const ExperimentConfig& cfg);

// Jet and sample set of a classify configuration.
JetSpec build_jet(const ExperimentConfig& cfg);
std::vector<SamplePoint> jet_samples(const ExperimentConfig& cfg);

} // namespace qwd

#endif
