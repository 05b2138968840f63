#include "qwdirac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qwdirac/csvio.hpp"

namespace qwd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const char* first = value.data();
    const char* last = first + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
        fail(key + " = '" + value + "' is not a finite number");
    return v;
}

long long to_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const char* first = value.data();
    const char* last = first + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        fail(key + " = '" + value + "' is not an integer");
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const char* first = value.data();
    const char* last = first + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        fail(key + " = '" + value + "' is not a non-negative integer");
    return v;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto piece = comma == std::string::npos ? value.substr(start)
                                                      : value.substr(start, comma - start);
        items.push_back(trim(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

std::vector<double> to_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) {
        if (item.empty()) fail(key + " has an empty list entry");
        out.push_back(to_double(key, item));
    }
    return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const auto& item : split_list(value)) {
        if (item.empty()) fail(key + " has an empty list entry");
        const long long v = to_int(key, item);
        if (v < 1 || v > 1 << 24) fail(key + " entry " + item + " is out of range");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

AngleLaw to_law(const std::string& key, const std::string& value) {
    AngleLaw law;
    if (value == "wavy") {
        law.form = AngleLaw::Form::Wavy;
    } else if (value == "schwarzschild") {
        law.form = AngleLaw::Form::Schwarzschild;
    } else {
        law.form = AngleLaw::Form::Constant;
        law.value = to_double(key, value);
    }
    return law;
}

struct KeyUse {
    const KeyValues* kv;
    std::set<std::string> used;

    const std::string* find(const std::string& key) {
        for (const auto& [k, v] : *kv)
            if (k == key) {
                used.insert(key);
                return &v;
            }
        return nullptr;
    }

    bool get(const std::string& key, double& out) {
        if (const auto* v = find(key)) {
            out = to_double(key, *v);
            return true;
        }
        return false;
    }

    double require_double(const std::string& key) {
        if (const auto* v = find(key)) return to_double(key, *v);
        fail("missing required key " + key);
    }

    void finish() const {
        for (const auto& [k, v] : *kv)
            if (!used.count(k)) fail("unknown key '" + k + "' for this experiment kind");
    }
};

ExperimentKind parse_kind(const std::string& value) {
    if (value == "electric_convergence") return ExperimentKind::ElectricConvergence;
    if (value == "electric_density") return ExperimentKind::ElectricDensity;
    if (value == "schwarzschild") return ExperimentKind::Schwarzschild;
    if (value == "classify") return ExperimentKind::Classify;
    if (value == "geodesic") return ExperimentKind::Geodesic;
    fail("unknown kind '" + value + "'");
}

void check_resolutions(const std::vector<int>& res) {
    if (res.empty()) fail("resolutions must be non-empty");
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (res[i] < 8) fail("resolution " + std::to_string(res[i]) + " is below the minimum 8");
        if (res[i] % 2 != 0) fail("resolution " + std::to_string(res[i]) + " must be even");
        if (i > 0 && res[i] == res[i - 1])
            fail("duplicate resolution " + std::to_string(res[i]));
        if (i > 0 && res[i] < res[i - 1]) fail("resolutions must be sorted ascending");
    }
}

void read_packet(KeyUse& keys, ExperimentConfig& cfg) {
    keys.get("packet.sigmaX", cfg.packet.sigmaX);
    double center = 0.0;
    if (keys.get("packet.center", center)) cfg.packet.center = center;
    keys.get("packet.k0", cfg.packet.k0);
}

void read_angles(KeyUse& keys, ExperimentConfig& cfg) {
    keys.get("angles.theta", cfg.angles.theta);
    keys.get("angles.xi_T", cfg.angles.xi_T);
    keys.get("angles.zeta", cfg.angles.zeta);
    keys.get("angles.alpha", cfg.angles.alpha);
}

void read_schwarzschild(KeyUse& keys, ExperimentConfig& cfg, bool required) {
    const auto* rg = keys.find("schwarzschild.r_g");
    const auto* lam = keys.find("schwarzschild.lambda");
    if (!rg && !lam) {
        if (required) fail("missing schwarzschild.r_g and schwarzschild.lambda");
        return;
    }
    SchwarzschildConfig sc;
    if (rg) sc.r_g = to_double("schwarzschild.r_g", *rg);
    if (lam) sc.lambda = to_double("schwarzschild.lambda", *lam);
    if (!(sc.r_g > 0.0)) fail("schwarzschild.r_g must be positive");
    if (!(sc.lambda > 0.0)) fail("schwarzschild.lambda must be positive");
    cfg.schwarzschild = sc;
}

} // namespace

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::ElectricConvergence: return "electric_convergence";
        case ExperimentKind::ElectricDensity: return "electric_density";
        case ExperimentKind::Schwarzschild: return "schwarzschild";
        case ExperimentKind::Classify: return "classify";
        case ExperimentKind::Geodesic: return "geodesic";
    }
    return "?";
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("line " + std::to_string(lineno) + " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("line " + std::to_string(lineno) + " has an empty key");
        for (const auto& [k, v] : kv)
            if (k == key) fail("duplicate key '" + key + "'");
        kv.emplace_back(key, value);
    }
    return kv;
}

void set_key(KeyValues& kv, const std::string& key, const std::string& value) {
    for (auto& [k, v] : kv)
        if (k == key) {
            v = value;
            return;
        }
    kv.emplace_back(key, value);
}

ExperimentConfig make_config(const KeyValues& kv) {
    KeyUse keys{&kv, {}};
    ExperimentConfig cfg;

    const auto* kindv = keys.find("kind");
    if (!kindv) fail("missing required key kind");
    cfg.kind = parse_kind(*kindv);

    if (const auto* v = keys.find("output_dir")) cfg.output_dir = *v;
    if (cfg.output_dir.empty()) fail("output_dir must not be empty");
    if (const auto* v = keys.find("seed")) cfg.seed = to_uint("seed", *v);
    if (const auto* v = keys.find("output.time_samples")) {
        const long long ts = to_int("output.time_samples", *v);
        if (ts < 2 || ts > 100000) fail("output.time_samples must be in [2, 100000]");
        cfg.time_samples = static_cast<int>(ts);
    }

    const bool wants_lattice = cfg.kind == ExperimentKind::ElectricConvergence ||
                               cfg.kind == ExperimentKind::ElectricDensity ||
                               cfg.kind == ExperimentKind::Schwarzschild;
    if (wants_lattice) {
        keys.get("lattice.length", cfg.length);
        if (!(cfg.length > 0.0)) fail("lattice.length must be positive");
        if (const auto* v = keys.find("resolutions")) {
            cfg.resolutions = to_int_list("resolutions", *v);
        } else {
            fail("missing required key resolutions");
        }
        check_resolutions(cfg.resolutions);
        cfg.T_final = keys.require_double("T_final");
        if (!(cfg.T_final > 0.0)) fail("T_final must be positive");
    }

    switch (cfg.kind) {
        case ExperimentKind::ElectricConvergence: {
            read_packet(keys, cfg);
            read_angles(keys, cfg);
            if (!(cfg.packet.sigmaX > 0.0)) fail("packet.sigmaX must be positive");
            break;
        }
        case ExperimentKind::ElectricDensity: {
            read_packet(keys, cfg);
            read_angles(keys, cfg);
            if (!(cfg.packet.sigmaX > 0.0)) fail("packet.sigmaX must be positive");
            if (cfg.resolutions.size() != 1)
                fail("electric_density takes exactly one resolution");
            if (const auto* v = keys.find("packet.sigmaX_list"))
                cfg.sigma_list = to_double_list("packet.sigmaX_list", *v);
            else
                cfg.sigma_list = {cfg.packet.sigmaX};
            if (cfg.sigma_list.empty()) fail("packet.sigmaX_list must be non-empty");
            for (double s : cfg.sigma_list)
                if (!(s > 0.0)) fail("packet.sigmaX_list entries must be positive");
            break;
        }
        case ExperimentKind::Schwarzschild: {
            read_packet(keys, cfg);
            read_schwarzschild(keys, cfg, true);
            if (!(cfg.packet.sigmaX > 0.0)) fail("packet.sigmaX must be positive");
            const double center = cfg.packet.center.value_or(cfg.length / 2);
            if (center < 0.0 || center >= cfg.length)
                fail("packet.center must lie in the window [0, lattice.length)");
            if (!in_domain(0.0, center, *cfg.schwarzschild))
                fail("initial packet center is outside the walk domain at T = 0");
            break;
        }
        case ExperimentKind::Classify: {
            const auto* n = keys.find("jet.n_steps");
            if (!n) fail("missing required key jet.n_steps");
            const long long steps = to_int("jet.n_steps", *n);
            if (steps != 1 && steps != 2) fail("jet.n_steps must be 1 or 2");
            cfg.jet.n_steps = static_cast<int>(steps);
            if (const auto* v = keys.find("jet.theta0")) cfg.jet.theta0 = to_law("jet.theta0", *v);
            if (const auto* v = keys.find("jet.xi0")) cfg.jet.xi0 = to_law("jet.xi0", *v);
            if (const auto* v = keys.find("jet.zeta0")) cfg.jet.zeta0 = to_law("jet.zeta0", *v);
            if (const auto* v = keys.find("jet.alpha0")) cfg.jet.alpha0 = to_law("jet.alpha0", *v);
            keys.get("jet.theta_bar", cfg.jet.theta_bar);
            keys.get("jet.xi_bar", cfg.jet.xi_bar);
            keys.get("jet.alpha_bar", cfg.jet.alpha_bar);
            for (const auto* law : {&cfg.jet.xi0, &cfg.jet.zeta0, &cfg.jet.alpha0})
                if (law->form == AngleLaw::Form::Schwarzschild)
                    fail("the schwarzschild law applies to jet.theta0 only");
            read_schwarzschild(keys, cfg,
                               cfg.jet.theta0.form == AngleLaw::Form::Schwarzschild);
            cfg.sample_T = {0.0, 0.4, 0.9};
            cfg.sample_X = {0.3, 1.7, 4.1};
            if (const auto* v = keys.find("samples.T"))
                cfg.sample_T = to_double_list("samples.T", *v);
            if (const auto* v = keys.find("samples.X"))
                cfg.sample_X = to_double_list("samples.X", *v);
            if (cfg.sample_T.empty() || cfg.sample_X.empty())
                fail("samples.T and samples.X must be non-empty");
            break;
        }
        case ExperimentKind::Geodesic: {
            read_schwarzschild(keys, cfg, true);
            cfg.T_final = keys.require_double("T_final");
            if (!(cfg.T_final > 0.0)) fail("T_final must be positive");
            const auto* c = keys.find("packet.center");
            if (!c) fail("missing required key packet.center (launch point)");
            cfg.packet.center = to_double("packet.center", *c);
            if (const auto* v = keys.find("geodesic.branch")) {
                const long long b = to_int("geodesic.branch", *v);
                if (b != -1 && b != 1) fail("geodesic.branch must be -1 or 1");
                cfg.geo_branch = static_cast<int>(b);
            }
            keys.get("geodesic.dt", cfg.geo_dt);
            if (!(cfg.geo_dt > 0.0)) fail("geodesic.dt must be positive");
            if (!in_domain(0.0, *cfg.packet.center, *cfg.schwarzschild))
                fail("geodesic launch point is outside the walk domain at T = 0");
            break;
        }
    }

    keys.finish();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return make_config(parse_key_values(text.str()));
}

namespace {

std::string law_text(const AngleLaw& law) {
    switch (law.form) {
        case AngleLaw::Form::Wavy: return "wavy";
        case AngleLaw::Form::Schwarzschild: return "schwarzschild";
        case AngleLaw::Form::Constant: break;
    }
    return format_double(law.value);
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace

KeyValues config_key_values(const ExperimentConfig& cfg) {
    KeyValues kv;
    kv.emplace_back("kind", kind_name(cfg.kind));
    kv.emplace_back("output_dir", cfg.output_dir);
    kv.emplace_back("seed", std::to_string(cfg.seed));

    const bool wants_lattice = cfg.kind == ExperimentKind::ElectricConvergence ||
                               cfg.kind == ExperimentKind::ElectricDensity ||
                               cfg.kind == ExperimentKind::Schwarzschild;
    if (wants_lattice) {
        kv.emplace_back("lattice.length", format_double(cfg.length));
        kv.emplace_back("resolutions", join_ints(cfg.resolutions));
        kv.emplace_back("T_final", format_double(cfg.T_final));
        kv.emplace_back("output.time_samples", std::to_string(cfg.time_samples));
        kv.emplace_back("packet.sigmaX", format_double(cfg.packet.sigmaX));
        kv.emplace_back("packet.center",
                        format_double(cfg.packet.center.value_or(cfg.length / 2)));
    }
    switch (cfg.kind) {
        case ExperimentKind::ElectricConvergence:
        case ExperimentKind::ElectricDensity:
            kv.emplace_back("packet.k0", format_double(cfg.packet.k0));
            kv.emplace_back("angles.theta", format_double(cfg.angles.theta));
            kv.emplace_back("angles.xi_T", format_double(cfg.angles.xi_T));
            kv.emplace_back("angles.zeta", format_double(cfg.angles.zeta));
            kv.emplace_back("angles.alpha", format_double(cfg.angles.alpha));
            if (cfg.kind == ExperimentKind::ElectricDensity)
                kv.emplace_back("packet.sigmaX_list", join_doubles(cfg.sigma_list));
            break;
        case ExperimentKind::Schwarzschild:
            break;
        case ExperimentKind::Classify:
            kv.emplace_back("jet.n_steps", std::to_string(cfg.jet.n_steps));
            kv.emplace_back("jet.theta0", law_text(cfg.jet.theta0));
            kv.emplace_back("jet.xi0", law_text(cfg.jet.xi0));
            kv.emplace_back("jet.zeta0", law_text(cfg.jet.zeta0));
            kv.emplace_back("jet.alpha0", law_text(cfg.jet.alpha0));
            kv.emplace_back("jet.theta_bar", format_double(cfg.jet.theta_bar));
            kv.emplace_back("jet.xi_bar", format_double(cfg.jet.xi_bar));
            kv.emplace_back("jet.alpha_bar", format_double(cfg.jet.alpha_bar));
            kv.emplace_back("samples.T", join_doubles(cfg.sample_T));
            kv.emplace_back("samples.X", join_doubles(cfg.sample_X));
            break;
        case ExperimentKind::Geodesic:
            kv.emplace_back("T_final", format_double(cfg.T_final));
            kv.emplace_back("packet.center", format_double(*cfg.packet.center));
            kv.emplace_back("geodesic.branch", std::to_string(cfg.geo_branch));
            kv.emplace_back("geodesic.dt", format_double(cfg.geo_dt));
            break;
    }
    if (cfg.schwarzschild) {
        kv.emplace_back("schwarzschild.r_g", format_double(cfg.schwarzschild->r_g));
        kv.emplace_back("schwarzschild.lambda", format_double(cfg.schwarzschild->lambda));
    }
    return kv;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : config_key_values(cfg)) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

namespace {

AngleFn law_fn(const AngleLaw& law, const ExperimentConfig& cfg) {
    switch (law.form) {
        case AngleLaw::Form::Wavy:
            return make_fn(
                [](double T, double X) { return 0.4 + 0.25 * std::sin(X) * std::cos(T); },
                [](double T, double X) { return -0.25 * std::sin(X) * std::sin(T); },
                [](double T, double X) { return 0.25 * std::cos(X) * std::cos(T); });
        case AngleLaw::Form::Schwarzschild:
            return schwarzschild_theta_angle(*cfg.schwarzschild);
        case AngleLaw::Form::Constant: break;
    }
    return constant_fn(law.value);
}

} // namespace

JetSpec build_jet(const ExperimentConfig& cfg) {
    JetSpec jet;
    jet.n_steps = cfg.jet.n_steps;
    jet.theta0 = law_fn(cfg.jet.theta0, cfg);
    jet.xi0 = law_fn(cfg.jet.xi0, cfg);
    jet.zeta0 = law_fn(cfg.jet.zeta0, cfg);
    jet.alpha0 = law_fn(cfg.jet.alpha0, cfg);
    jet.theta_bar = constant_fn(cfg.jet.theta_bar);
    jet.xi_bar = constant_fn(cfg.jet.xi_bar);
    jet.alpha_bar = constant_fn(cfg.jet.alpha_bar);
    return jet;
}

std::vector<SamplePoint> jet_samples(const ExperimentConfig& cfg) {
    std::vector<SamplePoint> points;
    points.reserve(cfg.sample_T.size() * cfg.sample_X.size());
    for (double t : cfg.sample_T)
        for (double x : cfg.sample_X) points.push_back({t, x});
    return points;
}

} // namespace qwd
