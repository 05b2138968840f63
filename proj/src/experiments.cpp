#include "qwdirac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qwdirac/characteristics.hpp"
#include "qwdirac/continuum.hpp"
#include "qwdirac/csvio.hpp"
#include "qwdirac/dirac.hpp"
#include "qwdirac/fourier.hpp"
#include "qwdirac/schwarzschild.hpp"
#include "qwdirac/walk.hpp"

namespace qwd {

const char* core_version() { return "1.0.0"; }

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need two or more paired samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

SpinorField gaussian_density_state(const Lattice& lat, double sigma, double center) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_density_state: sigma must be positive");
    std::vector<double> N(lat.n);
    double total = 0.0;
    for (int m = 0; m < lat.n; ++m) {
        const double d = lat.x(m) - center;
        N[m] = std::exp(-d * d / (2.0 * sigma * sigma));
        total += N[m];
    }
    total *= lat.dx();
    SpinorField psi(lat);
    for (int m = 0; m < lat.n; ++m) {
        const double half = std::sqrt(N[m] / total / 2.0);
        psi.L[m] = half;
        psi.R[m] = cplx(0.0, half);
    }
    return psi;
}

FlatRunParams extract_flat_params(const AngleTable& a) {
    FlatRunParams fp;
    fp.jet.n_steps = 1;
    fp.jet.zeta0 = constant_fn(a.zeta);
    fp.jet.theta_bar = constant_fn(a.theta);
    const double xiT = a.xi_T;
    fp.jet.xi_bar = make_fn([xiT](double T, double) { return xiT * T; },
                            [xiT](double, double) { return xiT; },
                            [](double, double) { return 0.0; });
    fp.jet.alpha_bar = constant_fn(a.alpha);

    DiracParams p = emit_s1_params(fp.jet);
    const cplx mm = p.mass_minus(0.0, 0.0);
    const cplx mp = p.mass_plus(0.0, 0.0);
    if (std::abs(mm.imag()) > 1e-9 || std::abs(mm - mp) > 1e-9)
        throw ConfigError("config: the angle table yields a complex or component-split mass; "
                          "the flat solver needs angles.zeta = pi/2 modulo pi so both "
                          "components share one real mass");
    fp.mass = mm.real();
    fp.efield = a.xi_T;
    return fp;
}

namespace {

const double PI = std::numbers::pi;

std::string num(double v) { return format_double(v); }

std::string cplx_text(cplx z) {
    std::string out = num(z.real());
    out += z.imag() < 0.0 ? " - " : " + ";
    out += num(std::abs(z.imag()));
    out += "i";
    return out;
}

// "0.005" -> "0p005", usable in file names
std::string sigma_tag(double s) {
    std::string tag = num(s);
    for (char& c : tag)
        if (c == '.') c = 'p';
    return tag;
}

long long steps_for(double T_final, double eps) {
    const long long steps = std::llround(T_final / eps);
    return steps < 1 ? 1 : steps;
}

// Row indices to record: multiples of stride, first and last included,
// near-evenly spaced, at most max_rows of them. total must be a stride multiple.
std::vector<long long> sample_steps(long long total, int max_rows, int stride) {
    const long long last = total / stride;
    std::vector<long long> rows;
    const long long want = std::max<long long>(2, max_rows);
    if (last + 1 <= want) {
        for (long long i = 0; i <= last; ++i) rows.push_back(i * stride);
        return rows;
    }
    long long prev = -1;
    for (long long i = 0; i < want; ++i) {
        const long long cand = (i * last + (want - 1) / 2) / (want - 1);
        if (cand != prev) rows.push_back(cand * stride);
        prev = cand;
    }
    return rows;
}

struct PathInterp {
    const GeodesicPath* path = nullptr;

    std::optional<double> at(double t) const {
        const auto& T = path->T;
        const auto& X = path->X;
        if (T.empty() || t < T.front() - 1e-12 || t > T.back() + 1e-12) return std::nullopt;
        const auto it = std::lower_bound(T.begin(), T.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - T.begin());
        if (i == 0) return X.front();
        if (i >= T.size()) return X.back();
        const double t0 = T[i - 1], t1 = T[i];
        const double w = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
        return X[i - 1] * (1.0 - w) + X[i] * w;
    }
};

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return cfg.output_dir + "/" + name;
}

void write_metadata(const ExperimentConfig& cfg, const KeyValues& derived) {
    std::string text = "code.version = ";
    text += core_version();
    text += '\n';
    text += serialize_config(cfg);
    for (const auto& [k, v] : derived) {
        text += "derived.";
        text += k;
        text += " = ";
        text += v;
        text += '\n';
    }
    write_text_atomic(out_path(cfg, "metadata.txt"), text);
}

AngleField electric_field_at(const JetSpec& jet, double eps) {
    AngleField af = field_at_epsilon(jet, eps);
    af.space_uniform = true; // table angles depend on T only
    return af;
}

void check_packet_resolution(double sigma, const Lattice& lat, const std::string& who) {
    if (sigma < 4.0 * lat.dx())
        throw ConfigError("config: " + who + " = " + num(sigma) + " is under-resolved at n = " +
                          std::to_string(lat.n) + " (needs at least 4 dx = " +
                          num(4.0 * lat.dx()) + ")");
}

std::vector<std::string> map_header(const Lattice& lat) {
    std::vector<std::string> header{"T"};
    header.reserve(lat.n + 1);
    for (int m = 0; m < lat.n; ++m) header.push_back(num(lat.x(m)));
    return header;
}

double high_mode_fraction_of(const std::vector<double>& N, const Dft& dft, int cut) {
    std::vector<cplx> v(N.begin(), N.end());
    dft.forward(v);
    double hi = 0.0, all = 0.0;
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
        const int q = Dft::mode(i, n);
        if (q == 0) continue;
        all += std::norm(v[i]);
        if (std::abs(q) > cut) hi += std::norm(v[i]);
    }
    return all > 0.0 ? hi / all : 0.0;
}

// Mean displacement from ref by minimal periodic image, so a drifting packet
// can be followed through the wrap.
double tracked_centroid(const std::vector<double>& N, const Lattice& lat, double ref) {
    double acc = 0.0;
    for (int m = 0; m < lat.n; ++m)
        acc += std::remainder(lat.x(m) - ref, lat.length) * N[m];
    return ref + acc * lat.dx();
}

} // namespace

ConvergenceResult run_electric_convergence(const ExperimentConfig& cfg) {
    const FlatRunParams fp = extract_flat_params(cfg.angles);
    ConvergenceResult result;
    result.mass = fp.mass;
    result.efield = fp.efield;

    for (int n : cfg.resolutions) {
        const Lattice lat(n, cfg.length);
        const double eps = lat.dx();
        check_packet_resolution(cfg.packet.sigmaX, lat, "packet.sigmaX");
        const long long steps = steps_for(cfg.T_final, eps);
        const double T_actual = steps * eps;

        const SpinorField psi0 = positive_energy_packet(cfg.packet.k0, cfg.packet.sigmaX,
                                                        fp.mass, lat, cfg.packet.center);
        SpinorField walk = psi0;
        evolve_s1(walk, electric_field_at(fp.jet, eps), 0, static_cast<int>(steps));

        const FlatDiracConfig dcfg{fp.mass, fp.efield, lat};
        const SpinorField dirac =
            evolve_dirac_flat(psi0, dcfg, 0.0, static_cast<int>(steps), eps);

        const double delta = delta_n_rel(density_of(walk), density_of(dirac));
        result.rows.push_back({n, eps, steps, T_actual, delta});
    }

    if (result.rows.size() >= 2) {
        std::vector<double> lx, ly;
        for (const auto& r : result.rows) {
            lx.push_back(std::log(r.eps));
            ly.push_back(std::log(r.delta));
        }
        result.fit = fit_line(lx, ly);
    }

    std::vector<std::vector<double>> rows;
    for (const auto& r : result.rows)
        rows.push_back({static_cast<double>(r.n), r.eps, static_cast<double>(r.steps),
                        r.T_actual, r.delta});
    write_csv(out_path(cfg, "convergence.csv"), {"n", "eps", "steps", "T_actual", "delta_n_rel"},
              rows);

    KeyValues derived;
    derived.emplace_back("mass", num(result.mass));
    derived.emplace_back("efield", num(result.efield));
    if (result.fit) {
        derived.emplace_back("slope", num(result.fit->slope));
        derived.emplace_back("slope_r2", num(result.fit->r2));
    }
    write_metadata(cfg, derived);
    return result;
}

DensityResult run_electric_density(const ExperimentConfig& cfg) {
    const FlatRunParams fp = extract_flat_params(cfg.angles);
    DensityResult result;
    result.mass = fp.mass;
    result.efield = fp.efield;

    const Lattice lat(cfg.resolutions.front(), cfg.length);
    const double eps = lat.dx();
    const long long steps = steps_for(cfg.T_final, eps);
    result.T_actual = steps * eps;
    const AngleField af = electric_field_at(fp.jet, eps);
    const auto row_steps = sample_steps(steps, cfg.time_samples, 1);
    const Dft dft(lat.n);
    const int mode_cut = 20;
    const double center = cfg.packet.center.value_or(cfg.length / 2);

    for (double sigma : cfg.sigma_list) {
        check_packet_resolution(sigma, lat, "packet.sigmaX_list entry");
        SpinorField psi =
            positive_energy_packet(cfg.packet.k0, sigma, fp.mass, lat, cfg.packet.center);

        std::vector<std::vector<double>> map_rows;
        std::vector<double> row_T, row_centroid;
        long long cur = 0;
        double ref = center;
        for (long long target : row_steps) {
            if (target > cur) {
                evolve_s1(psi, af, static_cast<int>(cur), static_cast<int>(target - cur));
                cur = target;
            }
            const std::vector<double> N = psi.density();
            std::vector<double> row{cur * eps};
            row.insert(row.end(), N.begin(), N.end());
            map_rows.push_back(std::move(row));
            row_T.push_back(cur * eps);
            ref = tracked_centroid(N, lat, ref);
            row_centroid.push_back(ref);
        }

        DensityOutcome oc;
        oc.sigmaX = sigma;
        const std::vector<double> N_final(map_rows.back().begin() + 1, map_rows.back().end());
        oc.high_mode_fraction = high_mode_fraction_of(N_final, dft, mode_cut);
        oc.norm_final = psi.norm_sq();
        if (fp.efield == 0.0 && cfg.packet.k0 != 0.0) {
            oc.drift = fit_line(row_T, row_centroid);
            oc.drift_v_formula = cfg.packet.k0 / std::hypot(cfg.packet.k0, fp.mass);
        }
        result.outcomes.push_back(oc);

        write_csv(out_path(cfg, "density_sigma_" + sigma_tag(sigma) + ".csv"), map_header(lat),
                  map_rows);
    }

    std::vector<std::vector<std::string>> summary;
    for (const auto& oc : result.outcomes) {
        std::vector<std::string> row{num(oc.sigmaX), num(oc.high_mode_fraction),
                                     num(oc.norm_final)};
        if (oc.drift) {
            row.push_back(num(oc.drift->slope));
            row.push_back(num(oc.drift->r2));
            row.push_back(num(oc.drift_v_formula));
        } else {
            row.insert(row.end(), {"", "", ""});
        }
        summary.push_back(std::move(row));
    }
    write_csv_cells(out_path(cfg, "density_summary.csv"),
                    {"sigmaX", "high_mode_fraction", "norm_final", "drift_slope", "drift_r2",
                     "drift_v_formula"},
                    summary);

    KeyValues derived;
    derived.emplace_back("mass", num(result.mass));
    derived.emplace_back("efield", num(result.efield));
    derived.emplace_back("eps", num(eps));
    derived.emplace_back("steps", std::to_string(steps));
    derived.emplace_back("T_actual", num(result.T_actual));
    derived.emplace_back("mode_cut", std::to_string(mode_cut));
    write_metadata(cfg, derived);
    return result;
}

namespace {

// Largest density site near the expected position, sharpened by fitting a
// parabola through the winning site and its neighbours.
double ridge_position(const std::vector<double>& N, const Lattice& lat, double X_expect,
                      double half_width) {
    int m0 = static_cast<int>(std::ceil((X_expect - half_width) / lat.dx()));
    int m1 = static_cast<int>(std::floor((X_expect + half_width) / lat.dx()));
    m0 = std::max(m0, 0);
    m1 = std::min(m1, lat.n - 1);
    if (m0 > m1) throw std::runtime_error("ridge search window left the lattice");
    int best = m0;
    for (int m = m0 + 1; m <= m1; ++m)
        if (N[m] > N[best]) best = m;
    if (best == m0 || best == m1) return lat.x(best);
    const double den = N[best - 1] - 2.0 * N[best] + N[best + 1];
    if (!(den < 0.0)) return lat.x(best);
    double delta = 0.5 * (N[best - 1] - N[best + 1]) / den;
    delta = std::clamp(delta, -0.5, 0.5);
    return lat.x(best) + delta * lat.dx();
}

} // namespace

SchwarzschildResult run_schwarzschild(const ExperimentConfig& cfg) {
    const SchwarzschildConfig scfg = *cfg.schwarzschild;
    const double center = cfg.packet.center.value_or(cfg.length / 2);
    const double sigma = cfg.packet.sigmaX;
    const ThetaField tf = schwarzschild_theta_field(scfg);

    // reference null geodesics from the launch point
    const double geo_dt = 0.02;
    const double T_cap = 10.0 * cfg.T_final;
    const GeodesicPath left = integrate_characteristic(center, -1, tf, T_cap, geo_dt);
    const GeodesicPath right = integrate_characteristic(center, +1, tf, T_cap, geo_dt);
    if (!left.hit_boundary)
        throw ConfigError("config: the left geodesic does not reach the singularity within "
                          "ten T_final; extend T_final");
    const PathInterp left_i{&left}, right_i{&right};

    SchwarzschildResult result;
    result.T_sing_left = left.T.back();
    result.T_sing_right =
        right.hit_boundary ? right.T.back() : std::numeric_limits<double>::quiet_NaN();

    // The ridge is compared against the left geodesic only once the two
    // branches are farther apart than the search window plus the packet tail,
    // and only over the first 80 % of the branch's infall time. Earlier rows
    // show a single unsplit lump whose maximum tracks neither branch.
    const double W_coarse = std::max(2.0, 4.0 * cfg.length / cfg.resolutions.front());
    const double sep_min = 6.0 * sigma + W_coarse;
    result.T_track_end = 0.8 * result.T_sing_left;
    {
        const double t_hi =
            std::min({left.T.back(), right.T.back(), result.T_track_end});
        double found = -1.0;
        for (double t = 0.0; t <= t_hi + 1e-9; t += geo_dt) {
            const auto xl = left_i.at(t);
            const auto xr = right_i.at(t);
            if (!xl || !xr) break;
            if (*xr - *xl >= sep_min) {
                found = t;
                break;
            }
        }
        if (found < 0.0)
            throw ConfigError("config: geodesic branches never separate by " + num(sep_min) +
                              " before tracking would end; ridge tracking is infeasible here");
        result.T_sep = found;
    }

    // walk angles: the Schwarzschild law inside the domain, free streaming
    // (theta = 0) outside it
    AngleField af;
    af.theta = make_fn([scfg](double T, double X) {
        return in_domain(T, X, scfg) ? walk_theta(T, X, scfg) : 0.0;
    });
    af.xi = constant_fn(PI);
    af.zeta = constant_fn(PI / 2);
    af.alpha = constant_fn(0.0);

    KeyValues derived;
    derived.emplace_back("T_sing_left", num(result.T_sing_left));
    derived.emplace_back("T_sing_right", right.hit_boundary ? num(result.T_sing_right)
                                                            : std::string("unreached"));
    derived.emplace_back("T_sep", num(result.T_sep));
    derived.emplace_back("T_track_end", num(result.T_track_end));
    derived.emplace_back("sep_min", num(sep_min));

    for (int n : cfg.resolutions) {
        const Lattice lat(n, cfg.length);
        const double eps = lat.dx();
        long long steps = steps_for(cfg.T_final, eps);
        if (steps % 2 != 0) ++steps; // observe the walk stroboscopically
        const auto row_steps = sample_steps(steps, cfg.time_samples, 2);
        const double W = std::max(2.0, 4.0 * eps);

        SpinorField psi = gaussian_density_state(lat, sigma, center);
        // The table angles (xi = pi, zeta = pi/2) put the massless band
        // crossing at lattice wavenumber pi/2, not 0. A smooth packet there
        // would sit at a band extremum and barely move; ride the crossing
        // with a quarter-period carrier so the branches travel at the null
        // speed. The initial density is carrier-invariant.
        const long long qc = std::llround(n / 4.0);
        for (int m = 0; m < lat.n; ++m) {
            const cplx carrier =
                std::polar(1.0, 2.0 * PI * static_cast<double>(qc * m % n) / n);
            psi.L[m] *= carrier;
            psi.R[m] *= carrier;
        }

        std::vector<std::vector<double>> map_rows, ridge_rows;
        std::vector<std::vector<std::string>> overlay_rows;
        double max_err = 0.0;
        int tracked = 0;
        long long cur = 0;
        for (long long target : row_steps) {
            if (target > cur) {
                evolve_s1(psi, af, static_cast<int>(cur), static_cast<int>(target - cur));
                cur = target;
            }
            const double T_row = cur * eps;
            const std::vector<double> N = psi.density();

            std::vector<double> row{T_row};
            row.insert(row.end(), N.begin(), N.end());
            map_rows.push_back(std::move(row));

            double outside = 0.0;
            for (int m = 0; m < lat.n; ++m)
                if (!in_domain(T_row, lat.x(m), scfg)) outside += N[m];
            outside *= lat.dx();

            const auto xl = left_i.at(T_row);
            const auto xr = right_i.at(T_row);
            overlay_rows.push_back({num(T_row), num(singularity_position(T_row, scfg)),
                                    num(horizon_position(T_row, scfg)),
                                    num(domain_edge_position(T_row, scfg)),
                                    xl ? num(*xl) : std::string(),
                                    xr ? num(*xr) : std::string(), num(outside)});

            if (T_row >= result.T_sep && T_row <= result.T_track_end && xl) {
                const double X_ridge = ridge_position(N, lat, *xl, W);
                const double err = std::abs(X_ridge - *xl);
                max_err = std::max(max_err, err);
                ++tracked;
                ridge_rows.push_back({T_row, X_ridge, *xl, err});
            }
        }
        if (tracked == 0)
            throw ConfigError("config: no recorded rows fall inside the ridge tracking "
                              "interval; raise output.time_samples or T_final");

        const std::string tag = std::to_string(n);
        write_csv(out_path(cfg, "density_n" + tag + ".csv"), map_header(lat), map_rows);
        write_csv_cells(out_path(cfg, "overlay_n" + tag + ".csv"),
                        {"T", "singularity_X", "horizon_X", "domain_edge_X", "geodesic_left_X",
                         "geodesic_right_X", "prob_outside_domain"},
                        overlay_rows);
        write_csv(out_path(cfg, "ridge_n" + tag + ".csv"),
                  {"T", "X_ridge", "X_geodesic", "abs_err"}, ridge_rows);

        result.ridges.push_back({n, eps, max_err, tracked});
        derived.emplace_back("ridge_max_err_n" + tag, num(max_err));
        derived.emplace_back("norm_final_n" + tag, num(psi.norm_sq()));
    }

    write_metadata(cfg, derived);
    return result;
}

namespace {

struct CheckAccumulator {
    PropertyReport* report;
    int instances;

    void add(const std::string& name, double worst, double tol, bool larger_is_better = false) {
        PropertyCheck c;
        c.name = name;
        c.instances = instances;
        c.worst = worst;
        c.tol = tol;
        c.pass = larger_is_better ? worst > tol : worst < tol;
        report->checks.push_back(std::move(c));
    }
};

AngleField random_trig_angles(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.2, 1.2);
    auto draw = [&]() {
        const double a = amp(rng), b = amp(rng), c = amp(rng);
        return make_fn([a, b, c](double T, double X) {
            return a + b * std::sin(X + c) * std::cos(T) + 0.3 * c * std::cos(2.0 * X - T);
        });
    };
    AngleField af;
    af.theta = draw();
    af.xi = draw();
    af.zeta = draw();
    af.alpha = draw();
    return af;
}

} // namespace

PropertyReport run_property_suite(std::uint64_t seed, int instances) {
    if (instances < 1) throw std::invalid_argument("run_property_suite: instances must be >= 1");
    PropertyReport report;
    CheckAccumulator acc{&report, instances};
    std::mt19937_64 rng(seed);
    const Lattice lat(32, 2.0 * PI);
    std::uniform_real_distribution<double> angle(-2.0 * PI, 2.0 * PI);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    {
        double worst = 0.0;
        for (int i = 0; i < instances; ++i) {
            const double th = angle(rng), xi = angle(rng), ze = angle(rng), al = angle(rng);
            const CoinMatrix B = build_coin(th, xi, ze, al);
            // rows of B^dagger B against the identity
            const cplx g00 = std::conj(B.a) * B.a + std::conj(B.c) * B.c;
            const cplx g01 = std::conj(B.a) * B.b + std::conj(B.c) * B.d;
            const cplx g11 = std::conj(B.b) * B.b + std::conj(B.d) * B.d;
            const cplx det = B.a * B.d - B.b * B.c;
            double r = std::abs(g00 - 1.0);
            r = std::max(r, std::abs(g01));
            r = std::max(r, std::abs(g11 - 1.0));
            r = std::max(r, std::abs(det - std::exp(cplx(0.0, 2.0 * al))));
            worst = std::max(worst, r);
        }
        acc.add("coin unitarity and determinant", worst, 1e-12);
    }

    {
        double worst_s1 = 0.0, worst_s2 = 0.0, worst_pair = 0.0;
        for (int i = 0; i < instances; ++i) {
            const AngleField af = random_trig_angles(rng);
            const SpinorField psi = random_state(lat, rng());
            const SpinorField one = step_s1(psi, af, 0);
            worst_s1 = std::max(worst_s1, std::abs(one.norm_sq() - psi.norm_sq()));

            const S2Coefficients co = build_s2_coefficients(af, lat, 0);
            const SpinorField two = step_s2(psi, co);
            worst_s2 = std::max(worst_s2, std::abs(two.norm_sq() - psi.norm_sq()));

            const SpinorField chained = step_s1(one, af, 1);
            worst_pair = std::max(worst_pair, max_abs_diff(two, chained));
        }
        acc.add("one-step walk conserves the norm", worst_s1, 1e-12);
        acc.add("two-step walk conserves the norm", worst_s2, 1e-12);
        acc.add("two-step map equals two one-step maps", worst_pair, 1e-13);
    }

    {
        double worst = 0.0;
        std::uniform_int_distribution<int> off(-5, 5);
        const Dft dft(lat.n);
        for (int i = 0; i < instances; ++i) {
            const SpinorField psi = random_state(lat, rng());
            const int offset = off(rng);
            const std::vector<cplx> rolled = shift_fourier(psi.L, offset);
            std::vector<cplx> spectral = psi.L;
            dft.forward(spectral);
            for (int j = 0; j < lat.n; ++j) {
                const double ph = 2.0 * PI * Dft::mode(j, lat.n) * offset / lat.n;
                spectral[j] *= std::exp(cplx(0.0, ph));
            }
            dft.inverse(spectral);
            for (int j = 0; j < lat.n; ++j)
                worst = std::max(worst, std::abs(spectral[j] - rolled[j]));
        }
        acc.add("fourier translation equals index roll", worst, 1e-12);
    }

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        for (int i = 0; i < instances; ++i) {
            const AngleField base = random_trig_angles(rng);
            const double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
            const int n = lat.n;
            const GaugePhase phase{[a, b, c, d, n](int j, int m) {
                return a * j + b * m + c * std::sin(2.0 * PI * m / n) + d * std::cos(1.0 * j);
            }};
            const AngleField primed = gauge_transform_angles(base, phase, lat);

            SpinorField psi = random_state(lat, rng());
            SpinorField direct = psi;
            evolve_s1(direct, base, 0, 2);
            SpinorField gauged = gauge_transform(psi, phase, 0);
            evolve_s1(gauged, primed, 0, 2);
            worst = std::max(worst, max_abs_diff(gauge_transform(direct, phase, 2), gauged));
        }
        acc.add("gauge transform commutes with the walk", worst, 1e-12);
    }

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> par(-2.0, 2.0);
        for (int i = 0; i < instances; ++i) {
            const FlatDiracConfig dcfg{par(rng), par(rng), lat};
            const SpinorField psi = random_state(lat, rng());
            const SpinorField out = dirac_step_flat(psi, dcfg, unit(rng), 0.05);
            worst = std::max(worst, std::abs(out.norm_sq() - psi.norm_sq()));
        }
        acc.add("spectral solver step conserves the norm", worst, 1e-12);
    }

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> kd(-10.0, 10.0), md(-3.0, 3.0);
        for (int i = 0; i < instances; ++i) {
            const double k = kd(rng), m = md(rng);
            const auto u = positive_energy_spinor(k, m);
            const double E = std::hypot(k, m);
            const cplx r0 = -k * u[0] + m * u[1] - E * u[0];
            const cplx r1 = m * u[0] + k * u[1] - E * u[1];
            worst = std::max(worst, std::max(std::abs(r0), std::abs(r1)));
        }
        acc.add("positive-energy spinor solves the symbol", worst, 1e-12);
    }

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> rgd(0.5, 150.0), ld(0.2, 3.0), td(0.0, 50.0);
        for (int i = 0; i < instances; ++i) {
            SchwarzschildConfig sc;
            sc.r_g = rgd(rng);
            sc.lambda = ld(rng);
            const double T = td(rng);
            const double X = sc.lambda * T +
                             (0.01 + 0.98 * unit(rng)) * 2.0 * sc.r_g / (3.0 * sc.lambda * sc.lambda);
            const double ct = std::cos(walk_theta(T, X, sc));
            double r = std::abs(ct * ct * (-g_xx(T, X, sc)) - 1.0);
            r = std::max(r, std::abs(radius(T, horizon_position(T, sc), sc) - sc.r_g) / sc.r_g);
            worst = std::max(worst, r);
        }
        acc.add("metric identity and horizon radius", worst, 1e-12);
    }

    {
        // canary: a corrupted coin must trip the unitarity check
        double weakest = std::numeric_limits<double>::infinity();
        for (int i = 0; i < instances; ++i) {
            CoinMatrix B = build_coin(angle(rng), angle(rng), angle(rng), angle(rng));
            B.b += 0.05;
            const cplx g00 = std::conj(B.a) * B.a + std::conj(B.c) * B.c;
            const cplx g01 = std::conj(B.a) * B.b + std::conj(B.c) * B.d;
            const cplx g11 = std::conj(B.b) * B.b + std::conj(B.d) * B.d;
            double r = std::abs(g00 - 1.0);
            r = std::max(r, std::abs(g01));
            r = std::max(r, std::abs(g11 - 1.0));
            weakest = std::min(weakest, r);
        }
        acc.add("canary: corrupted coin trips the unitarity check", weakest, 1e-3, true);
    }

    report.all_pass = true;
    for (const auto& c : report.checks) {
        report.all_pass = report.all_pass && c.pass;
        report.text += c.pass ? "PASS  " : "FAIL  ";
        report.text += c.name;
        report.text += "  worst ";
        report.text += num(c.worst);
        report.text += c.name.rfind("canary", 0) == 0 ? "  must exceed " : "  tol ";
        report.text += num(c.tol);
        report.text += "  (";
        report.text += std::to_string(c.instances);
        report.text += " instances)\n";
    }
    return report;
}

std::string run_classify(const ExperimentConfig& cfg) {
    const JetSpec jet = build_jet(cfg);
    const auto samples = jet_samples(cfg);
    const LimitClass lc = classify_jet(jet, samples);

    std::string out = "family = ";
    out += family_name(lc.tag);
    out += '\n';
    const double T0 = samples.front().T;
    const double X0 = samples.front().X;
    auto coeff = [&](const char* name, const std::string& value) {
        out += name;
        out += "(";
        out += num(T0);
        out += ", ";
        out += num(X0);
        out += ") = ";
        out += value;
        out += '\n';
    };

    switch (lc.tag) {
        case Family::S1: {
            out += "k = " + std::to_string(lc.k) + "\n";
            out += "k_plus = " + std::to_string(lc.k_plus) + "\n";
            out += "k_minus = " + std::to_string(lc.k_minus) + "\n";
            const DiracParams p = emit_s1_params(jet);
            coeff("A0", num(p.A0(T0, X0)));
            coeff("A1", num(p.A1(T0, X0)));
            coeff("mass_minus", cplx_text(p.mass_minus(T0, X0)));
            coeff("mass_plus", cplx_text(p.mass_plus(T0, X0)));
            break;
        }
        case Family::Case1: {
            out += "k = " + std::to_string(lc.k) + "\n";
            out += "k_prime = " + std::to_string(lc.k_prime) + "\n";
            const DiracParams p = emit_case1_params(jet);
            coeff("g_XX", num(p.GXX(T0, X0)));
            coeff("cos_theta", num(p.cos_theta(T0, X0)));
            coeff("A0", num(p.A0(T0, X0)));
            coeff("A1", num(p.A1(T0, X0)));
            break;
        }
        case Family::Case2_1: {
            out += "k = " + std::to_string(lc.k) + "\n";
            out += "k_prime = " + std::to_string(lc.k_prime) + "\n";
            const Case21System sys = emit_case21_system(jet);
            coeff("alpha_bar", num(sys.alpha_bar(T0, X0)));
            coeff("theta_bar", num(sys.theta_bar(T0, X0)));
            coeff("zeta", num(sys.zeta(T0, X0)));
            coeff("xi", num(sys.xi(T0, X0)));
            break;
        }
        case Family::Case2_2:
        case Family::Overlap_1_and_2: {
            out += "k = " + std::to_string(lc.k) + "\n";
            out += "k_prime = " + std::to_string(lc.k_prime) + "\n";
            out += "k_dprime = " + std::to_string(lc.k_dprime) + "\n";
            const DiracParams p = emit_case22_params(jet);
            coeff("A0", num(p.A0(T0, X0)));
            coeff("A1", num(p.A1(T0, X0)));
            coeff("mass_minus", cplx_text(p.mass_minus(T0, X0)));
            coeff("mass_plus", cplx_text(p.mass_plus(T0, X0)));
            if (lc.tag == Family::Overlap_1_and_2)
                out += "note = also admissible as case 1; coefficients above use the "
                       "case-2.2 form\n";
            break;
        }
        case Family::NoLimit:
            out += "note = no admissible continuum scaling at the sampled points\n";
            break;
    }
    out += "samples = " + std::to_string(samples.size()) + "\n";
    return out;
}

std::string run_geodesic(const ExperimentConfig& cfg) {
    const SchwarzschildConfig scfg = *cfg.schwarzschild;
    const ThetaField tf = schwarzschild_theta_field(scfg);
    const GeodesicPath path =
        integrate_characteristic(*cfg.packet.center, cfg.geo_branch, tf, cfg.T_final, cfg.geo_dt);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < path.T.size(); ++i) {
        const double T = path.T[i], X = path.X[i];
        rows.push_back({T, X, radius(T, X, scfg), in_domain(T, X, scfg) ? 1.0 : 0.0});
    }
    write_csv(out_path(cfg, "geodesic.csv"), {"T", "X", "r", "in_domain"}, rows);

    KeyValues derived;
    derived.emplace_back("hit_boundary", path.hit_boundary ? "1" : "0");
    derived.emplace_back("T_end", num(path.T.back()));
    derived.emplace_back("X_end", num(path.X.back()));
    write_metadata(cfg, derived);

    std::string out = "branch = ";
    out += cfg.geo_branch < 0 ? "left" : "right";
    out += "\nsamples = " + std::to_string(path.T.size());
    out += "\nhit_boundary = ";
    out += path.hit_boundary ? "1" : "0";
    out += "\nT_end = " + num(path.T.back());
    out += "\nX_end = " + num(path.X.back());
    out += "\n";
    return out;
}

std::string run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::ElectricConvergence: {
            const ConvergenceResult r = run_electric_convergence(cfg);
            std::string out = "mass = " + num(r.mass) + "\nefield = " + num(r.efield) + "\n";
            for (const auto& row : r.rows)
                out += "n = " + std::to_string(row.n) + ": eps = " + num(row.eps) +
                       ", steps = " + std::to_string(row.steps) +
                       ", delta_n_rel = " + num(row.delta) + "\n";
            if (r.fit)
                out += "slope = " + num(r.fit->slope) + " (r2 = " + num(r.fit->r2) + ")\n";
            return out;
        }
        case ExperimentKind::ElectricDensity: {
            const DensityResult r = run_electric_density(cfg);
            std::string out = "mass = " + num(r.mass) + "\nefield = " + num(r.efield) +
                              "\nT_actual = " + num(r.T_actual) + "\n";
            for (const auto& oc : r.outcomes) {
                out += "sigmaX = " + num(oc.sigmaX) +
                       ": high_mode_fraction = " + num(oc.high_mode_fraction) +
                       ", norm_final = " + num(oc.norm_final);
                if (oc.drift)
                    out += ", drift_slope = " + num(oc.drift->slope) +
                           " (r2 = " + num(oc.drift->r2) +
                           ", group velocity " + num(oc.drift_v_formula) + ")";
                out += "\n";
            }
            return out;
        }
        case ExperimentKind::Schwarzschild: {
            const SchwarzschildResult r = run_schwarzschild(cfg);
            std::string out = "T_sing_left = " + num(r.T_sing_left) + "\nT_sep = " +
                              num(r.T_sep) + "\nT_track_end = " + num(r.T_track_end) + "\n";
            for (const auto& rr : r.ridges)
                out += "n = " + std::to_string(rr.n) + ": dx = " + num(rr.dx) +
                       ", ridge max error = " + num(rr.max_abs_err) + " over " +
                       std::to_string(rr.tracked_rows) + " rows\n";
            return out;
        }
        case ExperimentKind::Classify:
            return run_classify(cfg);
        case ExperimentKind::Geodesic:
            return run_geodesic(cfg);
    }
    throw std::logic_error("run_experiment: unhandled kind");
}

} // namespace qwd
