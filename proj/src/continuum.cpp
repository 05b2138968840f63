#include "qwdirac/continuum.hpp"

#include <cmath>
#include <string>

#include "qwdirac/fourier.hpp"
#include "qwdirac/walk.hpp"

namespace qwd {

namespace {

constexpr double kTol = 1e-9;
const double kPi = std::numbers::pi;

[[noreturn]] void bad_point(const char* what, double T, double X) {
    throw std::domain_error(std::string(what) + " violated at (T=" + std::to_string(T) +
                            ", X=" + std::to_string(X) + ")");
}

bool near_multiple(double angle, double step) {
    const double q = std::round(angle / step);
    return std::abs(angle - q * step) <= kTol;
}

bool odd_half_multiple(double angle) {
    const long q = std::lround(angle / (kPi / 2));
    return q % 2 != 0 && std::abs(angle - q * kPi / 2) <= kTol;
}

void require_steps(const JetSpec& jet, int want, const char* who) {
    validate_jet(jet);
    if (jet.n_steps != want)
        throw std::invalid_argument(std::string(who) + ": jet has wrong stroboscope period");
}

std::function<double(double, double)> as_plain(const AngleFn& f) {
    return [f](double T, double X) { return f(T, X); };
}

std::function<double(double, double)> negated(const AngleFn& f) {
    return [f](double T, double X) { return -f(T, X); };
}

std::function<double(double, double)> const_field(double v) {
    return [v](double, double) { return v; };
}

} // namespace

DiracParams emit_s1_params(const JetSpec& jet) {
    require_steps(jet, 1, "emit_s1_params");
    DiracParams p;
    p.family = Family::S1;
    p.A0 = as_plain(jet.alpha_bar);
    p.A1 = negated(jet.xi_bar);
    auto check = [jet](double T, double X) {
        const double th = jet.theta0(T, X), xi = jet.xi0(T, X), al = jet.alpha0(T, X);
        if (!near_multiple(th, kPi) || !near_multiple(xi, kPi) || !near_multiple(al, kPi))
            bad_point("emit_s1_params: S1 zeroth-order constraint", T, X);
        return th + al;
    };
    p.mass_minus = [jet, check](double T, double X) -> cplx {
        const double phase = check(T, X);
        return cplx(0.0, -1.0) * jet.theta_bar(T, X) *
               std::polar(1.0, phase - jet.zeta0(T, X));
    };
    p.mass_plus = [jet, check](double T, double X) -> cplx {
        const double phase = check(T, X);
        return cplx(0.0, 1.0) * jet.theta_bar(T, X) *
               std::polar(1.0, phase + jet.zeta0(T, X));
    };
    p.GXX = const_field(-1.0);
    p.cos_theta = const_field(1.0);
    return p;
}

DiracParams emit_case22_params(const JetSpec& jet) {
    require_steps(jet, 2, "emit_case22_params");
    DiracParams p;
    p.family = Family::Case2_2;
    p.A0 = as_plain(jet.alpha_bar);
    p.A1 = negated(jet.xi_bar);
    auto check = [jet](double T, double X) {
        const double th = jet.theta0(T, X), xi = jet.xi0(T, X), al = jet.alpha0(T, X);
        const long qth = std::lround(th / (kPi / 2));
        if (std::abs(th - qth * kPi / 2) > kTol || qth % 2 != 0 ||
            !near_multiple(al, kPi / 2) || !near_multiple(xi - al, kPi))
            bad_point("emit_case22_params: case-2.2 zeroth-order constraint", T, X);
    };
    p.mass_minus = [jet, check](double T, double X) -> cplx {
        check(T, X);
        return cplx(0.0, -1.0) * jet.theta_bar(T, X) * std::cos(jet.xi0(T, X)) *
               std::polar(1.0, 2.0 * jet.alpha0(T, X) - jet.zeta0(T, X));
    };
    p.mass_plus = [jet, check](double T, double X) -> cplx {
        check(T, X);
        return cplx(0.0, 1.0) * jet.theta_bar(T, X) * std::cos(jet.xi0(T, X)) *
               std::polar(1.0, 2.0 * jet.alpha0(T, X) + jet.zeta0(T, X));
    };
    p.GXX = const_field(-1.0);
    p.cos_theta = const_field(1.0);
    return p;
}

DiracParams emit_case1_params(const JetSpec& jet) {
    require_steps(jet, 2, "emit_case1_params");
    auto cos_checked = [jet](double T, double X) {
        if (!odd_half_multiple(jet.xi0(T, X)) || !odd_half_multiple(jet.alpha0(T, X)))
            bad_point("emit_case1_params: case-1 zeroth-order constraint", T, X);
        const double c = std::cos(jet.theta0(T, X));
        if (!(c > 0.0)) bad_point("emit_case1_params: cos(theta) > 0", T, X);
        return c;
    };
    DiracParams p;
    p.family = Family::Case1;
    p.A0 = [jet, cos_checked](double T, double X) {
        const double c = cos_checked(T, X);
        return jet.alpha_bar(T, X) + 0.5 * (1.0 - c) * jet.zeta0.dX(T, X);
    };
    p.A1 = [jet, cos_checked](double T, double X) {
        const double c = cos_checked(T, X);
        return -jet.xi_bar(T, X) - (1.0 - c) / (2.0 * c) * jet.zeta0.dT(T, X);
    };
    p.mass_minus = [](double, double) { return cplx(0.0); };
    p.mass_plus = [](double, double) { return cplx(0.0); };
    p.GXX = [cos_checked](double T, double X) {
        const double c = cos_checked(T, X);
        return -1.0 / (c * c);
    };
    p.cos_theta = cos_checked;
    return p;
}

Case21System emit_case21_system(const JetSpec& jet) {
    require_steps(jet, 2, "emit_case21_system");
    return Case21System{jet.alpha_bar, jet.theta_bar, jet.zeta0, jet.xi0};
}

std::pair<cplx, cplx> case21_rhs(const Case21System& sys, double T, double X,
                                 cplx psiL, cplx psiR) {
    const double ab = sys.alpha_bar(T, X);
    const double tb = sys.theta_bar(T, X);
    const double ze = sys.zeta(T, X);
    const double zT = sys.zeta.dT(T, X), zX = sys.zeta.dX(T, X);
    const double cxi = std::cos(sys.xi(T, X));
    const cplx i(0.0, 1.0);
    const cplx dL = i * ab * psiL + 0.5 * i * (zT + zX) * psiL +
                    tb * std::polar(1.0, ze) * cxi * psiR;
    const cplx dR = i * ab * psiR - 0.5 * i * (zT - zX) * psiR -
                    tb * std::polar(1.0, -ze) * cxi * psiL;
    return {dL, dR};
}

namespace {

struct PmBasis {
    cplx a, b, c, d; // columns are b_minus, b_plus
};

PmBasis pm_matrix(double theta, double zeta, double xi0) {
    const double ch = std::cos(theta / 2), sh = std::sin(theta / 2);
    return PmBasis{ch, sh * std::polar(1.0, zeta + xi0),
                   sh * std::polar(1.0, xi0 - zeta), ch};
}

} // namespace

SpinorField rotate_to_pm_basis(const SpinorField& state, const std::vector<double>& theta,
                               const std::vector<double>& zeta, double xi0) {
    const int n = state.lat.n;
    if (static_cast<int>(theta.size()) != n || static_cast<int>(zeta.size()) != n)
        throw std::invalid_argument("rotate_to_pm_basis: angle array size mismatch");
    SpinorField pm(state.lat);
    for (int m = 0; m < n; ++m) {
        const PmBasis U = pm_matrix(theta[m], zeta[m], xi0);
        const cplx det = U.a * U.d - U.b * U.c;
        if (std::abs(det) < 1e-12)
            throw std::domain_error("rotate_to_pm_basis: degenerate basis");
        pm.L[m] = (U.d * state.L[m] - U.b * state.R[m]) / det;
        pm.R[m] = (-U.c * state.L[m] + U.a * state.R[m]) / det;
    }
    return pm;
}

SpinorField rotate_from_pm_basis(const SpinorField& pm, const std::vector<double>& theta,
                                 const std::vector<double>& zeta, double xi0) {
    const int n = pm.lat.n;
    if (static_cast<int>(theta.size()) != n || static_cast<int>(zeta.size()) != n)
        throw std::invalid_argument("rotate_from_pm_basis: angle array size mismatch");
    SpinorField state(pm.lat);
    for (int m = 0; m < n; ++m) {
        const PmBasis U = pm_matrix(theta[m], zeta[m], xi0);
        state.L[m] = U.a * pm.L[m] + U.b * pm.R[m];
        state.R[m] = U.c * pm.L[m] + U.d * pm.R[m];
    }
    return state;
}

namespace {

void require_band_limited(const SpinorField& state) {
    const int n = state.lat.n;
    Dft dft(n);
    double top = 0.0, all = 0.0;
    for (const auto* comp : {&state.L, &state.R}) {
        std::vector<cplx> hat = *comp;
        dft.forward(hat);
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(hat[i]);
            all = std::max(all, mag);
            if (3 * std::abs(Dft::mode(i, n)) >= n) top = std::max(top, mag);
        }
    }
    if (all == 0.0)
        throw std::invalid_argument("consistency_residual: test state is zero");
    if (top > 1e-10 * all)
        throw std::invalid_argument(
            "consistency_residual: test state is not band-limited (top third of spectrum)");
}

void require_zero_bar(const AngleFn& bar, const Lattice& lat, const char* name) {
    for (int m = 0; m < lat.n; ++m)
        if (std::abs(bar(0.0, lat.x(m))) > 1e-12)
            throw std::invalid_argument(
                std::string("consistency_residual: first-order slot of unconstrained angle ") +
                name + " must be zero");
}

// Rows of angle values on one time slice.
std::vector<double> sample_fn(const AngleFn& f, const Lattice& lat, double T) {
    std::vector<double> v(lat.n);
    for (int m = 0; m < lat.n; ++m) v[m] = f(T, lat.x(m));
    return v;
}

} // namespace

double consistency_residual(const JetSpec& jet, const SpinorField& test_state,
                            const Lattice& lat) {
    validate_jet(jet);
    if (!(test_state.lat == lat))
        throw std::invalid_argument("consistency_residual: state/lattice mismatch");
    require_band_limited(test_state);

    const LimitClass cls = classify_jet(jet, lattice_samples(lat, {0, jet.n_steps}));
    if (cls.tag == Family::NoLimit)
        throw std::domain_error("consistency_residual: jet has no continuous limit");

    require_zero_bar(jet.zeta_bar, lat, "zeta");
    if (cls.tag == Family::Case1) require_zero_bar(jet.theta_bar, lat, "theta");
    if (cls.tag == Family::Case2_1) require_zero_bar(jet.xi_bar, lat, "xi");

    const double eps = lat.dx();
    SpinorField evolved = test_state;
    evolve_s1(evolved, field_at_epsilon(jet, eps), 0, jet.n_steps);
    const double dT = jet.n_steps * eps;

    const int n = lat.n;
    double residual = 0.0;
    auto track = [&residual](cplx diff) { residual = std::max(residual, std::abs(diff)); };

    // Overlap jets with odd theta0 multiplier sit in case 2.1 (no transport);
    // the even-multiplier overlap is the massless flat case 2.2 below.
    if (cls.tag == Family::Case2_1 ||
        (cls.tag == Family::Overlap_1_and_2 && cls.k % 2 != 0)) {
        const Case21System sys = emit_case21_system(jet);
        for (int m = 0; m < n; ++m) {
            const auto [dL, dR] =
                case21_rhs(sys, 0.0, lat.x(m), test_state.L[m], test_state.R[m]);
            track((evolved.L[m] - test_state.L[m]) / dT - dL);
            track((evolved.R[m] - test_state.R[m]) / dT - dR);
        }
        return residual;
    }

    if (cls.tag == Family::Case1) {
        const DiracParams par = emit_case1_params(jet);
        const double xi0 = jet.xi0(0.0, lat.x(0));
        const SpinorField pm0 = rotate_to_pm_basis(test_state, sample_fn(jet.theta0, lat, 0.0),
                                                   sample_fn(jet.zeta0, lat, 0.0), xi0);
        const SpinorField pmn = rotate_to_pm_basis(evolved, sample_fn(jet.theta0, lat, dT),
                                                   sample_fn(jet.zeta0, lat, dT), xi0);
        const auto dMinus = spectral_derivative(pm0.L, lat.length);
        const auto dPlus = spectral_derivative(pm0.R, lat.length);
        const cplx i(0.0, 1.0);
        for (int m = 0; m < n; ++m) {
            const double X = lat.x(m);
            const double c = par.cos_theta(0.0, X);
            const double aT = par.A0(0.0, X), aX = par.A1(0.0, X);
            // d_X cos(theta) = -sin(theta) d_X theta
            const double dxc = -std::sin(jet.theta0(0.0, X)) * jet.theta0.dX(0.0, X);
            const cplx rhsM = c * dMinus[m] + i * (aT - c * aX) * pm0.L[m] + 0.5 * dxc * pm0.L[m];
            const cplx rhsP = -c * dPlus[m] + i * (aT + c * aX) * pm0.R[m] - 0.5 * dxc * pm0.R[m];
            track((pmn.L[m] - pm0.L[m]) / dT - rhsM);
            track((pmn.R[m] - pm0.R[m]) / dT - rhsP);
        }
        return residual;
    }

    // Flat families: S1, case 2.2, and the overlap (which is massless 2.2).
    const DiracParams par = cls.tag == Family::S1 ? emit_s1_params(jet)
                                                  : emit_case22_params(jet);
    const auto dL = spectral_derivative(test_state.L, lat.length);
    const auto dR = spectral_derivative(test_state.R, lat.length);
    const cplx i(0.0, 1.0);
    for (int m = 0; m < n; ++m) {
        const double X = lat.x(m);
        const double a0 = par.A0(0.0, X), a1 = par.A1(0.0, X);
        const cplx rhsL = dL[m] + i * (a0 - a1) * test_state.L[m] -
                          i * par.mass_plus(0.0, X) * test_state.R[m];
        const cplx rhsR = -dR[m] + i * (a0 + a1) * test_state.R[m] -
                          i * par.mass_minus(0.0, X) * test_state.L[m];
        track((evolved.L[m] - test_state.L[m]) / dT - rhsL);
        track((evolved.R[m] - test_state.R[m]) / dT - rhsR);
    }
    return residual;
}

} // namespace qwd
