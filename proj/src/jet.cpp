#include "qwdirac/jet.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace qwd {

namespace {

constexpr double kTol = 1e-9;
const double kPi = std::numbers::pi;

// angle = q * step + r with |r| minimal; admissible when |r| <= kTol.
bool near_multiple(double angle, double step, long& q) {
    q = std::lround(angle / step);
    return std::abs(angle - static_cast<double>(q) * step) <= kTol;
}

// Reduce the multiplier q of `step` modulo one full turn.
int canonical(long q, double step) {
    const long per_turn = std::lround(2.0 * kPi / step);
    long r = q % per_turn;
    if (r < 0) r += per_turn;
    return static_cast<int>(r);
}

struct S1Tags {
    int k, b, a; // theta0 = k pi, xi0 = b pi, alpha0 = a pi, reduced mod 2
};

std::optional<S1Tags> s1_tags(double th, double xi, double al) {
    long k, b, a;
    if (!near_multiple(th, kPi, k) || !near_multiple(xi, kPi, b) ||
        !near_multiple(al, kPi, a))
        return std::nullopt;
    if ((a - k - b) % 2 != 0) return std::nullopt;
    return S1Tags{canonical(k, kPi), canonical(b, kPi), canonical(a, kPi)};
}

struct S2Tags {
    bool case1 = false, case21 = false, case22 = false;
    int xi_k = 0, al_k = 0;           // case 1: xi0, alpha0 as multiples of pi/2
    int th_k = 0;                     // case 2: theta0 as multiple of pi/2
    int al21_k = 0;                   // case 2.1: alpha0 as multiple of pi/2
    int al22_k = 0, xi22_k = 0;       // case 2.2: alpha0 (pi/2), xi0-alpha0 (pi)
};

S2Tags s2_tags(double th, double xi, double al) {
    S2Tags t;
    long qxi, qal;
    const bool xi_half = near_multiple(xi, kPi / 2, qxi);
    const bool al_half = near_multiple(al, kPi / 2, qal);

    if (xi_half && qxi % 2 != 0 && al_half && qal % 2 != 0) {
        t.case1 = true;
        t.xi_k = canonical(qxi, kPi / 2);
        t.al_k = canonical(qal, kPi / 2);
    }
    long qth;
    if (near_multiple(th, kPi / 2, qth)) {
        if (qth % 2 != 0) {
            if (al_half && qal % 2 != 0) {
                t.case21 = true;
                t.th_k = canonical(qth, kPi / 2);
                t.al21_k = canonical(qal, kPi / 2);
            }
        } else {
            long qd;
            if (al_half && near_multiple(xi - al, kPi, qd)) {
                t.case22 = true;
                t.th_k = canonical(qth, kPi / 2);
                t.al22_k = canonical(qal, kPi / 2);
                t.xi22_k = canonical(qd, kPi);
            }
        }
    }
    return t;
}

[[noreturn]] void mixed_error(double T, double X) {
    throw std::runtime_error(
        "classify_jet: limit family or integer parameters change across samples "
        "(near T=" + std::to_string(T) + ", X=" + std::to_string(X) + ")");
}

} // namespace

void validate_jet(const JetSpec& jet) {
    if (jet.n_steps != 1 && jet.n_steps != 2)
        throw std::invalid_argument("jet: n_steps must be 1 or 2");
    for (double e : {jet.delta, jet.omega, jet.beta, jet.gamma, jet.eta})
        if (e != 1.0)
            throw std::invalid_argument("jet: only the scaling with all exponents = 1 is supported");
    for (const AngleFn* f : {&jet.theta0, &jet.xi0, &jet.zeta0, &jet.alpha0,
                             &jet.theta_bar, &jet.xi_bar, &jet.zeta_bar, &jet.alpha_bar})
        if (!f->f) throw std::invalid_argument("jet: angle function not set");
}

namespace {

AngleFn jet_angle(const AngleFn& zero, const AngleFn& bar, double eps) {
    AngleFn out;
    out.f = [zero, bar, eps](double T, double X) { return zero.f(T, X) + eps * bar.f(T, X); };
    if (zero.fdT && bar.fdT)
        out.fdT = [zero, bar, eps](double T, double X) {
            return zero.fdT(T, X) + eps * bar.fdT(T, X);
        };
    if (zero.fdX && bar.fdX)
        out.fdX = [zero, bar, eps](double T, double X) {
            return zero.fdX(T, X) + eps * bar.fdX(T, X);
        };
    return out;
}

} // namespace

AngleField field_at_epsilon(const JetSpec& jet, double eps) {
    validate_jet(jet);
    if (!(eps > 0.0)) throw std::invalid_argument("jet: eps must be positive");
    AngleField field;
    field.theta = jet_angle(jet.theta0, jet.theta_bar, eps);
    field.xi = jet_angle(jet.xi0, jet.xi_bar, eps);
    field.zeta = jet_angle(jet.zeta0, jet.zeta_bar, eps);
    field.alpha = jet_angle(jet.alpha0, jet.alpha_bar, eps);
    field.space_uniform = false;
    return field;
}

const char* family_name(Family f) {
    switch (f) {
        case Family::S1: return "S1";
        case Family::Case1: return "Case1";
        case Family::Case2_1: return "Case2_1";
        case Family::Case2_2: return "Case2_2";
        case Family::Overlap_1_and_2: return "Overlap_1_and_2";
        case Family::NoLimit: return "NoLimit";
    }
    return "?";
}

LimitClass classify_jet(const JetSpec& jet, const std::vector<SamplePoint>& samples) {
    validate_jet(jet);
    if (samples.empty())
        throw std::invalid_argument("classify_jet: samples must be non-empty");

    if (jet.n_steps == 1) {
        std::optional<S1Tags> ref;
        for (const auto& s : samples) {
            const auto tags =
                s1_tags(jet.theta0(s.T, s.X), jet.xi0(s.T, s.X), jet.alpha0(s.T, s.X));
            if (!tags) return LimitClass{Family::NoLimit};
            if (!ref) {
                ref = tags;
            } else if (tags->k != ref->k || tags->b != ref->b || tags->a != ref->a) {
                mixed_error(s.T, s.X);
            }
        }
        LimitClass out;
        out.tag = Family::S1;
        out.k = ref->k;
        out.k_minus = (ref->a - ref->b - ref->k) / 2;
        out.k_plus = ref->b + out.k_minus;
        return out;
    }

    // n_steps == 2: collect the viable families common to every sample.
    bool c1 = true, c21 = true, c22 = true;
    std::optional<S2Tags> ref;
    for (const auto& s : samples) {
        const S2Tags t =
            s2_tags(jet.theta0(s.T, s.X), jet.xi0(s.T, s.X), jet.alpha0(s.T, s.X));
        if (!t.case1 && !t.case21 && !t.case22) return LimitClass{Family::NoLimit};
        if (!ref) ref = t;
        // A family stays viable only while its constraints hold with the same
        // canonical integers as at the first sample.
        c1 = c1 && t.case1 && ref->case1 && t.xi_k == ref->xi_k && t.al_k == ref->al_k;
        c21 = c21 && t.case21 && ref->case21 && t.th_k == ref->th_k && t.al21_k == ref->al21_k;
        c22 = c22 && t.case22 && ref->case22 && t.th_k == ref->th_k &&
              t.al22_k == ref->al22_k && t.xi22_k == ref->xi22_k;
    }
    if (!c1 && !c21 && !c22) mixed_error(samples.back().T, samples.back().X);

    LimitClass out;
    if (c1 && (c21 || c22)) {
        out.tag = Family::Overlap_1_and_2;
        out.k = ref->th_k;
        out.k_prime = c22 ? ref->al22_k : ref->al21_k;
        out.k_dprime = c22 ? ref->xi22_k : 0;
    } else if (c1) {
        out.tag = Family::Case1;
        out.k = (ref->xi_k - 1) / 2;
        out.k_prime = (ref->al_k - 1) / 2;
    } else if (c21) {
        out.tag = Family::Case2_1;
        out.k = ref->th_k;
        out.k_prime = (ref->al21_k - 1) / 2;
    } else {
        out.tag = Family::Case2_2;
        out.k = ref->th_k;
        out.k_prime = ref->al22_k;
        out.k_dprime = ref->xi22_k;
    }
    return out;
}

std::vector<SamplePoint> lattice_samples(const Lattice& lat, const std::vector<int>& rows) {
    std::vector<SamplePoint> pts;
    pts.reserve(rows.size() * static_cast<size_t>(lat.n));
    for (int j : rows)
        for (int m = 0; m < lat.n; ++m) pts.push_back({lat.t(j), lat.x(m)});
    return pts;
}

} // namespace qwd
