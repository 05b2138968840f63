#include "qwdirac/walk.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace qwd {

void step_s1_into(const SpinorField& in, const CoinRow& coins, SpinorField& out) {
    const int n = in.lat.n;
    if (n == 0) throw std::invalid_argument("step_s1: empty state");
    if (!coins.uniform && static_cast<int>(coins.B.size()) != n)
        throw std::invalid_argument("step_s1: coin row size does not match lattice");
    out.lat = in.lat;
    out.L.resize(n);
    out.R.resize(n);
    for (int m = 0; m < n; ++m) {
        const int mp = m + 1 == n ? 0 : m + 1;
        const int mm = m == 0 ? n - 1 : m - 1;
        const CoinMatrix& B = coins.at(m);
        const cplx l = in.L[mp];
        const cplx r = in.R[mm];
        out.L[m] = B.a * l + B.b * r;
        out.R[m] = B.c * l + B.d * r;
    }
}

SpinorField step_s1(const SpinorField& in, const CoinRow& coins) {
    SpinorField out;
    step_s1_into(in, coins, out);
    return out;
}

SpinorField step_s1(const SpinorField& in, const AngleField& field, int j) {
    return step_s1(in, build_coin_row(field, in.lat, j));
}

void evolve_s1(SpinorField& state, const AngleField& field, int j0, int nsteps) {
    if (nsteps < 0) throw std::invalid_argument("evolve_s1: nsteps must be >= 0");
    SpinorField scratch(state.lat);
    for (int s = 0; s < nsteps; ++s) {
        const CoinRow coins = build_coin_row(field, state.lat, j0 + s);
        step_s1_into(state, coins, scratch);
        std::swap(state.L, scratch.L);
        std::swap(state.R, scratch.R);
    }
}

S2Coefficients build_s2_coefficients(const AngleField& field, const Lattice& lat, int j) {
    const AngleRow r0 = sample_angles(field, lat, j);
    const AngleRow r1 = sample_angles(field, lat, j + 1);
    const int n = lat.n;

    S2Coefficients co;
    co.n = n;
    for (auto* v : {&co.AL, &co.BL, &co.CL, &co.DL, &co.AR, &co.BR, &co.CR, &co.DR})
        v->resize(n);

    for (int m = 0; m < n; ++m) {
        const int mp = m + 1 == n ? 0 : m + 1;
        const int mm = m == 0 ? n - 1 : m - 1;

        const double c1 = std::cos(r1.theta[m]), s1 = std::sin(r1.theta[m]);
        const double c0p = std::cos(r0.theta[mp]), s0p = std::sin(r0.theta[mp]);
        const double c0m = std::cos(r0.theta[mm]), s0m = std::sin(r0.theta[mm]);

        // Phases of the row-(j+1) coin at m and of the row-j coins at m+1 and
        // m-1, split by which matrix entry they enter through.
        const double a1 = r1.alpha[m], x1 = r1.xi[m], z1 = r1.zeta[m];
        const double a0p = r0.alpha[mp], x0p = r0.xi[mp], z0p = r0.zeta[mp];
        const double a0m = r0.alpha[mm], x0m = r0.xi[mm], z0m = r0.zeta[mm];

        co.AL[m] = c1 * c0p * std::polar(1.0, a1 + x1 + a0p + x0p);
        co.BL[m] = -s1 * s0m * std::polar(1.0, a1 + z1 + a0m - z0m);
        co.CL[m] = c1 * s0p * std::polar(1.0, a1 + x1 + a0p + z0p);
        co.DL[m] = s1 * c0m * std::polar(1.0, a1 + z1 + a0m - x0m);

        co.AR[m] = -s1 * c0p * std::polar(1.0, a1 - z1 + a0p + x0p);
        co.BR[m] = -c1 * s0m * std::polar(1.0, a1 - x1 + a0m - z0m);
        co.CR[m] = -s1 * s0p * std::polar(1.0, a1 - z1 + a0p + z0p);
        co.DR[m] = c1 * c0m * std::polar(1.0, a1 - x1 + a0m - x0m);
    }
    return co;
}

SpinorField step_s2(const SpinorField& in, const S2Coefficients& co) {
    const int n = in.lat.n;
    if (co.n != n)
        throw std::invalid_argument("step_s2: coefficient size does not match lattice");
    SpinorField out(in.lat);
    for (int m = 0; m < n; ++m) {
        const int mp2 = (m + 2) % n;
        const int mm2 = (m - 2 + n) % n;
        const cplx lp = in.L[mp2], l0 = in.L[m];
        const cplx r0 = in.R[m], rm = in.R[mm2];
        out.L[m] = co.AL[m] * lp + co.BL[m] * l0 + co.CL[m] * r0 + co.DL[m] * rm;
        out.R[m] = co.AR[m] * lp + co.BR[m] * l0 + co.CR[m] * r0 + co.DR[m] * rm;
    }
    return out;
}

SpinorField gauge_transform(const SpinorField& in, const GaugePhase& phase, int j) {
    if (!phase.phi) throw std::invalid_argument("gauge_transform: phase not set");
    SpinorField out(in.lat);
    for (int m = 0; m < in.lat.n; ++m) {
        const cplx f = std::polar(1.0, -phase.phi(j, m));
        out.L[m] = in.L[m] * f;
        out.R[m] = in.R[m] * f;
    }
    return out;
}

AngleField gauge_transform_angles(const AngleField& base, const GaugePhase& phase,
                                  const Lattice& lat) {
    if (!phase.phi) throw std::invalid_argument("gauge_transform_angles: phase not set");
    auto bound_only = [](double, double) -> double {
        throw std::logic_error("gauge-transformed angles are lattice-bound; use sample_angles");
    };
    AngleField out;
    out.theta = make_fn(bound_only);
    out.xi = make_fn(bound_only);
    out.zeta = make_fn(bound_only);
    out.alpha = make_fn(bound_only);
    out.space_uniform = false;
    out.row_override = [base, phase, lat](const Lattice& l, int j) {
        if (!(l == lat))
            throw std::invalid_argument("gauge_transform_angles: lattice mismatch");
        AngleRow row = sample_angles(base, l, j);
        for (int m = 0; m < l.n; ++m) {
            const int mp = m + 1 == l.n ? 0 : m + 1;
            const int mm = m == 0 ? l.n - 1 : m - 1;
            const double sigma = phase.phi(j, mp) + phase.phi(j, mm) - 2.0 * phase.phi(j + 1, m);
            const double delta = 0.5 * (phase.phi(j, mp) - phase.phi(j, mm));
            row.alpha[m] += 0.5 * sigma;
            row.xi[m] += delta;
            row.zeta[m] -= delta;
        }
        return row;
    };
    return out;
}

SpinorField random_state(const Lattice& lat, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpinorField psi(lat);
    for (int m = 0; m < lat.n; ++m) {
        psi.L[m] = cplx(gauss(rng), gauss(rng));
        psi.R[m] = cplx(gauss(rng), gauss(rng));
    }
    const double norm = std::sqrt(psi.norm_sq());
    for (int m = 0; m < lat.n; ++m) {
        psi.L[m] /= norm;
        psi.R[m] /= norm;
    }
    return psi;
}

} // namespace qwd
