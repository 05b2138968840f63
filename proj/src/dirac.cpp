#include "qwdirac/dirac.hpp"

#include <cmath>
#include <stdexcept>

#include "qwdirac/fourier.hpp"

namespace qwd {

namespace {

// exp(-i tau M) with M = [[0, m], [m, 0]], applied site by site
void mass_kick(SpinorField& s, double mass, double tau) {
    if (mass == 0.0) return;
    const double c = std::cos(mass * tau);
    const cplx is(0.0, -std::sin(mass * tau));
    for (int m = 0; m < s.lat.n; ++m) {
        const cplx l = s.L[m], r = s.R[m];
        s.L[m] = c * l + is * r;
        s.R[m] = is * l + c * r;
    }
}

void step_in_place(SpinorField& s, const FlatDiracConfig& cfg, const Dft& dft,
                   const std::vector<double>& ks, double T, double dt) {
    mass_kick(s, cfg.mass, dt / 2.0);
    dft.forward(s.L);
    dft.forward(s.R);
    const double a1 = -cfg.efield * (T + dt / 2.0);
    for (int i = 0; i < s.lat.n; ++i) {
        const double kappa = ks[i] - a1;
        s.L[i] *= std::polar(1.0, +kappa * dt);
        s.R[i] *= std::polar(1.0, -kappa * dt);
    }
    dft.inverse(s.L);
    dft.inverse(s.R);
    mass_kick(s, cfg.mass, dt / 2.0);
}

} // namespace

std::array<cplx, 2> positive_energy_spinor(double k, double mass) {
    const double e = std::hypot(k, mass);
    // two algebraically equivalent eigenvector forms; pick the one whose
    // large entry does not cancel
    double up, lo;
    if (k >= 0.0) {
        up = mass;
        lo = k + e;
    } else {
        up = e - k;
        lo = mass;
    }
    const double nrm = std::hypot(up, lo);
    if (nrm == 0.0) return {cplx(1.0), cplx(0.0)}; // k = mass = 0: H vanishes
    up /= nrm;
    lo /= nrm;
    if (up < 0.0 || (up == 0.0 && lo < 0.0)) {
        up = -up;
        lo = -lo;
    }
    return {cplx(up), cplx(lo)};
}

SpinorField positive_energy_packet(double k0, double sigmaX, double mass,
                                   const Lattice& lat, std::optional<double> center) {
    if (!(sigmaX >= 4.0 * lat.dx()))
        throw std::invalid_argument(
            "positive_energy_packet: sigmaX under-resolved, need sigmaX >= 4 dx");
    const double x0 = center.value_or(lat.length / 2.0);
    const std::vector<double> ks = fourier_wavenumbers(lat);
    SpinorField psi(lat);
    for (int i = 0; i < lat.n; ++i) {
        const double k = ks[i];
        const double g = std::exp(-(k - k0) * (k - k0) * sigmaX * sigmaX);
        const auto v = positive_energy_spinor(k, mass);
        const cplx amp = std::polar(g, -k * x0);
        psi.L[i] = amp * v[0];
        psi.R[i] = amp * v[1];
    }
    Dft dft(lat.n);
    dft.inverse(psi.L);
    dft.inverse(psi.R);
    const double nrm = std::sqrt(psi.norm_sq());
    if (nrm == 0.0)
        throw std::invalid_argument("positive_energy_packet: packet has zero norm");
    for (int m = 0; m < lat.n; ++m) {
        psi.L[m] /= nrm;
        psi.R[m] /= nrm;
    }
    return psi;
}

SpinorField dirac_step_flat(const SpinorField& state, const FlatDiracConfig& cfg,
                            double T, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dirac_step_flat: dt must be positive");
    if (!(state.lat == cfg.lattice))
        throw std::invalid_argument("dirac_step_flat: state and config lattices differ");

    SpinorField out = state;
    const Dft dft(out.lat.n);
    step_in_place(out, cfg, dft, fourier_wavenumbers(out.lat), T, dt);
    return out;
}

SpinorField evolve_dirac_flat(const SpinorField& state, const FlatDiracConfig& cfg,
                              double T0, int n_steps, double dt) {
    if (n_steps < 0) throw std::invalid_argument("evolve_dirac_flat: negative step count");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_dirac_flat: dt must be positive");
    if (!(state.lat == cfg.lattice))
        throw std::invalid_argument("evolve_dirac_flat: state and config lattices differ");
    SpinorField cur = state;
    const Dft dft(cur.lat.n);
    const std::vector<double> ks = fourier_wavenumbers(cur.lat);
    for (int j = 0; j < n_steps; ++j) step_in_place(cur, cfg, dft, ks, T0 + j * dt, dt);
    return cur;
}

DensityField density_of(const SpinorField& psi) { return DensityField{psi.lat, psi.density()}; }

double delta_n_rel(const DensityField& nqw, const DensityField& nd) {
    if (nqw.N.size() != nd.N.size())
        throw std::invalid_argument("delta_n_rel: density lengths differ");
    if (nd.N.empty()) throw std::invalid_argument("delta_n_rel: empty densities");
    double acc = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < nd.N.size(); ++i) {
        const double d = nqw.N[i] - nd.N[i];
        acc += d * d;
        mean += nd.N[i];
    }
    const double count = static_cast<double>(nd.N.size());
    mean /= count;
    if (mean == 0.0) throw std::invalid_argument("delta_n_rel: reference density vanishes");
    return std::sqrt(acc / count) / mean;
}

} // namespace qwd
