#ifndef QWDIRAC_DIRAC_HPP
#define QWDIRAC_DIRAC_HPP

#include <array>
#include <optional>

#include "qwdirac/lattice.hpp"

namespace qwd {

// Flat-space Dirac dynamics in the temporal gauge: A_0 = 0, A_1 = -E*T.
// Per Fourier mode the equation is i d_T psi_hat = H(k) psi_hat with
//
//   H(k) = [ -(k - A_1)     mass     ]
//          [    mass      +(k - A_1) ]
//
// No other gauge is accepted by this solver.
struct FlatDiracConfig {
    double mass = 0.0;   // continuum mass, signed
    double efield = 0.0; // constant electric field E
    Lattice lattice;
};

// Unit positive-energy eigenvector of the free symbol H(k) at efield = 0,
// eigenvalue +sqrt(k^2 + mass^2). The overall phase is fixed by making the
// upper component real and non-negative (the lower one when the upper
// vanishes).
std::array<cplx, 2> positive_energy_spinor(double k, double mass);

// Gaussian wave packet of positive-energy modes: Fourier amplitude
// exp(-(k - k0)^2 sigmaX^2) times positive_energy_spinor(k), localized at
// `center` (the lattice midpoint when omitted), unit total probability.
// sigmaX must be at least 4 dx or the packet is spectrally under-resolved.
SpinorField positive_energy_packet(double k0, double sigmaX, double mass,
                                   const Lattice& lat,
                                   std::optional<double> center = std::nullopt);

// One Strang step from T to T + dt: half mass kick per site, exact Fourier
// advection with A_1 frozen at the midpoint T + dt/2, half mass kick.
// Unitary up to rounding.
SpinorField dirac_step_flat(const SpinorField& state, const FlatDiracConfig& cfg,
                            double T, double dt);

// n_steps Strang steps of size dt starting at time T0.
SpinorField evolve_dirac_flat(const SpinorField& state, const FlatDiracConfig& cfg,
                              double T0, int n_steps, double dt);

DensityField density_of(const SpinorField& psi);

// sqrt(<(N_qw - N_d)^2>) / <N_d>, averages over collocation points.
double delta_n_rel(const DensityField& nqw, const DensityField& nd);

} // namespace qwd

#endif
