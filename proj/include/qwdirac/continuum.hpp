#ifndef QWDIRAC_CONTINUUM_HPP
#define QWDIRAC_CONTINUUM_HPP

#include <utility>

#include "qwdirac/jet.hpp"

namespace qwd {

// Coefficients of the limit equation in the representation gamma0 = sigma1,
// gamma1 = i sigma2 (so gamma0 gamma1 = -sigma3):
//
//   (i gamma^0 D_0 + i gamma^1 D_1 - M) Psi = 0,   D_mu = d_mu - i A_mu
//
// with M = diag(mass_minus, mass_plus). Componentwise, for the flat families
// (S1, case 2.2, overlap):
//
//   d_T psi^L = +d_X psi^L + i (A0 - A1) psi^L - i mass_plus  psi^R
//   d_T psi^R = -d_X psi^R + i (A0 + A1) psi^R - i mass_minus psi^L
//
// Case 1 is massless with the curved covariant metric G = diag(1, GXX),
// GXX = -1/cos^2(theta), and transport speed cos_theta along the diad.
// All coefficient fields are functions of (T, X).
struct DiracParams {
    Family family = Family::NoLimit;
    std::function<double(double, double)> A0, A1;
    std::function<cplx(double, double)> mass_minus, mass_plus;
    std::function<double(double, double)> GXX;
    std::function<double(double, double)> cos_theta;
};

// Emitters for the three families whose limits are (curved) Dirac equations.
// Structural mismatches (wrong n_steps) throw std::invalid_argument
// immediately; the zeroth-order admissibility of the angles is re-checked
// lazily inside the returned coefficient functions at each evaluated (T, X),
// throwing std::domain_error when violated there. Case 1 additionally
// requires cos(theta) > 0 at every evaluated point.
DiracParams emit_s1_params(const JetSpec& jet);
DiracParams emit_case1_params(const JetSpec& jet);
DiracParams emit_case22_params(const JetSpec& jet);

// Case 2.1 has no transport: at each X the state obeys the ODE system
//
//   d_T psi^L = i alpha_bar psi^L + (i/2)(d_+ zeta) psi^L
//               + theta_bar e^{+i zeta} cos(xi) psi^R
//   d_T psi^R = i alpha_bar psi^R - (i/2)(d_- zeta) psi^R
//               - theta_bar e^{-i zeta} cos(xi) psi^L
//
// with d_pm = d_T +- d_X. zeta and xi are full functions of (T, X).
struct Case21System {
    AngleFn alpha_bar, theta_bar, zeta, xi;
};

Case21System emit_case21_system(const JetSpec& jet);

// Right-hand side of the case-2.1 system: d/dT of (psi^L, psi^R) at (T, X).
std::pair<cplx, cplx> case21_rhs(const Case21System& sys, double T, double X,
                                 cplx psiL, cplx psiR);

// Change of spin basis to the eigenvectors of the case-1 transport operator:
//
//   b_minus = (cos(theta/2),                e^{i(xi0 - zeta)} sin(theta/2))
//   b_plus  = (e^{i(zeta + xi0)} sin(theta/2),              cos(theta/2))
//
// The returned field stores psi_minus in the L slot and psi_plus in the R
// slot. theta and zeta are per-site arrays (one time slice); xi0 is the
// constant case-1 angle. The basis is orthonormal exactly when cos(xi0) = 0;
// coordinates are computed with the exact matrix inverse, so the round trip
// is the identity whenever the basis is nondegenerate. A singular basis
// (|det| < 1e-12) throws std::domain_error.
SpinorField rotate_to_pm_basis(const SpinorField& state, const std::vector<double>& theta,
                               const std::vector<double>& zeta, double xi0);
SpinorField rotate_from_pm_basis(const SpinorField& pm, const std::vector<double>& theta,
                                 const std::vector<double>& zeta, double xi0);

// Finite-difference check that the walk approaches its limit equation. Runs
// the jet at eps = lat.dx() for n_steps steps from test_state and returns
//
//   max | (Psi_{n_steps} - Psi_0) / (n_steps eps) - RHS(Psi_0) |
//
// with the right-hand side assembled from the emitted parameters of the
// jet's family (spatial derivatives are spectral; case 1 is evaluated in the
// +- basis, each slice rotated with its own-time basis). The value is O(eps)
// for a jet with a limit. Requires test_state to be band-limited: the top
// third of its spectrum must be empty (relative magnitude < 1e-10).
// Throws std::domain_error for NoLimit jets and std::invalid_argument for
// violated band limits or nonzero first-order slots of unconstrained angles.
double consistency_residual(const JetSpec& jet, const SpinorField& test_state,
                            const Lattice& lat);

} // namespace qwd

#endif
