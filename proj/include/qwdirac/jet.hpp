#ifndef QWDIRAC_JET_HPP
#define QWDIRAC_JET_HPP

#include <vector>

#include "qwdirac/coin.hpp"
#include "qwdirac/lattice.hpp"

namespace qwd {

// A 1-jet of coin angles: each angle is a zeroth-order field plus a
// first-order perturbation scaled by the lattice spacing,
//
//   theta(eps; T, X) = theta0(T, X) + eps * theta_bar(T, X)
//
// and likewise for xi, zeta, alpha. n_steps is the stroboscope period: the
// walk is observed every n_steps steps, and the continuous limit is taken for
// that composed map. Only n_steps 1 and 2 are supported.
//
// The exponents delta/omega/beta/gamma/eta scale the five first-order terms
// of the expansion; only the common value 1 is supported, which is the
// scaling that retains every term in the limit equations.
//
// Angles that a family leaves unconstrained (zeta always; theta in case 1; xi
// in case 2.1) are carried entirely in the zeroth-order slot, and their
// first-order slot must be identically zero. consistency_residual enforces
// this on the grid it runs on.
struct JetSpec {
    int n_steps = 1;

    AngleFn theta0 = constant_fn(0.0);
    AngleFn xi0 = constant_fn(0.0);
    AngleFn zeta0 = constant_fn(0.0);
    AngleFn alpha0 = constant_fn(0.0);

    AngleFn theta_bar = constant_fn(0.0);
    AngleFn xi_bar = constant_fn(0.0);
    AngleFn zeta_bar = constant_fn(0.0);
    AngleFn alpha_bar = constant_fn(0.0);

    double delta = 1.0, omega = 1.0, beta = 1.0, gamma = 1.0, eta = 1.0;
};

// Throws std::invalid_argument if n_steps or the exponents are unsupported
// or any angle function is unset.
void validate_jet(const JetSpec& jet);

// Concrete coin angles at a given lattice spacing eps.
AngleField field_at_epsilon(const JetSpec& jet, double eps);

enum class Family { S1, Case1, Case2_1, Case2_2, Overlap_1_and_2, NoLimit };

const char* family_name(Family f);

// Classification result. Which integer slots are meaningful depends on tag:
//
//   S1:        theta0 = k pi, xi0 = (k_plus - k_minus) pi,
//              alpha0 = (k + k_plus + k_minus) pi
//   Case1:     xi0 = (2k + 1) pi/2, alpha0 = (2 k_prime + 1) pi/2
//   Case2_1:   theta0 = k pi/2 with k odd, alpha0 = (2 k_prime + 1) pi/2
//   Case2_2:   theta0 = k pi/2 with k even, alpha0 = k_prime pi/2,
//              xi0 = alpha0 + k_dprime pi
//   Overlap_1_and_2: reported in case-2.2 form (the case-1 integers follow
//              from xi0 = alpha0 + k_dprime pi)
//
// Integers are canonicalized by reducing each zeroth-order angle modulo
// 2 pi, which makes the result invariant under adding whole turns.
struct LimitClass {
    Family tag = Family::NoLimit;
    int k = 0;
    int k_plus = 0;
    int k_minus = 0;
    int k_prime = 0;
    int k_dprime = 0;
};

struct SamplePoint {
    double T = 0.0;
    double X = 0.0;
};

// Checks the zeroth-order constraints at every sample (distance to the
// admissible multiple of pi or pi/2, absolute tolerance 1e-9) and returns the
// family:
//
//   n_steps = 1: theta0, xi0, alpha0 integer multiples of pi with
//                alpha0 = (k + k_plus + k_minus) pi  ->  S1
//   n_steps = 2: cos(xi0) = 0 and cos(alpha0) = 0        -> case 1
//                theta0 = k pi/2, k odd, cos(alpha0) = 0 -> case 2.1
//                theta0 = k pi/2, k even, alpha0 = k' pi/2,
//                xi0 - alpha0 = k'' pi                   -> case 2.2
//
// A sample failing every applicable constraint set makes the whole jet
// NoLimit. Samples that are individually admissible but do not share a
// common family (or whose canonical integers differ) throw
// std::runtime_error: the limit genuinely changes across the sampled domain.
// Jets admissible as both case 1 and case 2 everywhere return
// Overlap_1_and_2.
LimitClass classify_jet(const JetSpec& jet, const std::vector<SamplePoint>& samples);

// The (T, X) points of the given lattice rows, convenient sample sets for
// classify_jet.
std::vector<SamplePoint> lattice_samples(const Lattice& lat, const std::vector<int>& rows);

} // namespace qwd

#endif
