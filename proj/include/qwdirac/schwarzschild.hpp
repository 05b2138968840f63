#ifndef QWDIRAC_SCHWARZSCHILD_HPP
#define QWDIRAC_SCHWARZSCHILD_HPP

#include "qwdirac/characteristics.hpp"
#include "qwdirac/coin.hpp"
#include "qwdirac/jet.hpp"

namespace qwd {

// Lemaitre-coordinate Schwarzschild geometry, radial sector only. The walk
// coordinates (T, X) relate to the dimensionless Lemaitre pair through the
// scaling lambda; the radius map is
//   r(T, X) = [3/2 (X/lambda - T)]^(2/3) r_g^(1/3),
// defined for X >= lambda T.
struct SchwarzschildConfig {
    double r_g = 1.0;    // gravitational radius
    double lambda = 1.0; // coordinate scaling
};

double radius(double T, double X, const SchwarzschildConfig& cfg);

// Singularity locus r = 0: X = lambda T.
double singularity_position(double T, const SchwarzschildConfig& cfg);

// Event horizon r = r_g: X = lambda T + (2/3) lambda r_g.
double horizon_position(double T, const SchwarzschildConfig& cfg);

// Right edge of the walk domain D (r = r_g/lambda^2, where -g_XX drops to 1):
// X = lambda T + 2 r_g / (3 lambda^2). Coincides with the horizon for
// lambda = 1.
double domain_edge_position(double T, const SchwarzschildConfig& cfg);

// D: lambda T <= X <= lambda T + 2 r_g/(3 lambda^2), boundaries included.
bool in_domain(double T, double X, const SchwarzschildConfig& cfg);

// Metric component g_XX = -r_g / (lambda^2 r). Diverges on the singularity
// locus, which is rejected.
double g_xx(double T, double X, const SchwarzschildConfig& cfg);

// Walk angle: cos(theta) = lambda sqrt(r/r_g), theta in [0, pi/2]. Rejects
// points outside D; a 1e-12 guard band absorbs roundoff exactly on the loci.
double walk_theta(double T, double X, const SchwarzschildConfig& cfg);

// walk_theta with analytic derivatives, as an angle function; x_offset shifts
// the spatial origin so a small periodic window can sit anywhere inside D.
// The derivatives diverge on the loci (theta is a square root there).
AngleFn schwarzschild_theta_angle(const SchwarzschildConfig& cfg, double x_offset = 0.0);

// walk_theta bound for the characteristics integrator.
ThetaField schwarzschild_theta_field(const SchwarzschildConfig& cfg);

// Jet with theta0 = walk_theta, zeta0 = pi/2, xi0 = alpha0 = pi/2 and no
// first-order perturbations; classifies as case 1 on samples strictly inside
// D away from the singularity, with GXX = -r_g/(lambda^2 r) and vanishing
// potentials.
JetSpec make_schwarzschild_jet(const SchwarzschildConfig& cfg);

} // namespace qwd

#endif
