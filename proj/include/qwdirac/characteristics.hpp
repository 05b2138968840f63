#ifndef QWDIRAC_CHARACTERISTICS_HPP
#define QWDIRAC_CHARACTERISTICS_HPP

#include <functional>
#include <utility>
#include <vector>

namespace qwd {

// Walk angle theta(T, X). Implementations throw std::domain_error outside
// their domain of definition.
using ThetaField = std::function<double(double, double)>;

// Slopes dX/dT of the left and right null characteristics, (-cos theta,
// +cos theta). Throws std::domain_error when cos theta <= 0.
std::pair<double, double> characteristic_speed(double T, double X, const ThetaField& theta);

struct GeodesicPath {
    int branch = +1;           // +1 right-moving, -1 left-moving
    std::vector<double> T, X;  // sampled trajectory, T[0] = 0
    bool hit_boundary = false; // stopped at the field's domain edge before T_max
};

// One classical RK4 step of dX/dT = branch * cos(theta(T, X)); returns the
// new X. Exposed separately so order-of-convergence checks can drive fixed
// step sizes.
double characteristic_rk4_step(const ThetaField& theta, int branch, double T, double X,
                               double h);

// Integrate dX/dT = branch * cos(theta) from (T=0, X0) until T_max, recording
// a sample every dt. Internally each stretch is advanced with step-doubling
// error control, halving the step until the estimate is below 1e-8 per unit
// time. If the path leaves the field's domain (theta throws, or cos theta
// drops to zero at a singularity), the crossing is located by bisection, the
// boundary point becomes the final sample, and hit_boundary is set.
GeodesicPath integrate_characteristic(double X0, int branch, const ThetaField& theta,
                                      double T_max, double dt);

} // namespace qwd

#endif
