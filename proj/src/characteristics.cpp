#include "qwdirac/characteristics.hpp"

#include <cmath>
#include <stdexcept>

namespace qwd {

namespace {

constexpr double kTolPerUnitT = 1e-8;

double slope(const ThetaField& theta, int branch, double T, double X) {
    const auto [l, r] = characteristic_speed(T, X, theta);
    return branch < 0 ? l : r;
}

// advance by h with two half steps; throws if any stage leaves the domain
double two_half_steps(const ThetaField& theta, int branch, double T, double X, double h) {
    const double mid = characteristic_rk4_step(theta, branch, T, X, h / 2);
    return characteristic_rk4_step(theta, branch, T + h / 2, mid, h / 2);
}

} // namespace

std::pair<double, double> characteristic_speed(double T, double X, const ThetaField& theta) {
    if (!theta) throw std::invalid_argument("characteristic_speed: empty theta field");
    const double c = std::cos(theta(T, X));
    if (!(c > 0.0))
        throw std::domain_error("characteristic_speed: cos(theta) <= 0 at requested point");
    return {-c, +c};
}

double characteristic_rk4_step(const ThetaField& theta, int branch, double T, double X,
                               double h) {
    const double k1 = slope(theta, branch, T, X);
    const double k2 = slope(theta, branch, T + h / 2, X + h / 2 * k1);
    const double k3 = slope(theta, branch, T + h / 2, X + h / 2 * k2);
    const double k4 = slope(theta, branch, T + h, X + h * k3);
    return X + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

GeodesicPath integrate_characteristic(double X0, int branch, const ThetaField& theta,
                                      double T_max, double dt) {
    if (branch != 1 && branch != -1)
        throw std::invalid_argument("integrate_characteristic: branch must be +1 or -1");
    if (!(dt > 0.0) || !(T_max > 0.0))
        throw std::invalid_argument("integrate_characteristic: dt and T_max must be positive");
    slope(theta, branch, 0.0, X0); // start point must lie inside the domain

    GeodesicPath path;
    path.branch = branch;
    path.T.push_back(0.0);
    path.X.push_back(X0);

    double T = 0.0, X = X0;
    bool exited = false;
    while (!exited && T < T_max) {
        const double target = std::min(T + dt, T_max);
        while (target - T > 1e-12 * dt) {
            double h = target - T;
            for (;;) {
                bool in_domain = true;
                double coarse = 0.0, fine = 0.0;
                try {
                    coarse = characteristic_rk4_step(theta, branch, T, X, h);
                    fine = two_half_steps(theta, branch, T, X, h);
                } catch (const std::domain_error&) {
                    in_domain = false;
                }
                if (in_domain) {
                    const double err = std::abs(fine - coarse) / 15.0;
                    if (err <= kTolPerUnitT * h || h <= 1e-12 * std::max(1.0, dt)) {
                        T += h;
                        X = fine;
                        break;
                    }
                    h /= 2;
                    continue;
                }
                // the step crosses the boundary: bisect on the step size
                double lo = 0.0, x_lo = X, hi = h;
                while (hi - lo > 1e-10 * std::max(1.0, dt)) {
                    const double mid = (lo + hi) / 2;
                    try {
                        const double xm = two_half_steps(theta, branch, T, X, mid);
                        lo = mid;
                        x_lo = xm;
                    } catch (const std::domain_error&) {
                        hi = mid;
                    }
                }
                T += lo;
                X = x_lo;
                exited = true;
                break;
            }
            if (exited) break;
        }
        if (!exited) T = target; // absorb accumulated rounding in the time label
        if (T > path.T.back()) {
            path.T.push_back(T);
            path.X.push_back(X);
        }
    }
    path.hit_boundary = exited;
    return path;
}

} // namespace qwd
