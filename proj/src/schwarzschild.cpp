#include "qwdirac/schwarzschild.hpp"

#include <cmath>
#include <stdexcept>

namespace qwd {

namespace {

void check_config(const SchwarzschildConfig& cfg) {
    if (!(cfg.r_g > 0.0) || !std::isfinite(cfg.r_g))
        throw std::invalid_argument("schwarzschild: r_g must be positive and finite");
    if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda))
        throw std::invalid_argument("schwarzschild: lambda must be positive and finite");
}

// guard band for roundoff exactly on the loci
constexpr double kEdgeTol = 1e-12;

} // namespace

double radius(double T, double X, const SchwarzschildConfig& cfg) {
    check_config(cfg);
    double u = 1.5 * (X / cfg.lambda - T);
    if (u < 0.0) {
        if (u < -kEdgeTol * std::max(1.0, std::abs(X)))
            throw std::domain_error("radius: X < lambda T, outside the coordinate range");
        u = 0.0;
    }
    return std::cbrt(u * u * cfg.r_g);
}

double singularity_position(double T, const SchwarzschildConfig& cfg) {
    check_config(cfg);
    return cfg.lambda * T;
}

double horizon_position(double T, const SchwarzschildConfig& cfg) {
    check_config(cfg);
    return cfg.lambda * T + (2.0 / 3.0) * cfg.lambda * cfg.r_g;
}

double domain_edge_position(double T, const SchwarzschildConfig& cfg) {
    check_config(cfg);
    return cfg.lambda * T + 2.0 * cfg.r_g / (3.0 * cfg.lambda * cfg.lambda);
}

bool in_domain(double T, double X, const SchwarzschildConfig& cfg) {
    check_config(cfg);
    return X >= cfg.lambda * T && X <= domain_edge_position(T, cfg);
}

double g_xx(double T, double X, const SchwarzschildConfig& cfg) {
    const double r = radius(T, X, cfg);
    if (r == 0.0) throw std::domain_error("g_xx: metric diverges on the singularity locus");
    return -cfg.r_g / (cfg.lambda * cfg.lambda * r);
}

double walk_theta(double T, double X, const SchwarzschildConfig& cfg) {
    const double r = radius(T, X, cfg); // validates cfg and X >= lambda T
    double c = cfg.lambda * std::sqrt(r / cfg.r_g);
    if (c > 1.0) {
        if (c > 1.0 + kEdgeTol)
            throw std::domain_error("walk_theta: point lies outside the domain D");
        c = 1.0;
    }
    return std::acos(c);
}

AngleFn schwarzschild_theta_angle(const SchwarzschildConfig& cfg, double x_offset) {
    check_config(cfg);
    auto value = [cfg, x_offset](double T, double X) {
        return walk_theta(T, X + x_offset, cfg);
    };
    // theta = acos(c), c = lambda sqrt(r/r_g):
    //   dc/dX = 1/(2r),  dc/dT = -lambda/(2r)
    auto dT = [cfg, x_offset](double T, double X) {
        const double r = radius(T, X + x_offset, cfg);
        const double c = cfg.lambda * std::sqrt(r / cfg.r_g);
        return cfg.lambda / (2.0 * r * std::sqrt(1.0 - c * c));
    };
    auto dX = [cfg, x_offset](double T, double X) {
        const double r = radius(T, X + x_offset, cfg);
        const double c = cfg.lambda * std::sqrt(r / cfg.r_g);
        return -1.0 / (2.0 * r * std::sqrt(1.0 - c * c));
    };
    return make_fn(value, dT, dX);
}

ThetaField schwarzschild_theta_field(const SchwarzschildConfig& cfg) {
    check_config(cfg);
    return [cfg](double T, double X) { return walk_theta(T, X, cfg); };
}

JetSpec make_schwarzschild_jet(const SchwarzschildConfig& cfg) {
    const double half_pi = std::numbers::pi / 2.0;
    JetSpec jet;
    jet.n_steps = 2;
    jet.theta0 = schwarzschild_theta_angle(cfg);
    jet.zeta0 = constant_fn(half_pi);
    jet.xi0 = constant_fn(half_pi);
    jet.alpha0 = constant_fn(half_pi);
    return jet;
}

} // namespace qwd
