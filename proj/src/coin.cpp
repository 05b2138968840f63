#include "qwdirac/coin.hpp"

#include <cmath>

namespace qwd {

CoinMatrix build_coin(double theta, double xi, double zeta, double alpha) {
    if (!std::isfinite(theta) || !std::isfinite(xi) || !std::isfinite(zeta) ||
        !std::isfinite(alpha))
        throw std::domain_error("build_coin: non-finite angle");
    const double ct = std::cos(theta), st = std::sin(theta);
    const cplx ea = std::polar(1.0, alpha);
    const cplx exi = std::polar(1.0, xi);
    const cplx eze = std::polar(1.0, zeta);
    return CoinMatrix{ea * exi * ct, ea * eze * st,
                      -ea * std::conj(eze) * st, ea * std::conj(exi) * ct};
}

double AngleFn::dT(double T, double X) const {
    if (fdT) return fdT(T, X);
    const double h = 1e-5;
    return (f(T + h, X) - f(T - h, X)) / (2.0 * h);
}

double AngleFn::dX(double T, double X) const {
    if (fdX) return fdX(T, X);
    const double h = 1e-5;
    return (f(T, X + h) - f(T, X - h)) / (2.0 * h);
}

AngleFn constant_fn(double value) {
    auto zero = [](double, double) { return 0.0; };
    return AngleFn{[value](double, double) { return value; }, zero, zero};
}

AngleFn make_fn(std::function<double(double, double)> f) {
    return AngleFn{std::move(f), nullptr, nullptr};
}

AngleFn make_fn(std::function<double(double, double)> f,
                std::function<double(double, double)> dT,
                std::function<double(double, double)> dX) {
    return AngleFn{std::move(f), std::move(dT), std::move(dX)};
}

AngleField uniform_angles(double theta, double xi, double zeta, double alpha) {
    AngleField field;
    field.theta = constant_fn(theta);
    field.xi = constant_fn(xi);
    field.zeta = constant_fn(zeta);
    field.alpha = constant_fn(alpha);
    field.space_uniform = true;
    return field;
}

AngleRow sample_angles(const AngleField& field, const Lattice& lat, int j) {
    if (field.row_override) return field.row_override(lat, j);
    AngleRow row;
    row.theta.resize(lat.n);
    row.xi.resize(lat.n);
    row.zeta.resize(lat.n);
    row.alpha.resize(lat.n);
    const double T = lat.t(j);
    if (field.space_uniform) {
        const double th = field.theta(T, 0.0), xi = field.xi(T, 0.0);
        const double ze = field.zeta(T, 0.0), al = field.alpha(T, 0.0);
        for (int m = 0; m < lat.n; ++m) {
            row.theta[m] = th;
            row.xi[m] = xi;
            row.zeta[m] = ze;
            row.alpha[m] = al;
        }
        return row;
    }
    for (int m = 0; m < lat.n; ++m) {
        const double X = lat.x(m);
        row.theta[m] = field.theta(T, X);
        row.xi[m] = field.xi(T, X);
        row.zeta[m] = field.zeta(T, X);
        row.alpha[m] = field.alpha(T, X);
    }
    return row;
}

CoinRow build_coin_row(const AngleRow& row) {
    CoinRow cr;
    const int n = static_cast<int>(row.theta.size());
    bool uniform = true;
    for (int m = 1; m < n && uniform; ++m)
        uniform = row.theta[m] == row.theta[0] && row.xi[m] == row.xi[0] &&
                  row.zeta[m] == row.zeta[0] && row.alpha[m] == row.alpha[0];
    if (uniform) {
        cr.uniform = true;
        cr.B.push_back(build_coin(row.theta[0], row.xi[0], row.zeta[0], row.alpha[0]));
        return cr;
    }
    cr.B.reserve(n);
    for (int m = 0; m < n; ++m)
        cr.B.push_back(build_coin(row.theta[m], row.xi[m], row.zeta[m], row.alpha[m]));
    return cr;
}

CoinRow build_coin_row(const AngleField& field, const Lattice& lat, int j) {
    if (field.space_uniform && !field.row_override) {
        const double T = lat.t(j);
        CoinRow cr;
        cr.uniform = true;
        cr.B.push_back(build_coin(field.theta(T, 0.0), field.xi(T, 0.0),
                                  field.zeta(T, 0.0), field.alpha(T, 0.0)));
        return cr;
    }
    return build_coin_row(sample_angles(field, lat, j));
}

} // namespace qwd
