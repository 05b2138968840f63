#ifndef QWDIRAC_COIN_HPP
#define QWDIRAC_COIN_HPP

#include <array>
#include <functional>

#include "qwdirac/lattice.hpp"

namespace qwd {

// Row-major 2x2 coin, B = [[a, b], [c, d]].
struct CoinMatrix {
    cplx a, b, c, d;
};

// U(2) coin from the four angles:
//   B = e^{i alpha} [[ e^{i xi} cos theta,  e^{i zeta} sin theta ],
//                    [ -e^{-i zeta} sin theta, e^{-i xi} cos theta ]]
// det B = e^{2 i alpha}. Throws std::domain_error on non-finite input.
CoinMatrix build_coin(double theta, double xi, double zeta, double alpha);

// Scalar function of (T, X). Analytic derivatives are optional; when absent,
// d_T/d_X fall back to central differences.
struct AngleFn {
    std::function<double(double, double)> f;
    std::function<double(double, double)> fdT; // optional
    std::function<double(double, double)> fdX; // optional

    double operator()(double T, double X) const { return f(T, X); }
    double dT(double T, double X) const;
    double dX(double T, double X) const;
};

AngleFn constant_fn(double value);
AngleFn make_fn(std::function<double(double, double)> f);
AngleFn make_fn(std::function<double(double, double)> f,
                std::function<double(double, double)> dT,
                std::function<double(double, double)> dX);

// Angles sampled along one time row.
struct AngleRow {
    std::vector<double> theta, xi, zeta, alpha;
};

// Space-time dependent coin angles. The closed-form functions are canonical;
// row_override (when set) supplies lattice-bound rows instead, which is how
// gauge-transformed angle sets are represented. space_uniform marks sets whose
// angles do not depend on X, enabling a one-evaluation-per-row fast path.
struct AngleField {
    AngleFn theta, xi, zeta, alpha;
    bool space_uniform = false;
    std::function<AngleRow(const Lattice&, int)> row_override;
};

AngleField uniform_angles(double theta, double xi, double zeta, double alpha);

// Evaluate the four angle functions at T = t_j across all sites of the row.
AngleRow sample_angles(const AngleField& field, const Lattice& lat, int j);

// Per-site coins for one row. uniform means all sites share entry 0.
struct CoinRow {
    std::vector<CoinMatrix> B;
    bool uniform = false;

    const CoinMatrix& at(int m) const { return uniform ? B[0] : B[m]; }
};

CoinRow build_coin_row(const AngleRow& row);
CoinRow build_coin_row(const AngleField& field, const Lattice& lat, int j);

} // namespace qwd

#endif
