#ifndef QWDIRAC_LATTICE_HPP
#define QWDIRAC_LATTICE_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qwd {

using cplx = std::complex<double>;

// Periodic space-time grid with unit lightcone: Delta T = Delta X = length/n.
// Site m sits at X = m*dx, step j at T = j*dx.
struct Lattice {
    int n = 0;
    double length = 2.0 * std::numbers::pi;

    Lattice() = default;
    Lattice(int n_sites, double len) : n(n_sites), length(len) {
        if (n < 4 || n % 2 != 0)
            throw std::invalid_argument("lattice: n must be even and >= 4");
        if (!(length > 0.0))
            throw std::invalid_argument("lattice: length must be positive");
    }
    explicit Lattice(int n_sites) : Lattice(n_sites, 2.0 * std::numbers::pi) {}

    double dx() const { return length / n; }
    double dt() const { return dx(); }
    double x(int m) const { return m * dx(); }
    double t(int j) const { return j * dt(); }
    // Wrap a site index into [0, n).
    int wrap(int m) const {
        int r = m % n;
        return r < 0 ? r + n : r;
    }
};

inline bool operator==(const Lattice& a, const Lattice& b) {
    return a.n == b.n && a.length == b.length;
}

// Two-component complex field on the lattice; L and R are the coin components.
struct SpinorField {
    Lattice lat;
    std::vector<cplx> L, R;

    SpinorField() = default;
    explicit SpinorField(const Lattice& l) : lat(l), L(l.n), R(l.n) {}

    int size() const { return lat.n; }

    // Total probability, sum of |psi|^2 weighted by dx.
    double norm_sq() const {
        double s = 0.0;
        for (int m = 0; m < lat.n; ++m) s += std::norm(L[m]) + std::norm(R[m]);
        return s * lat.dx();
    }

    std::vector<double> density() const {
        std::vector<double> N(lat.n);
        for (int m = 0; m < lat.n; ++m) N[m] = std::norm(L[m]) + std::norm(R[m]);
        return N;
    }
};

inline double max_abs_diff(const SpinorField& a, const SpinorField& b) {
    if (!(a.lat == b.lat)) throw std::invalid_argument("spinor fields live on different lattices");
    double d = 0.0;
    for (int m = 0; m < a.lat.n; ++m) {
        d = std::max(d, std::abs(a.L[m] - b.L[m]));
        d = std::max(d, std::abs(a.R[m] - b.R[m]));
    }
    return d;
}

struct DensityField {
    Lattice lat;
    std::vector<double> N;
};

} // namespace qwd

#endif
