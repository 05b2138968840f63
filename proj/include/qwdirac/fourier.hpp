#ifndef QWDIRAC_FOURIER_HPP
#define QWDIRAC_FOURIER_HPP

#include <memory>
#include <vector>

#include "qwdirac/lattice.hpp"

namespace qwd {

// In-place DFT pair with the normalization on the forward transform:
//   forward:  v_k <- (1/n) sum_j v_j exp(-2 pi i j k / n)
//   inverse:  v_j <- sum_k v_k exp(+2 pi i j k / n)
// Plans are built once per instance and reused.
class Dft {
public:
    explicit Dft(int n);
    ~Dft();
    Dft(Dft&&) noexcept;
    Dft& operator=(Dft&&) noexcept;
    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;

    int size() const;
    void forward(std::vector<cplx>& v) const;
    void inverse(std::vector<cplx>& v) const;

    // Signed mode number for array index i: 0..n/2-1 stay, the rest map to
    // negative frequencies (i - n).
    static int mode(int i, int n) { return 2 * i < n ? i : i - n; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Physical wavenumber of each array index: k_i = 2 pi mode(i) / length.
std::vector<double> fourier_wavenumbers(const Lattice& lat);

// Periodic roll through Fourier space: result[m] = v[(m + offset) mod n].
std::vector<cplx> shift_fourier(const std::vector<cplx>& v, int offset);

// d/dX via Fourier multiplier i*k. The Nyquist mode is zeroed, the usual
// choice for an odd-order derivative on an even grid.
std::vector<cplx> spectral_derivative(const std::vector<cplx>& v, double length);

} // namespace qwd

#endif
