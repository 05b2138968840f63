#include "qwdirac/fourier.hpp"

#include <algorithm>

#include <fftw3.h>

namespace qwd {

struct Dft::Impl {
    int n = 0;
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    explicit Impl(int n_) : n(n_) {
        buf = fftw_alloc_complex(static_cast<size_t>(n));
        if (!buf) throw std::bad_alloc();
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        inv = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !inv) {
            if (fwd) fftw_destroy_plan(fwd);
            if (inv) fftw_destroy_plan(inv);
            fftw_free(buf);
            throw std::runtime_error("fftw plan creation failed");
        }
    }
    ~Impl() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        fftw_free(buf);
    }
};

Dft::Dft(int n) {
    if (n < 1) throw std::invalid_argument("dft: n must be positive");
    impl_ = std::make_unique<Impl>(n);
}

Dft::~Dft() = default;
Dft::Dft(Dft&&) noexcept = default;
Dft& Dft::operator=(Dft&&) noexcept = default;

int Dft::size() const { return impl_->n; }

namespace {

void check_size(size_t got, int want) {
    if (got != static_cast<size_t>(want))
        throw std::invalid_argument("dft: vector size does not match plan size");
}

} // namespace

void Dft::forward(std::vector<cplx>& v) const {
    check_size(v.size(), impl_->n);
    auto* buf = reinterpret_cast<cplx*>(impl_->buf);
    std::copy(v.begin(), v.end(), buf);
    fftw_execute(impl_->fwd);
    const double scale = 1.0 / impl_->n;
    for (size_t i = 0; i < v.size(); ++i) v[i] = buf[i] * scale;
}

void Dft::inverse(std::vector<cplx>& v) const {
    check_size(v.size(), impl_->n);
    auto* buf = reinterpret_cast<cplx*>(impl_->buf);
    std::copy(v.begin(), v.end(), buf);
    fftw_execute(impl_->inv);
    std::copy(buf, buf + v.size(), v.begin());
}

std::vector<double> fourier_wavenumbers(const Lattice& lat) {
    std::vector<double> k(lat.n);
    const double base = 2.0 * std::numbers::pi / lat.length;
    for (int i = 0; i < lat.n; ++i) k[i] = base * Dft::mode(i, lat.n);
    return k;
}

std::vector<cplx> shift_fourier(const std::vector<cplx>& v, int offset) {
    const int n = static_cast<int>(v.size());
    Dft dft(n);
    std::vector<cplx> w = v;
    dft.forward(w);
    const double step = 2.0 * std::numbers::pi * offset / n;
    for (int i = 0; i < n; ++i) w[i] *= std::polar(1.0, step * i);
    dft.inverse(w);
    return w;
}

std::vector<cplx> spectral_derivative(const std::vector<cplx>& v, double length) {
    if (!(length > 0.0)) throw std::invalid_argument("spectral_derivative: length must be positive");
    const int n = static_cast<int>(v.size());
    Dft dft(n);
    std::vector<cplx> w = v;
    dft.forward(w);
    const double base = 2.0 * std::numbers::pi / length;
    for (int i = 0; i < n; ++i) {
        if (n % 2 == 0 && i == n / 2) {
            w[i] = 0.0;
            continue;
        }
        w[i] *= cplx(0.0, base * Dft::mode(i, n));
    }
    dft.inverse(w);
    return w;
}

} // namespace qwd
