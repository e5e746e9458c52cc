#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

/// Half-spectrum of a real field (r2c layout): index (k1, k2, kc) with
/// kc in [0, N/2], row-major, coefficients normalized so that
/// f(x) = sum_k u_hat(k) exp(i xi_k . x).
struct SpectralField {
    Grid3 grid;
    std::vector<std::complex<double>> values;

    explicit SpectralField(const Grid3& g)
        : grid(g), values(std::size_t(g.n()) * g.n() * (g.n() / 2 + 1)) {}

    int nc() const { return grid.n() / 2 + 1; }
    std::size_t index(int i, int j, int kc) const {
        return (std::size_t(i) * grid.n() + j) * nc() + kc;
    }
    std::complex<double>& at(int i, int j, int kc) { return values[index(i, j, kc)]; }
    const std::complex<double>& at(int i, int j, int kc) const { return values[index(i, j, kc)]; }

    /// Multiplicity of an r2c mode in full-lattice sums (conjugate pairs).
    double weight(int kc) const {
        return (kc == 0 || kc == grid.n() / 2) ? 1.0 : 2.0;
    }
};

/// Full complex spectrum of a complex field, same normalization.
struct SpectralFieldC {
    Grid3 grid;
    std::vector<std::complex<double>> values;
    explicit SpectralFieldC(const Grid3& g) : grid(g), values(g.size()) {}
};

/// Partial transform along x1 only: index (kc1, j, k), kc1 in [0, N/2],
/// normalized by 1/N. Used for sampling planes at off-grid x1.
struct X1Spectrum {
    Grid3 grid;
    std::vector<std::complex<double>> values;
    explicit X1Spectrum(const Grid3& g)
        : grid(g), values(std::size_t(g.n() / 2 + 1) * g.n() * g.n()) {}
    std::size_t index(int kc1, int j, int k) const {
        return (std::size_t(kc1) * grid.n() + j) * grid.n() + k;
    }
};

namespace detail {

/// Process-wide FFTW plan cache. Planning is serialized; execution via the
/// new-array interface is safe on distinct buffers.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    fftw_plan r2c(int N) { return get(r2c_, N, [N] {
        std::vector<double> in(std::size_t(N) * N * N);
        std::vector<fftw_complex> out(std::size_t(N) * N * (N / 2 + 1));
        return fftw_plan_dft_r2c_3d(N, N, N, in.data(), out.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    }); }

    fftw_plan c2r(int N) { return get(c2r_, N, [N] {
        std::vector<fftw_complex> in(std::size_t(N) * N * (N / 2 + 1));
        std::vector<double> out(std::size_t(N) * N * N);
        return fftw_plan_dft_c2r_3d(N, N, N, in.data(), out.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    }); }

    fftw_plan c2c_fwd(int N) { return get(c2c_fwd_, N, [N] {
        std::vector<fftw_complex> buf(std::size_t(N) * N * N);
        return fftw_plan_dft_3d(N, N, N, buf.data(), buf.data(), FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    }); }

    fftw_plan c2c_bwd(int N) { return get(c2c_bwd_, N, [N] {
        std::vector<fftw_complex> buf(std::size_t(N) * N * N);
        return fftw_plan_dft_3d(N, N, N, buf.data(), buf.data(), FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    }); }

    fftw_plan r2c_x1(int N) { return get(r2c_x1_, N, [N] {
        int n[1] = {N};
        std::vector<double> in(std::size_t(N) * N * N);
        std::vector<fftw_complex> out(std::size_t(N / 2 + 1) * N * N);
        return fftw_plan_many_dft_r2c(1, n, N * N,
                                      in.data(), nullptr, N * N, 1,
                                      out.data(), nullptr, N * N, 1,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    }); }

    fftw_plan c2r_2d(int N) { return get(c2r_2d_, N, [N] {
        std::vector<fftw_complex> in(std::size_t(N) * (N / 2 + 1));
        std::vector<double> out(std::size_t(N) * N);
        return fftw_plan_dft_c2r_2d(N, N, in.data(), out.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    }); }

    fftw_plan r2c_2d(int N) { return get(r2c_2d_, N, [N] {
        std::vector<double> in(std::size_t(N) * N);
        std::vector<fftw_complex> out(std::size_t(N) * (N / 2 + 1));
        return fftw_plan_dft_r2c_2d(N, N, in.data(), out.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    }); }

  private:
    template <class Make>
    fftw_plan get(std::map<int, fftw_plan>& cache, int N, Make make) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache.find(N);
        if (it != cache.end()) return it->second;
        fftw_plan p = make();
        cache.emplace(N, p);
        return p;
    }
    std::mutex mu_;
    std::map<int, fftw_plan> r2c_, c2r_, c2c_fwd_, c2c_bwd_, r2c_x1_, c2r_2d_, r2c_2d_;
};

}  // namespace detail

// Coefficients are stored in the physical basis exp(i xi_k . x) with x
// measured from the box corner -L/2; since grid nodes sit at -L/2 + n h the
// DFT output picks up a factor (-1)^(k1+k2+k3) that the transforms absorb.

inline SpectralField to_spectral(const RealField& f) {
    const int N = f.grid.n();
    SpectralField out(f.grid);
    std::vector<double> in(f.values);  // r2c destroys input
    fftw_execute_dft_r2c(detail::FftPlans::instance().r2c(N), in.data(),
                         reinterpret_cast<fftw_complex*>(out.values.data()));
    const double scale = 1.0 / f.grid.size();
    std::size_t n = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int kc = 0; kc <= N / 2; ++kc, ++n)
                out.values[n] *= ((i + j + kc) & 1) ? -scale : scale;
    return out;
}

inline RealField from_spectral(const SpectralField& s) {
    const int N = s.grid.n();
    RealField out(s.grid);
    std::vector<std::complex<double>> in(s.values);  // c2r destroys input
    std::size_t n = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int kc = 0; kc <= N / 2; ++kc, ++n)
                if ((i + j + kc) & 1) in[n] = -in[n];
    fftw_execute_dft_c2r(detail::FftPlans::instance().c2r(N),
                         reinterpret_cast<fftw_complex*>(in.data()), out.values.data());
    return out;
}

inline SpectralFieldC to_spectral(const ComplexField& f) {
    const int N = f.grid.n();
    SpectralFieldC out(f.grid);
    std::vector<std::complex<double>> in(f.values);
    fftw_execute_dft(detail::FftPlans::instance().c2c_fwd(N),
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.values.data()));
    const double scale = 1.0 / f.grid.size();
    std::size_t n = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k, ++n)
                out.values[n] *= ((i + j + k) & 1) ? -scale : scale;
    return out;
}

inline ComplexField from_spectral(const SpectralFieldC& s) {
    const int N = s.grid.n();
    ComplexField out(s.grid);
    std::vector<std::complex<double>> in(s.values);
    std::size_t n = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k, ++n)
                if ((i + j + k) & 1) in[n] = -in[n];
    fftw_execute_dft(detail::FftPlans::instance().c2c_bwd(N),
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.values.data()));
    return out;
}

/// Inverse 2-D transform of physical-basis plane coefficients c(k2, kc3)
/// (layout N x (N/2+1)) to N^2 samples on the (x2, x3) plane.
inline std::vector<double> plane_from_spectrum(const Grid3& g,
                                               std::vector<std::complex<double>> coeffs) {
    const int N = g.n();
    std::size_t m = 0;
    for (int j = 0; j < N; ++j)
        for (int kc = 0; kc <= N / 2; ++kc, ++m)
            if ((j + kc) & 1) coeffs[m] = -coeffs[m];
    std::vector<double> out(std::size_t(N) * N);
    fftw_execute_dft_c2r(detail::FftPlans::instance().c2r_2d(N),
                         reinterpret_cast<fftw_complex*>(coeffs.data()), out.data());
    return out;
}

/// Forward 2-D transform of N^2 plane samples to physical-basis coefficients.
inline std::vector<std::complex<double>> plane_to_spectrum(const Grid3& g,
                                                           std::vector<double> samples) {
    const int N = g.n();
    std::vector<std::complex<double>> out(std::size_t(N) * (N / 2 + 1));
    fftw_execute_dft_r2c(detail::FftPlans::instance().r2c_2d(N), samples.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / (std::size_t(N) * N);
    std::size_t m = 0;
    for (int j = 0; j < N; ++j)
        for (int kc = 0; kc <= N / 2; ++kc, ++m)
            out[m] *= ((j + kc) & 1) ? -scale : scale;
    return out;
}

inline X1Spectrum to_x1_spectrum(const RealField& f) {
    const int N = f.grid.n();
    X1Spectrum out(f.grid);
    std::vector<double> in(f.values);
    fftw_execute_dft_r2c(detail::FftPlans::instance().r2c_x1(N), in.data(),
                         reinterpret_cast<fftw_complex*>(out.values.data()));
    const double scale = 1.0 / N;
    for (int kc1 = 0; kc1 <= N / 2; ++kc1) {
        double s = (kc1 & 1) ? -scale : scale;
        std::size_t base = out.index(kc1, 0, 0);
        for (std::size_t m = 0; m < std::size_t(N) * N; ++m) out.values[base + m] *= s;
    }
    return out;
}

}  // namespace wavelab
