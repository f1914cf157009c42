#include "kvn/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace kvn {

Fft1D::Fft1D(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Fft1D: length must be >= 1");
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n));
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    // UNALIGNED so the plans run on arbitrary caller buffers
    fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) throw std::runtime_error("Fft1D: FFTW plan creation failed");
}

Fft1D::~Fft1D() {
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft1D::transform(std::complex<double>* data, int sign) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(sign < 0 ? fwd_ : bwd_), p, p);
}

void dft_axis(std::complex<double>* data, int n0, int n1, int axis, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_plan plan;
    if (axis == 1) {
        // contiguous rows: n0 transforms of length n1
        int n[] = {n1};
        plan = fftw_plan_many_dft(1, n, n0, p, nullptr, 1, n1, p, nullptr, 1, n1,
                                  sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    } else {
        // strided columns: n1 transforms of length n0, stride n1
        int n[] = {n0};
        plan = fftw_plan_many_dft(1, n, n1, p, nullptr, n1, 1, p, nullptr, n1, 1,
                                  sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!plan) throw std::runtime_error("dft_axis: FFTW plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

void dft_2d(std::complex<double>* data, int n0, int n1, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_plan plan = fftw_plan_dft_2d(n0, n1, p, p,
                                      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("dft_2d: FFTW plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

double fft_frequency(int i, int n, double dx) {
    const int m = (i < (n + 1) / 2) ? i : i - n;
    return 2.0 * M_PI * static_cast<double>(m) / (static_cast<double>(n) * dx);
}

}  // namespace kvn
