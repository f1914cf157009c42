#include "kvn/bspline.hpp"

#include <cmath>
#include <stdexcept>

#include "kvn/fft.hpp"

namespace kvn {

namespace {

// centred B-spline values at the integer offsets of its support
// (cubic: offsets -1..1, quintic: -2..2)
void sampling_kernel(int order, double* kern, int* radius) {
    if (order == 3) {
        kern[0] = 1.0 / 6.0;
        kern[1] = 4.0 / 6.0;
        kern[2] = 1.0 / 6.0;
        *radius = 1;
    } else {
        kern[0] = 1.0 / 120.0;
        kern[1] = 26.0 / 120.0;
        kern[2] = 66.0 / 120.0;
        kern[3] = 26.0 / 120.0;
        kern[4] = 1.0 / 120.0;
        *radius = 2;
    }
}

double b3(double x) {
    x = std::fabs(x);
    if (x >= 2.0) return 0.0;
    if (x >= 1.0) {
        const double t = 2.0 - x;
        return t * t * t / 6.0;
    }
    const double t = 2.0 - x, u = 1.0 - x;
    return (t * t * t - 4.0 * u * u * u) / 6.0;
}

double b5(double x) {
    x = std::fabs(x);
    if (x >= 3.0) return 0.0;
    const double t3 = std::pow(3.0 - x, 5);
    if (x >= 2.0) return t3 / 120.0;
    const double t2 = std::pow(2.0 - x, 5);
    if (x >= 1.0) return (t3 - 6.0 * t2) / 120.0;
    const double t1 = std::pow(1.0 - x, 5);
    return (t3 - 6.0 * t2 + 15.0 * t1) / 120.0;
}

// weights over the stencil offsets for fractional position t in [0,1)
void stencil(int order, double t, double* w, int* lo, int* count) {
    if (order == 1) {
        w[0] = 1.0 - t;
        w[1] = t;
        *lo = 0;
        *count = 2;
    } else if (order == 3) {
        for (int o = -1; o <= 2; ++o) w[o + 1] = b3(t - o);
        *lo = -1;
        *count = 4;
    } else {
        for (int o = -2; o <= 3; ++o) w[o + 2] = b5(t - o);
        *lo = -2;
        *count = 6;
    }
}

}  // namespace

BsplineSurface::BsplineSurface(std::vector<std::complex<double>> samples, int n0, int n1,
                               int order)
    : n0_(n0), n1_(n1), order_(order), coef_(std::move(samples)) {
    if (order != 1 && order != 3 && order != 5)
        throw std::invalid_argument("BsplineSurface: order must be 1, 3 or 5");
    if (n0 < 8 || n1 < 8) throw std::invalid_argument("BsplineSurface: grid too small");
    if (coef_.size() != static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1))
        throw std::invalid_argument("BsplineSurface: sample count mismatch");
    if (order == 1) return;

    // deconvolve the sampling kernel along both axes in Fourier space
    double kern[5];
    int radius = 0;
    sampling_kernel(order, kern, &radius);
    auto hat = [&](int n) {
        std::vector<double> h(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double v = kern[radius];
            for (int o = 1; o <= radius; ++o)
                v += 2.0 * kern[radius + o] * std::cos(2.0 * M_PI * o * i / double(n));
            h[static_cast<std::size_t>(i)] = v;
        }
        return h;
    };
    const std::vector<double> h0 = hat(n0_), h1 = hat(n1_);

    dft_2d(coef_.data(), n0_, n1_, -1);
    const double inv_n = 1.0 / (static_cast<double>(n0_) * static_cast<double>(n1_));
    for (int i = 0; i < n0_; ++i)
        for (int j = 0; j < n1_; ++j)
            coef_[static_cast<std::size_t>(i) * n1_ + j] *=
                inv_n / (h0[static_cast<std::size_t>(i)] * h1[static_cast<std::size_t>(j)]);
    dft_2d(coef_.data(), n0_, n1_, +1);
}

std::complex<double> BsplineSurface::eval(double f0, double f1) const {
    const double fl0 = std::floor(f0), fl1 = std::floor(f1);
    const int i0 = static_cast<int>(fl0), i1 = static_cast<int>(fl1);
    double w0[6], w1[6];
    int lo0, lo1, c0, c1;
    stencil(order_, f0 - fl0, w0, &lo0, &c0);
    stencil(order_, f1 - fl1, w1, &lo1, &c1);

    std::complex<double> acc{0.0, 0.0};
    for (int a = 0; a < c0; ++a) {
        int ia = (i0 + lo0 + a) % n0_;
        if (ia < 0) ia += n0_;
        std::complex<double> row{0.0, 0.0};
        const std::complex<double>* base = coef_.data() + static_cast<std::size_t>(ia) * n1_;
        for (int b = 0; b < c1; ++b) {
            int ib = (i1 + lo1 + b) % n1_;
            if (ib < 0) ib += n1_;
            row += w1[b] * base[ib];
        }
        acc += w0[a] * row;
    }
    return acc;
}

}  // namespace kvn
