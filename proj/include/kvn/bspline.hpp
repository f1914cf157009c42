#ifndef KVNCPI_BSPLINE_HPP
#define KVNCPI_BSPLINE_HPP

#include <complex>
#include <vector>

namespace kvn {

/// Interpolating B-spline surface of order 1, 3 or 5 over a uniform periodic
/// n0 x n1 grid (row-major samples). Orders 3/5 deconvolve the sampling
/// kernel once via FFT at construction, so evaluation interpolates the
/// samples; order 1 is plain bilinear. eval() is const and thread-safe.
class BsplineSurface {
  public:
    BsplineSurface(std::vector<std::complex<double>> samples, int n0, int n1, int order);

    /// Value at fractional grid coordinates (f0, f1); indices wrap periodically.
    std::complex<double> eval(double f0, double f1) const;

    int order() const noexcept { return order_; }

  private:
    int n0_, n1_, order_;
    std::vector<std::complex<double>> coef_;
};

}  // namespace kvn

#endif
