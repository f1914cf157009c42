#ifndef KVNCPI_FFT_HPP
#define KVNCPI_FFT_HPP

#include <complex>
#include <vector>

namespace kvn {

/// Forward/backward complex DFT plans of one length (FFTW backend, unnormalized
/// backward). Plan creation is not thread-safe; construct on one thread, then
/// transform() may be called concurrently on distinct buffers.
class Fft1D {
  public:
    explicit Fft1D(int n);
    ~Fft1D();
    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    int size() const noexcept { return n_; }
    /// sign = -1 forward, +1 backward (FFTW convention); in place.
    void transform(std::complex<double>* data, int sign) const;

  private:
    int n_;
    void* fwd_;
    void* bwd_;
};

/// In-place DFT along one axis of a row-major n0 x n1 complex array.
void dft_axis(std::complex<double>* data, int n0, int n1, int axis, int sign);

/// In-place full 2D DFT of a row-major n0 x n1 complex array.
void dft_2d(std::complex<double>* data, int n0, int n1, int sign);

/// FFT frequency k for bin index i of an n-point grid with spacing dx:
/// k = 2*pi*m/(n*dx) with m = i for i < n/2, m = i - n otherwise.
double fft_frequency(int i, int n, double dx);

}  // namespace kvn

#endif
