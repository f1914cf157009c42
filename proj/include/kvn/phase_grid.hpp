#ifndef KVNCPI_PHASE_GRID_HPP
#define KVNCPI_PHASE_GRID_HPP

#include <complex>
#include <string>
#include <vector>

namespace kvn {

/// Uniform periodic sampling of a rectangle in (q,p): nodes q_i = qmin + i dq
/// with dq = (qmax - qmin)/nq (qmax excluded), likewise for p. Row-major
/// storage, q along axis 0.
struct PhaseGrid {
    double qmin = -1.0, qmax = 1.0;
    double pmin = -1.0, pmax = 1.0;
    int nq = 16, np = 16;

    void validate() const;

    double dq() const { return (qmax - qmin) / nq; }
    double dp() const { return (pmax - pmin) / np; }
    double q(int i) const { return qmin + dq() * i; }
    double p(int j) const { return pmin + dp() * j; }
    std::size_t size() const { return static_cast<std::size_t>(nq) * np; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * np + j; }
    double cell_area() const { return dq() * dp(); }

    bool operator==(const PhaseGrid&) const = default;
};

/// Complex wave (or real density in the real part) sampled on a PhaseGrid.
struct KvNWave {
    PhaseGrid grid;
    std::vector<std::complex<double>> values;

    static KvNWave zeros(const PhaseGrid& g);
    /// Normalized Gaussian exp(-((q-q0)^2+(p-p0)^2)/(2 sigma^2)) with an
    /// optional plane-wave phase exp(i(kq q + kp p)).
    static KvNWave gaussian(const PhaseGrid& g, double q0, double p0, double sigma,
                            double kq = 0.0, double kp = 0.0);
    /// Anisotropic Gaussian with independent q/p widths.
    static KvNWave gaussian2(const PhaseGrid& g, double q0, double p0, double sigma_q,
                             double sigma_p);

    double l2_norm() const;
    /// Sum of values times the cell area (mass when values hold a density).
    std::complex<double> integral() const;
    void normalize_l2();
    /// Centroid of |psi|^2.
    std::pair<double, double> centroid_abs2() const;
    /// Largest |value| on the boundary ring (support check).
    double boundary_max_abs() const;
};

/// L1 distance between |a|^2 and the real part of b (used for the
/// density-compatibility report).
double l1_abs2_vs_density(const KvNWave& a, const KvNWave& b);

}  // namespace kvn

#endif
