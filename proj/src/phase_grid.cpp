#include "kvn/phase_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace kvn {

void PhaseGrid::validate() const {
    if (!(qmax > qmin) || !(pmax > pmin))
        throw std::invalid_argument("PhaseGrid: extents must be strictly positive");
    if (nq < 16 || np < 16) throw std::invalid_argument("PhaseGrid: need at least 16x16 samples");
}

KvNWave KvNWave::zeros(const PhaseGrid& g) {
    g.validate();
    KvNWave w;
    w.grid = g;
    w.values.assign(g.size(), {0.0, 0.0});
    return w;
}

KvNWave KvNWave::gaussian(const PhaseGrid& g, double q0, double p0, double sigma,
                          double kq, double kp) {
    KvNWave w = zeros(g);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int i = 0; i < g.nq; ++i) {
        const double q = g.q(i);
        for (int j = 0; j < g.np; ++j) {
            const double p = g.p(j);
            const double r2 = (q - q0) * (q - q0) + (p - p0) * (p - p0);
            const double amp = std::exp(-r2 * inv2s2);
            w.values[g.index(i, j)] =
                amp * std::complex<double>(std::cos(kq * q + kp * p), std::sin(kq * q + kp * p));
        }
    }
    w.normalize_l2();
    return w;
}

KvNWave KvNWave::gaussian2(const PhaseGrid& g, double q0, double p0, double sigma_q,
                           double sigma_p) {
    KvNWave w = zeros(g);
    for (int i = 0; i < g.nq; ++i) {
        const double q = g.q(i);
        for (int j = 0; j < g.np; ++j) {
            const double p = g.p(j);
            const double e = (q - q0) * (q - q0) / (2.0 * sigma_q * sigma_q) +
                             (p - p0) * (p - p0) / (2.0 * sigma_p * sigma_p);
            w.values[g.index(i, j)] = std::exp(-e);
        }
    }
    w.normalize_l2();
    return w;
}

double KvNWave::l2_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s * grid.cell_area());
}

std::complex<double> KvNWave::integral() const {
    std::complex<double> s{0.0, 0.0};
    for (const auto& v : values) s += v;
    return s * grid.cell_area();
}

void KvNWave::normalize_l2() {
    const double n = l2_norm();
    if (n == 0.0) throw std::runtime_error("KvNWave: cannot normalize the zero wave");
    for (auto& v : values) v /= n;
}

std::pair<double, double> KvNWave::centroid_abs2() const {
    double mass = 0.0, mq = 0.0, mp = 0.0;
    for (int i = 0; i < grid.nq; ++i)
        for (int j = 0; j < grid.np; ++j) {
            const double w = std::norm(values[grid.index(i, j)]);
            mass += w;
            mq += w * grid.q(i);
            mp += w * grid.p(j);
        }
    if (mass == 0.0) return {0.0, 0.0};
    return {mq / mass, mp / mass};
}

double KvNWave::boundary_max_abs() const {
    double m = 0.0;
    for (int i = 0; i < grid.nq; ++i)
        for (int j = 0; j < grid.np; ++j) {
            if (i != 0 && i != grid.nq - 1 && j != 0 && j != grid.np - 1) continue;
            m = std::max(m, std::abs(values[grid.index(i, j)]));
        }
    return m;
}

double l1_abs2_vs_density(const KvNWave& a, const KvNWave& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("l1_abs2_vs_density: grid mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        s += std::fabs(std::norm(a.values[k]) - b.values[k].real());
    return s * a.grid.cell_area();
}

}  // namespace kvn
