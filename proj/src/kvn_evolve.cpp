#include "kvn/kvn_evolve.hpp"

#include <cmath>
#include <stdexcept>

#include "kvn/bspline.hpp"
#include "kvn/fft.hpp"

namespace kvn {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// backward characteristic: RK4 for phidot = -omega grad H, dim 2, no allocation
void backward_point(const PolynomialHamiltonian& H, double q, double p, double T, double dt,
                    double* out) {
    const long nsteps = std::max<long>(1, std::lround(T / dt));
    const double h = -T / static_cast<double>(nsteps);  // negative step = backward
    double y[2] = {q, p};
    double k1[2], k2[2], k3[2], k4[2], tmp[2];
    for (long s = 0; s < nsteps; ++s) {
        H.vector_field_into(y, k1);
        tmp[0] = y[0] + 0.5 * h * k1[0];
        tmp[1] = y[1] + 0.5 * h * k1[1];
        H.vector_field_into(tmp, k2);
        tmp[0] = y[0] + 0.5 * h * k2[0];
        tmp[1] = y[1] + 0.5 * h * k2[1];
        H.vector_field_into(tmp, k3);
        tmp[0] = y[0] + h * k3[0];
        tmp[1] = y[1] + h * k3[1];
        H.vector_field_into(tmp, k4);
        y[0] += (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    out[0] = y[0];
    out[1] = y[1];
}

TransportResult transport(const PolynomialHamiltonian& H, const KvNWave& psi0, double T,
                          const TransportOptions& opts, bool parallel) {
    if (H.dof() != 1)
        throw std::invalid_argument("evolve_kvn: phase-space grids support one degree of freedom");
    if (T < 0.0) throw std::invalid_argument("evolve_kvn: T must be >= 0");
    psi0.grid.validate();

    TransportResult out;
    out.wave = psi0;
    if (T == 0.0) return out;

    const PhaseGrid& g = psi0.grid;
    const BsplineSurface surf(psi0.values, g.nq, g.np, opts.spline_order);

    std::vector<long> violations(static_cast<std::size_t>(g.nq), 0);
    const double inv_dq = 1.0 / g.dq();
    const double inv_dp = 1.0 / g.dp();

#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < g.nq; ++i) {
        long miss = 0;
        for (int j = 0; j < g.np; ++j) {
            double y[2];
            backward_point(H, g.q(i), g.p(j), T, opts.dt, y);
            if (y[0] < g.qmin || y[0] >= g.qmax || y[1] < g.pmin || y[1] >= g.pmax) {
                // outside the sampled support: boundary policy gives 0
                out.wave.values[g.index(i, j)] = {0.0, 0.0};
                ++miss;
                continue;
            }
            out.wave.values[g.index(i, j)] =
                surf.eval((y[0] - g.qmin) * inv_dq, (y[1] - g.pmin) * inv_dp);
        }
        violations[static_cast<std::size_t>(i)] = miss;
    }
    for (long v : violations) out.support_violations += v;
    return out;
}

}  // namespace

TransportResult evolve_kvn_characteristics(const PolynomialHamiltonian& H, const KvNWave& psi0,
                                           double T, const TransportOptions& opts) {
    return transport(H, psi0, T, opts, opts.parallel);
}

TransportResult evolve_kvn_characteristics_serial(const PolynomialHamiltonian& H,
                                                  const KvNWave& psi0, double T,
                                                  const TransportOptions& opts) {
    return transport(H, psi0, T, opts, false);
}

LiouvillianResult liouvillian_apply(const PolynomialHamiltonian& H, const KvNWave& psi) {
    if (H.dof() != 1)
        throw std::invalid_argument("liouvillian_apply: one degree of freedom only");
    psi.grid.validate();
    const PhaseGrid& g = psi.grid;

    // resolution check on the full 2D spectrum: top 20% band vs peak
    bool resolved = true;
    {
        std::vector<std::complex<double>> hat = psi.values;
        dft_2d(hat.data(), g.nq, g.np, -1);
        double peak = 0.0, tail = 0.0;
        for (int i = 0; i < g.nq; ++i)
            for (int j = 0; j < g.np; ++j) {
                const double a = std::abs(hat[g.index(i, j)]);
                peak = std::max(peak, a);
                const int mi = std::min(i, g.nq - i);
                const int mj = std::min(j, g.np - j);
                if (mi >= (2 * g.nq) / 5 || mj >= (2 * g.np) / 5) tail = std::max(tail, a);
            }
        resolved = peak == 0.0 || tail <= 1e-8 * peak;
    }

    // spectral derivatives along q (axis 0) and p (axis 1)
    std::vector<std::complex<double>> dq = psi.values;
    std::vector<std::complex<double>> dp = psi.values;
    dft_axis(dq.data(), g.nq, g.np, 0, -1);
    dft_axis(dp.data(), g.nq, g.np, 1, -1);

    for (int i = 0; i < g.nq; ++i) {
        const double kq = fft_frequency(i, g.nq, g.dq());
        for (int j = 0; j < g.np; ++j) dq[g.index(i, j)] *= kI * kq;
    }
    for (int i = 0; i < g.nq; ++i)
        for (int j = 0; j < g.np; ++j) {
            const double kp = fft_frequency(j, g.np, g.dp());
            dp[g.index(i, j)] *= kI * kp;
        }
    dft_axis(dq.data(), g.nq, g.np, 0, +1);
    dft_axis(dp.data(), g.nq, g.np, 1, +1);
    const double norm_q = 1.0 / g.nq, norm_p = 1.0 / g.np;

    LiouvillianResult out;
    out.resolved = resolved;
    out.wave = KvNWave::zeros(g);
    for (int i = 0; i < g.nq; ++i)
        for (int j = 0; j < g.np; ++j) {
            Eigen::Vector2d v(g.q(i), g.p(j));
            const Eigen::VectorXd gr = H.gradient(v);  // (dH/dq, dH/dp)
            const std::size_t k = g.index(i, j);
            out.wave.values[k] = -kI * gr[1] * (dq[k] * norm_q) + kI * gr[0] * (dp[k] * norm_p);
        }
    return out;
}

KvNWave evolve_kvn_spectral_split(const PolynomialHamiltonian& H, const KvNWave& psi0,
                                  double T, double dt) {
    if (H.dof() != 1)
        throw std::invalid_argument("evolve_kvn_spectral_split: one degree of freedom only");
    if (!H.is_separable())
        throw std::invalid_argument("evolve_kvn_spectral_split: H must be separable");
    if (T < 0.0) throw std::invalid_argument("evolve_kvn_spectral_split: T must be >= 0");
    psi0.grid.validate();

    KvNWave w = psi0;
    if (T == 0.0) return w;
    const PhaseGrid& g = psi0.grid;
    const long nsteps = std::max<long>(1, std::lround(T / dt));
    const double h = T / static_cast<double>(nsteps);

    // advection speeds: qdot = dH/dp (function of p), pdot = -dH/dq (function of q)
    std::vector<double> qspeed(static_cast<std::size_t>(g.np));
    std::vector<double> pspeed(static_cast<std::size_t>(g.nq));
    for (int j = 0; j < g.np; ++j) {
        Eigen::Vector2d v(0.0, g.p(j));
        qspeed[static_cast<std::size_t>(j)] = H.gradient(v)[1];
    }
    for (int i = 0; i < g.nq; ++i) {
        Eigen::Vector2d v(g.q(i), 0.0);
        pspeed[static_cast<std::size_t>(i)] = -H.gradient(v)[0];
    }

    auto shift_q = [&](double t) {
        // psi(q, p) <- psi(q - qspeed(p) t, p): phase e^{-i k_q qspeed t} per mode
        dft_axis(w.values.data(), g.nq, g.np, 0, -1);
        for (int i = 0; i < g.nq; ++i) {
            const double kq = fft_frequency(i, g.nq, g.dq());
            for (int j = 0; j < g.np; ++j) {
                const double ang = -kq * qspeed[static_cast<std::size_t>(j)] * t;
                w.values[g.index(i, j)] *= std::complex<double>(std::cos(ang), std::sin(ang));
            }
        }
        dft_axis(w.values.data(), g.nq, g.np, 0, +1);
        const double norm = 1.0 / g.nq;
        for (auto& v : w.values) v *= norm;
    };
    auto shift_p = [&](double t) {
        dft_axis(w.values.data(), g.nq, g.np, 1, -1);
        for (int i = 0; i < g.nq; ++i)
            for (int j = 0; j < g.np; ++j) {
                const double kp = fft_frequency(j, g.np, g.dp());
                const double ang = -kp * pspeed[static_cast<std::size_t>(i)] * t;
                w.values[g.index(i, j)] *= std::complex<double>(std::cos(ang), std::sin(ang));
            }
        dft_axis(w.values.data(), g.nq, g.np, 1, +1);
        const double norm = 1.0 / g.np;
        for (auto& v : w.values) v *= norm;
    };

    for (long s = 0; s < nsteps; ++s) {
        shift_q(0.5 * h);
        shift_p(h);
        shift_q(0.5 * h);
    }
    return w;
}

TransportResult evolve_kvn(const PolynomialHamiltonian& H, const KvNWave& psi0, double T,
                           KvnMethod method, const TransportOptions& opts) {
    if (method == KvnMethod::characteristics)
        return evolve_kvn_characteristics(H, psi0, T, opts);
    TransportResult out;
    out.wave = evolve_kvn_spectral_split(H, psi0, T, opts.dt);
    return out;
}

TransportResult classical_kernel_apply(const PolynomialHamiltonian& H, const KvNWave& psi0,
                                       double T, const TransportOptions& opts) {
    // Eq.-(7-1)-style delta kernel == characteristic pullback, same code path
    return evolve_kvn_characteristics(H, psi0, T, opts);
}

CompatibilityReport density_compatibility(const PolynomialHamiltonian& H, const KvNWave& psi0,
                                          double T, const TransportOptions& opts) {
    CompatibilityReport rep;
    const TransportResult psi_t = evolve_kvn_characteristics(H, psi0, T, opts);

    KvNWave rho0 = KvNWave::zeros(psi0.grid);
    for (std::size_t k = 0; k < psi0.values.size(); ++k)
        rho0.values[k] = std::norm(psi0.values[k]);
    const TransportResult rho_t = evolve_kvn_characteristics(H, rho0, T, opts);

    rep.l1_distance = l1_abs2_vs_density(psi_t.wave, rho_t.wave);
    rep.psi_norm_drift = std::fabs(psi_t.wave.l2_norm() - psi0.l2_norm());
    rep.rho_mass_drift = std::abs(rho_t.wave.integral() - rho0.integral());
    rep.support_violations = psi_t.support_violations + rho_t.support_violations;
    return rep;
}

}  // namespace kvn
