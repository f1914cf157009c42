#include "kvn/propagator.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kvn {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// splits a separable H into T(p) = H(0,p) - H(0,0) + H(0,0) and V(q) = H(q,0);
// also reports whether V has any q-dependence at all
void check_separable(const PolynomialHamiltonian& H) {
    if (H.dof() != 1)
        throw std::invalid_argument("propagator: one degree of freedom only");
    if (!H.is_separable())
        throw std::invalid_argument("propagator: Hamiltonian must be separable (T(p) + V(q))");
}

bool potential_vanishes(const PolynomialHamiltonian& H) {
    for (const auto& [exps, coeff] : H.poly().terms())
        if (exps[0] > 0) return false;
    return true;
}

double kinetic_at(const PolynomialHamiltonian& H, double p) {
    Eigen::Vector2d a(0.0, p), b(0.0, 0.0);
    return H.value(a) - H.value(b);
}

double potential_at(const PolynomialHamiltonian& H, double x) {
    Eigen::Vector2d a(x, 0.0);
    return H.value(a);
}

std::complex<double> cis(double ang) { return {std::cos(ang), std::sin(ang)}; }

// int exp(-A u^2 + B u + C) du = sqrt(pi/A) exp(B^2/(4A) + C), Re A > 0
std::complex<double> gauss_integral(std::complex<double> a, std::complex<double> b,
                                    std::complex<double> c) {
    return std::sqrt(M_PI / a) * std::exp(b * b / (4.0 * a) + c);
}

}  // namespace

void SpatialGrid1D::validate() const {
    if (!(xmax > xmin)) throw std::invalid_argument("SpatialGrid1D: empty extent");
    if (n < 8) throw std::invalid_argument("SpatialGrid1D: need at least 8 points");
}

Propagator::Propagator(Representation rep, const PolynomialHamiltonian& H, SpatialGrid1D grid,
                       double T, SlicingScheme scheme, double delta)
    : rep_(rep), grid_(grid), time_(T), delta_(delta), scheme_(scheme) {
    grid_.validate();
    check_separable(H);
    if (!(delta > 0.0)) throw std::invalid_argument("propagator: Delta must be > 0");
    if (scheme_.slices < 1) throw std::invalid_argument("propagator: need at least one slice");
    if (T < 0.0) throw std::invalid_argument("propagator: T must be >= 0");
    dt_ = (scheme_.slices > 0) ? T / scheme_.slices : 0.0;
    potential_is_zero_ = potential_vanishes(H);

    const int n = grid_.n;
    exp_v_.resize(n);
    exp_v_half_.resize(n);
    exp_k_.resize(n);
    exp_k_half_.resize(n);
    for (int j = 0; j < n; ++j) {
        const double v = potential_at(H, grid_.x(j));
        exp_v_[j] = cis(-v * dt_ / delta_);
        exp_v_half_[j] = cis(-v * dt_ / (2.0 * delta_));
    }
    twiddle_.resize(n);
    for (int m = 0; m < n; ++m) {
        const double t = kinetic_at(H, grid_.momentum(m, delta_));
        exp_k_[m] = cis(-t * dt_ / delta_);
        exp_k_half_[m] = cis(-t * dt_ / (2.0 * delta_));
        twiddle_[m] = cis(-fft_frequency(m, n, grid_.dx()) * grid_.xmin);
    }
    fft_ = std::make_shared<Fft1D>(n);
}

Eigen::VectorXcd Propagator::apply(const Eigen::VectorXcd& state) const {
    if (state.size() != grid_.n) throw std::invalid_argument("Propagator::apply: size mismatch");
    Eigen::VectorXcd f = state;
    if (time_ == 0.0) return f;
    const int n = grid_.n;
    const double inv_n = 1.0 / n;

    auto fft_fwd = [&](Eigen::VectorXcd& v) { fft_->transform(v.data(), -1); };
    auto fft_bwd = [&](Eigen::VectorXcd& v) {
        fft_->transform(v.data(), +1);
        v *= inv_n;
    };

    if (rep_ == Representation::position) {
        if (scheme_.splitting == Splitting::strang) {
            f.array() *= exp_v_half_.array();
            for (int s = 0; s < scheme_.slices; ++s) {
                fft_fwd(f);
                f.array() *= exp_k_.array();
                fft_bwd(f);
                if (s + 1 < scheme_.slices) f.array() *= exp_v_.array();
            }
            f.array() *= exp_v_half_.array();
        } else {
            for (int s = 0; s < scheme_.slices; ++s) {
                f.array() *= exp_v_.array();
                fft_fwd(f);
                f.array() *= exp_k_.array();
                fft_bwd(f);
            }
        }
        return f;
    }

    // momentum representation: conjugate sweep order, potential applied in
    // position space (grid transforms share the member plan so apply() stays
    // thread-safe); a vanishing potential keeps the kernel exactly diagonal
    auto potential_sweep = [&](Eigen::VectorXcd& v) {
        if (potential_is_zero_) return;
        for (int m = 0; m < n; ++m) v[m] *= std::conj(twiddle_[m]);
        fft_->transform(v.data(), +1);
        v.array() *= exp_v_.array();
        fft_->transform(v.data(), -1);
        for (int m = 0; m < n; ++m) v[m] *= twiddle_[m] * inv_n;
    };

    if (scheme_.splitting == Splitting::strang) {
        f.array() *= exp_k_half_.array();
        for (int s = 0; s < scheme_.slices; ++s) {
            potential_sweep(f);
            if (s + 1 < scheme_.slices) f.array() *= exp_k_.array();
        }
        f.array() *= exp_k_half_.array();
    } else {
        for (int s = 0; s < scheme_.slices; ++s) {
            potential_sweep(f);
            f.array() *= exp_k_.array();
        }
    }
    return f;
}

Eigen::MatrixXcd Propagator::materialize(bool parallel) const {
    const int n = grid_.n;
    Eigen::MatrixXcd kernel(n, n);
#pragma omp parallel for schedule(static) if (parallel)
    for (int col = 0; col < n; ++col) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e[col] = 1.0;
        kernel.col(col) = apply(e);
    }
    return kernel;
}

Propagator position_propagator(const PolynomialHamiltonian& H, const SpatialGrid1D& grid,
                               double T, const SlicingScheme& scheme, double delta) {
    return Propagator(Representation::position, H, grid, T, scheme, delta);
}

Propagator momentum_propagator(const PolynomialHamiltonian& H, const SpatialGrid1D& grid,
                               double T, const SlicingScheme& scheme, double delta) {
    return Propagator(Representation::momentum, H, grid, T, scheme, delta);
}

Eigen::VectorXcd to_momentum_rep(const SpatialGrid1D& grid, double delta,
                                 const Eigen::VectorXcd& psi) {
    const int n = grid.n;
    Eigen::VectorXcd out = psi;
    Fft1D fft(n);
    fft.transform(out.data(), -1);
    const double scale = grid.dx() / std::sqrt(2.0 * M_PI * delta);
    for (int m = 0; m < n; ++m) {
        const double k = fft_frequency(m, n, grid.dx());
        out[m] *= scale * cis(-k * grid.xmin);
    }
    return out;
}

Eigen::VectorXcd to_position_rep(const SpatialGrid1D& grid, double delta,
                                 const Eigen::VectorXcd& phi) {
    const int n = grid.n;
    Eigen::VectorXcd out = phi;
    const double scale = std::sqrt(2.0 * M_PI * delta) / (grid.dx() * n);
    for (int m = 0; m < n; ++m) {
        const double k = fft_frequency(m, n, grid.dx());
        out[m] *= cis(k * grid.xmin);
    }
    Fft1D fft(n);
    fft.transform(out.data(), +1);
    out *= scale;
    return out;
}

Eigen::VectorXcd packet_values(const SpatialGrid1D& grid, const GaussianPacket& pkt) {
    Eigen::VectorXcd out(grid.n);
    const double norm = std::pow(M_PI * pkt.width * pkt.width, -0.25);
    for (int j = 0; j < grid.n; ++j) {
        const double u = grid.x(j) - pkt.center;
        out[j] = norm * std::exp(-u * u / (2.0 * pkt.width * pkt.width)) * cis(pkt.wavenumber * u);
    }
    return out;
}

Eigen::VectorXcd packet_momentum_values(const SpatialGrid1D& grid, double delta,
                                        const GaussianPacket& pkt) {
    // phi0(p) = (w^2/(pi Delta^2))^{1/4} exp(-w^2 (p/Delta - k)^2 / 2) exp(-i p a / Delta)
    Eigen::VectorXcd out(grid.n);
    const double w = pkt.width;
    const double norm = std::pow(w * w / (M_PI * delta * delta), 0.25);
    for (int m = 0; m < grid.n; ++m) {
        const double p = grid.momentum(m, delta);
        const double dev = p / delta - pkt.wavenumber;
        out[m] = norm * std::exp(-w * w * dev * dev / 2.0) * cis(-p * pkt.center / delta);
    }
    return out;
}

Eigen::VectorXcd free_kernel_action(const SpatialGrid1D& grid, double T,
                                    const GaussianPacket& pkt, double mass, double delta) {
    Eigen::VectorXcd out(grid.n);
    if (T == 0.0) return packet_values(grid, pkt);
    const double w2 = pkt.width * pkt.width;
    const std::complex<double> pref =
        std::sqrt(mass / (2.0 * M_PI * kI * delta * T)) * std::pow(M_PI * w2, -0.25);
    const std::complex<double> a = 1.0 / (2.0 * w2) - kI * mass / (2.0 * delta * T);
    for (int j = 0; j < grid.n; ++j) {
        const double xf = grid.x(j);
        const std::complex<double> b =
            -kI * mass * xf / (delta * T) + pkt.center / w2 + kI * pkt.wavenumber;
        const std::complex<double> c = kI * mass * xf * xf / (2.0 * delta * T) -
                                       pkt.center * pkt.center / (2.0 * w2) -
                                       kI * pkt.wavenumber * pkt.center;
        out[j] = pref * gauss_integral(a, b, c);
    }
    return out;
}

Eigen::VectorXcd mehler_kernel_action(const SpatialGrid1D& grid, double T,
                                      const GaussianPacket& pkt, double delta) {
    if (T == 0.0) return packet_values(grid, pkt);
    const double st = std::sin(T), ct = std::cos(T);
    if (std::fabs(st) < 1e-12)
        throw std::invalid_argument("mehler_kernel_action: sin T too small (caustic)");
    Eigen::VectorXcd out(grid.n);
    const double w2 = pkt.width * pkt.width;
    const std::complex<double> pref =
        std::sqrt(1.0 / (2.0 * M_PI * kI * delta * st)) * std::pow(M_PI * w2, -0.25);
    const std::complex<double> a = 1.0 / (2.0 * w2) - kI * ct / (2.0 * delta * st);
    for (int j = 0; j < grid.n; ++j) {
        const double xf = grid.x(j);
        const std::complex<double> b =
            -kI * xf / (delta * st) + pkt.center / w2 + kI * pkt.wavenumber;
        const std::complex<double> c = kI * xf * xf * ct / (2.0 * delta * st) -
                                       pkt.center * pkt.center / (2.0 * w2) -
                                       kI * pkt.wavenumber * pkt.center;
        out[j] = pref * gauss_integral(a, b, c);
    }
    return out;
}

Eigen::VectorXcd free_momentum_kernel_action(const SpatialGrid1D& grid, double T,
                                             const GaussianPacket& pkt, double mass,
                                             double delta) {
    // momentum conservation: phi_T(p) = exp(-i p^2 T / (2 m Delta)) phi_0(p)
    Eigen::VectorXcd out = packet_momentum_values(grid, delta, pkt);
    for (int m = 0; m < grid.n; ++m) {
        const double p = grid.momentum(m, delta);
        out[m] *= cis(-p * p * T / (2.0 * mass * delta));
    }
    return out;
}

Eigen::VectorXcd mehler_momentum_kernel_action(const SpatialGrid1D& grid, double T,
                                               const GaussianPacket& pkt, double delta) {
    // harmonic self-duality (m = omega = 1): the momentum kernel is the
    // Mehler form in p; apply it to the closed-form phi_0 by Gaussian integral
    if (T == 0.0) return packet_momentum_values(grid, delta, pkt);
    const double st = std::sin(T), ct = std::cos(T);
    if (std::fabs(st) < 1e-12)
        throw std::invalid_argument("mehler_momentum_kernel_action: sin T too small");
    const double w = pkt.width;
    const double w2 = w * w;
    Eigen::VectorXcd out(grid.n);
    const std::complex<double> norm0 = std::pow(w2 / (M_PI * delta * delta), 0.25);
    const std::complex<double> pref = std::sqrt(1.0 / (2.0 * M_PI * kI * delta * st)) * norm0;
    // phi0(pi) = norm0 exp(-w^2 (pi/Delta - k)^2/2 - i pi a/Delta)
    //          = norm0 exp(-A0 pi^2 + B0 pi + C0)
    const std::complex<double> a0 = w2 / (2.0 * delta * delta);
    const std::complex<double> b0 = w2 * pkt.wavenumber / delta - kI * pkt.center / delta;
    const std::complex<double> c0 = -w2 * pkt.wavenumber * pkt.wavenumber / 2.0;
    const std::complex<double> a = a0 - kI * ct / (2.0 * delta * st);
    for (int m = 0; m < grid.n; ++m) {
        const double pf = grid.momentum(m, delta);
        const std::complex<double> b = b0 - kI * pf / (delta * st);
        const std::complex<double> c = c0 + kI * pf * pf * ct / (2.0 * delta * st);
        out[m] = pref * gauss_integral(a, b, c);
    }
    return out;
}

double packet_oracle_error(const Propagator& prop,
                           std::span<const GaussianPacket> packets,
                           const std::function<Eigen::VectorXcd(const GaussianPacket&)>& oracle) {
    const double measure =
        prop.representation() == Representation::position
            ? prop.grid().dx()
            : 2.0 * M_PI * prop.delta() / (prop.grid().dx() * prop.grid().n);
    double worst = 0.0;
    for (const auto& pkt : packets) {
        const Eigen::VectorXcd start =
            prop.representation() == Representation::position
                ? packet_values(prop.grid(), pkt)
                : packet_momentum_values(prop.grid(), prop.delta(), pkt);
        const Eigen::VectorXcd got = prop.apply(start);
        const Eigen::VectorXcd want = oracle(pkt);
        const double err = std::sqrt((got - want).squaredNorm() * measure);
        const double ref = std::sqrt(want.squaredNorm() * measure);
        worst = std::max(worst, err / (ref > 0.0 ? ref : 1.0));
    }
    return worst;
}

double fourier_duality_residual(const Propagator& k_pos, const Propagator& k_mom,
                                std::span<const GaussianPacket> packets) {
    if (!(k_pos.grid() == k_mom.grid()))
        throw std::invalid_argument("fourier_duality_residual: grid mismatch");
    if (k_pos.delta() != k_mom.delta())
        throw std::invalid_argument("fourier_duality_residual: Delta mismatch");
    double worst = 0.0;
    for (const auto& pkt : packets) {
        const Eigen::VectorXcd psi = packet_values(k_pos.grid(), pkt);
        const Eigen::VectorXcd lhs =
            to_momentum_rep(k_pos.grid(), k_pos.delta(), k_pos.apply(psi));
        const Eigen::VectorXcd rhs =
            k_mom.apply(to_momentum_rep(k_pos.grid(), k_pos.delta(), psi));
        const double ref = lhs.norm();
        worst = std::max(worst, (lhs - rhs).norm() / (ref > 0.0 ? ref : 1.0));
    }
    return worst;
}

double sliced_action(const PolynomialHamiltonian& H,
                     std::span<const Eigen::VectorXd> path, double dt) {
    if (path.size() < 2) throw std::invalid_argument("sliced_action: need at least 2 states");
    const int n = H.dof();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        double t = 0.0;
        for (int j = 0; j < n; ++j)
            t += path[k][n + j] * (path[k + 1][j] - path[k][j]);
        t -= H.value(path[k]) * dt;
        acc += t;
    }
    return acc;
}

std::vector<double> sliced_phases(const PolynomialHamiltonian& H,
                                  std::span<const Eigen::VectorXd> path, double dt,
                                  double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("sliced_phases: Delta must be > 0");
    const int n = H.dof();
    std::vector<double> out;
    out.reserve(path.size() - 1);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        double t = 0.0;
        for (int j = 0; j < n; ++j)
            t += path[k][n + j] * (path[k + 1][j] - path[k][j]);
        t -= H.value(path[k]) * dt;
        out.push_back(t / delta);
    }
    return out;
}

BridgeReport bridge_demonstration(const PolynomialHamiltonian& H, const BridgeSpec& spec) {
    check_separable(H);
    if (spec.points < 2 || spec.slices < 1)
        throw std::invalid_argument("bridge_demonstration: bad lattice spec");
    const int P = spec.points;
    const int N = spec.slices;
    double interior = 1.0;
    for (int k = 1; k < N; ++k) interior *= P;
    if (interior > static_cast<double>(spec.max_paths))
        throw std::invalid_argument("bridge_demonstration: path count exceeds guard");

    const double dx = (spec.xmax - spec.xmin) / P;
    std::vector<double> xs(static_cast<std::size_t>(P));
    for (int j = 0; j < P; ++j) xs[static_cast<std::size_t>(j)] = spec.xmin + dx * j;
    // momentum lattice conjugate to the periodic spatial lattice
    std::vector<double> ps(static_cast<std::size_t>(P));
    for (int m = 0; m < P; ++m)
        ps[static_cast<std::size_t>(m)] = spec.delta * fft_frequency(m, P, dx);

    // one-slice weight: (1/P) sum_p exp(i [p (b-a) - H(a,p) dt] / Delta)
    auto weight = [&](double a, double b) {
        std::complex<double> s{0.0, 0.0};
        for (int m = 0; m < P; ++m) {
            Eigen::Vector2d phi(a, ps[static_cast<std::size_t>(m)]);
            const double phase =
                (ps[static_cast<std::size_t>(m)] * (b - a) - H.value(phi) * spec.dt) / spec.delta;
            s += cis(phase);
        }
        return s / static_cast<double>(P);
    };

    BridgeReport rep;
    rep.paths = static_cast<long>(interior);

    rep.transfer = Eigen::MatrixXcd(P, P);
    Eigen::MatrixXcd u(P, P);
    for (int f = 0; f < P; ++f)
        for (int i = 0; i < P; ++i)
            u(f, i) = weight(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(f)]);
    rep.transfer = u;
    for (int k = 1; k < N; ++k) rep.transfer = u * rep.transfer;

    rep.path_sum = Eigen::MatrixXcd::Zero(P, P);
    std::vector<int> idx(static_cast<std::size_t>(std::max(N - 1, 0)), 0);
    for (int f = 0; f < P; ++f) {
        for (int i = 0; i < P; ++i) {
            std::complex<double> total{0.0, 0.0};
            std::fill(idx.begin(), idx.end(), 0);
            while (true) {
                double prev = xs[static_cast<std::size_t>(i)];
                std::complex<double> w{1.0, 0.0};
                for (int k = 0; k < N - 1; ++k) {
                    const double next = xs[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
                    w *= weight(prev, next);
                    prev = next;
                }
                w *= weight(prev, xs[static_cast<std::size_t>(f)]);
                total += w;
                // odometer over interior slices
                int carry = 0;
                while (carry < N - 1) {
                    if (++idx[static_cast<std::size_t>(carry)] < P) break;
                    idx[static_cast<std::size_t>(carry)] = 0;
                    ++carry;
                }
                if (carry >= N - 1) break;
            }
            rep.path_sum(f, i) = total;
        }
    }

    rep.rel_error = (rep.path_sum - rep.transfer).norm() / rep.transfer.norm();
    return rep;
}

double position_variance(const SpatialGrid1D& grid, const Eigen::VectorXcd& state) {
    double mass = 0.0, mean = 0.0;
    for (int j = 0; j < grid.n; ++j) {
        const double w = std::norm(state[j]);
        mass += w;
        mean += w * grid.x(j);
    }
    if (mass == 0.0) return 0.0;
    mean /= mass;
    double var = 0.0;
    for (int j = 0; j < grid.n; ++j)
        var += std::norm(state[j]) * (grid.x(j) - mean) * (grid.x(j) - mean);
    return var / mass;
}

}  // namespace kvn
