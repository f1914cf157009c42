#include "kvn/extended_dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace kvn {

namespace {

// flat packing [phi, c, cbar, Re lambda, Im lambda], 10n doubles
Eigen::VectorXd pack(const ExtendedState& s) {
    const int d = s.dim();
    Eigen::VectorXd y(5 * d);
    y.segment(0, d) = s.phi;
    y.segment(d, d) = s.c;
    y.segment(2 * d, d) = s.cbar;
    y.segment(3 * d, d) = s.lambda.real();
    y.segment(4 * d, d) = s.lambda.imag();
    return y;
}

ExtendedState unpack(const Eigen::VectorXd& y, int d) {
    ExtendedState s;
    s.phi = y.segment(0, d);
    s.c = y.segment(d, d);
    s.cbar = y.segment(2 * d, d);
    s.lambda = Eigen::VectorXcd(d);
    s.lambda.real() = y.segment(3 * d, d);
    s.lambda.imag() = y.segment(4 * d, d);
    return s;
}

Eigen::VectorXd rhs(const PolynomialHamiltonian& H, const Eigen::VectorXd& y) {
    const int d = H.dim();
    const Eigen::VectorXd phi = y.segment(0, d);
    const Eigen::VectorXd c = y.segment(d, d);
    const Eigen::VectorXd cbar = y.segment(2 * d, d);
    const Eigen::VectorXd lre = y.segment(3 * d, d);
    const Eigen::VectorXd lim = y.segment(4 * d, d);

    const Eigen::MatrixXd a = H.stability_matrix(phi);
    Eigen::VectorXd out(5 * d);
    out.segment(0, d) = H.vector_field(phi);
    out.segment(d, d) = a * c;
    out.segment(2 * d, d) = -a.transpose() * cbar;
    out.segment(3 * d, d) = -a.transpose() * lre;
    out.segment(4 * d, d) = -a.transpose() * lim;

    if (!H.is_quadratic()) {
        // t_a = cbar_e omega^{ec} (d_c d_b d_a H) c^b = -(omega cbar)_c T_{cba} c^b
        const Eigen::VectorXd u = H.omega().apply(cbar);
        for (int aidx = 0; aidx < d; ++aidx) {
            double t = 0.0;
            for (int cc = 0; cc < d; ++cc) {
                if (u[cc] == 0.0) continue;
                for (int b = 0; b < d; ++b) {
                    if (c[b] == 0.0) continue;
                    t -= u[cc] * H.third(cc, b, aidx, phi) * c[b];
                }
            }
            out[4 * d + aidx] -= t;  // lambdadot += -i t
        }
    }
    return out;
}

}  // namespace

ExtendedTrajectory extended_flow(const PolynomialHamiltonian& H, const ExtendedState& s0,
                                 double T, double dt, int store_stride) {
    const int d = H.dim();
    if (s0.dim() != d) throw std::invalid_argument("extended_flow: state dimension mismatch");
    if (!(dt > 0.0)) throw std::invalid_argument("extended_flow: dt must be > 0");
    if (T < 0.0) throw std::invalid_argument("extended_flow: T must be >= 0");
    if (store_stride < 1) store_stride = 1;

    ExtendedTrajectory out;
    out.times.push_back(0.0);
    out.states.push_back(s0);
    if (T == 0.0) return out;

    const double raw = T / dt;
    if (raw > 5e8) throw std::overflow_error("extended_flow: step count overflow");
    const long nsteps = std::max<long>(1, std::lround(raw));
    const double h = T / static_cast<double>(nsteps);

    Eigen::VectorXd y = pack(s0);
    for (long step = 0; step < nsteps; ++step) {
        const Eigen::VectorXd k1 = rhs(H, y);
        const Eigen::VectorXd k2 = rhs(H, y + 0.5 * h * k1);
        const Eigen::VectorXd k3 = rhs(H, y + 0.5 * h * k2);
        const Eigen::VectorXd k4 = rhs(H, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (step % store_stride == store_stride - 1 || step == nsteps - 1) {
            out.times.push_back(h * static_cast<double>(step + 1));
            out.states.push_back(unpack(y, d));
        }
    }
    return out;
}

std::complex<double> lie_derivative_value(const PolynomialHamiltonian& H,
                                          const ExtendedState& s) {
    const Eigen::VectorXd field = H.vector_field(s.phi);
    const Eigen::MatrixXd a = H.stability_matrix(s.phi);
    std::complex<double> v{0.0, 0.0};
    for (int i = 0; i < H.dim(); ++i) v += s.lambda[i] * field[i];
    const double bilinear = s.cbar.dot(a * s.c);
    return v + std::complex<double>(0.0, 1.0) * bilinear;
}

ChargeSeries conserved_charges(const PolynomialHamiltonian& H, const ExtendedTrajectory& traj) {
    ChargeSeries out;
    const std::complex<double> i{0.0, 1.0};
    out.times = traj.times;
    out.h_tilde.reserve(traj.states.size());
    for (const auto& s : traj.states) {
        out.h_tilde.push_back(lie_derivative_value(H, s));
        out.ghost_pairing.push_back(s.cbar.dot(s.c));
        std::complex<double> q{0.0, 0.0}, qbar{0.0, 0.0};
        const Eigen::VectorXcd omega_lambda =
            H.omega().matrix().cast<std::complex<double>>() * s.lambda;
        for (int a = 0; a < H.dim(); ++a) {
            q += s.c[a] * s.lambda[a];
            qbar += s.cbar[a] * omega_lambda[a];
        }
        out.q_charge.push_back(i * q);
        out.qbar_charge.push_back(i * qbar);
    }
    return out;
}

ChargeSeries::Drift ChargeSeries::max_drift() const {
    Drift d;
    if (times.empty()) return d;
    for (std::size_t k = 0; k < times.size(); ++k) {
        d.h_tilde = std::max(d.h_tilde, std::abs(h_tilde[k] - h_tilde[0]));
        d.ghost_pairing = std::max(d.ghost_pairing, std::abs(ghost_pairing[k] - ghost_pairing[0]));
        d.q_charge = std::max(d.q_charge, std::abs(q_charge[k] - q_charge[0]));
        d.qbar_charge = std::max(d.qbar_charge, std::abs(qbar_charge[k] - qbar_charge[0]));
    }
    return d;
}

PolyOneForm PolyOneForm::zero(int dof) {
    PolyOneForm f;
    f.comp.assign(2 * dof, Polynomial(2 * dof));
    return f;
}

PolyOneForm PolyOneForm::exterior_derivative(const Polynomial& f, int dof) {
    if (f.nvars() != 2 * dof)
        throw std::invalid_argument("exterior_derivative: variable count mismatch");
    PolyOneForm out;
    out.comp.reserve(2 * dof);
    for (int a = 0; a < 2 * dof; ++a) out.comp.push_back(f.derivative(a));
    return out;
}

TransportedOneForm::TransportedOneForm(const PolynomialHamiltonian& H, PolyOneForm form,
                                       double T, double dt)
    : reversed_(H.dof(), H.poly() * -1.0), form_(std::move(form)), T_(T), dt_(dt) {
    if (static_cast<int>(form_.comp.size()) != H.dim())
        throw std::invalid_argument("TransportedOneForm: component count mismatch");
}

Eigen::VectorXd TransportedOneForm::eval(const Eigen::VectorXd& phi) const {
    const int d = reversed_.dim();
    if (T_ == 0.0) {
        Eigen::VectorXd out(d);
        for (int a = 0; a < d; ++a)
            out[a] = form_.comp[a].eval({phi.data(), static_cast<std::size_t>(phi.size())});
        return out;
    }
    // backward flow = forward flow of -H; its tangent is d(Phi_{-T})/dphi
    const Trajectory back = integrate_flow(reversed_, phi, T_, dt_, true, 1 << 30);
    const Eigen::VectorXd y = back.final_state();
    const Eigen::MatrixXd j = back.final_tangent();
    Eigen::VectorXd psi_at_y(d);
    for (int b = 0; b < d; ++b)
        psi_at_y[b] = form_.comp[b].eval({y.data(), static_cast<std::size_t>(y.size())});
    return j.transpose() * psi_at_y;
}

TransportedOneForm transport_one_form(const PolynomialHamiltonian& H, PolyOneForm form,
                                      double T, double dt) {
    return TransportedOneForm(H, std::move(form), T, dt);
}

}  // namespace kvn
