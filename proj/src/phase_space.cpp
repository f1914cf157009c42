#include "kvn/phase_space.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kvn {

void Polynomial::add_term(std::vector<int> exps, double coeff) {
    if (static_cast<int>(exps.size()) != nvars_)
        throw std::invalid_argument("Polynomial: exponent vector has wrong length");
    for (int e : exps)
        if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
    if (coeff == 0.0) return;
    compiled_ = false;
    auto [it, inserted] = terms_.try_emplace(std::move(exps), coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Polynomial::eval(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& [exps, coeff] : terms_) {
        double t = coeff;
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < exps[i]; ++e) t *= x[i];
        acc += t;
    }
    return acc;
}

void Polynomial::compile() const {
    if (compiled_) return;
    flat_coef_.clear();
    flat_exp_.clear();
    for (const auto& [exps, coeff] : terms_) {
        flat_coef_.push_back(coeff);
        flat_exp_.insert(flat_exp_.end(), exps.begin(), exps.end());
    }
    compiled_ = true;
}

double Polynomial::eval_raw(const double* x) const {
    double acc = 0.0;
    const int* e = flat_exp_.data();
    for (double coeff : flat_coef_) {
        double t = coeff;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        e += nvars_;
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("Polynomial::derivative: bad variable");
    Polynomial out(nvars_);
    for (const auto& [exps, coeff] : terms_) {
        if (exps[var] == 0) continue;
        std::vector<int> e = exps;
        const double c = coeff * e[var];
        e[var] -= 1;
        out.add_term(std::move(e), c);
    }
    return out;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [exps, coeff] : terms_) {
        int s = 0;
        for (int e : exps) s += e;
        d = std::max(d, s);
    }
    return d;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    if (nvars_ != rhs.nvars_) throw std::invalid_argument("Polynomial: mixed variable counts");
    Polynomial out = *this;
    for (const auto& [exps, coeff] : rhs.terms_) out.add_term(exps, coeff);
    return out;
}

Polynomial Polynomial::operator*(double s) const {
    Polynomial out(nvars_);
    for (const auto& [exps, coeff] : terms_) out.add_term(exps, coeff * s);
    return out;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    char buf[64];
    for (const auto& [exps, coeff] : terms_) {
        if (!out.empty()) out += " + ";
        std::snprintf(buf, sizeof buf, "%.17g", coeff);
        out += buf;
        for (int i = 0; i < nvars_; ++i)
            if (exps[i] > 0) {
                std::snprintf(buf, sizeof buf, " x%d^%d", i, exps[i]);
                out += buf;
            }
    }
    return out;
}

Eigen::VectorXd SymplecticForm::apply(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(2 * n);
    out.head(n) = v.tail(n);
    out.tail(n) = -v.head(n);
    return out;
}

Eigen::MatrixXd SymplecticForm::matrix() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    m.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    m.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return m;
}

PolynomialHamiltonian::PolynomialHamiltonian(int dof, Polynomial h)
    : n_(dof), h_(std::move(h)), omega_{dof} {
    if (dof < 1) throw std::invalid_argument("PolynomialHamiltonian: dof must be >= 1");
    if (h_.nvars() != 2 * dof)
        throw std::invalid_argument("PolynomialHamiltonian: polynomial must have 2*dof variables");
    const int d = 2 * n_;
    grad_.reserve(d);
    for (int a = 0; a < d; ++a) grad_.push_back(h_.derivative(a));
    hess_.resize(d);
    for (int a = 0; a < d; ++a) {
        hess_[a].reserve(d);
        for (int b = 0; b < d; ++b) hess_[a].push_back(grad_[a].derivative(b));
    }
    third_.resize(d);
    for (int a = 0; a < d; ++a) {
        third_[a].resize(d);
        for (int b = 0; b < d; ++b) {
            third_[a][b].reserve(d);
            for (int c = 0; c < d; ++c) third_[a][b].push_back(hess_[a][b].derivative(c));
        }
    }
    // flatten every derived polynomial up front so the const evaluation
    // paths are allocation-free and safe to share across threads
    h_.compile();
    for (auto& g : grad_) g.compile();
    for (auto& row : hess_)
        for (auto& p : row) p.compile();
    for (auto& plane : third_)
        for (auto& row : plane)
            for (auto& p : row) p.compile();
}

double PolynomialHamiltonian::value(const Eigen::VectorXd& phi) const {
    return h_.eval({phi.data(), static_cast<std::size_t>(phi.size())});
}

Eigen::VectorXd PolynomialHamiltonian::gradient(const Eigen::VectorXd& phi) const {
    const int d = dim();
    Eigen::VectorXd g(d);
    std::span<const double> x{phi.data(), static_cast<std::size_t>(phi.size())};
    for (int a = 0; a < d; ++a) g[a] = grad_[a].eval(x);
    return g;
}

Eigen::MatrixXd PolynomialHamiltonian::hessian(const Eigen::VectorXd& phi) const {
    const int d = dim();
    Eigen::MatrixXd m(d, d);
    std::span<const double> x{phi.data(), static_cast<std::size_t>(phi.size())};
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) m(a, b) = hess_[a][b].eval(x);
    return m;
}

double PolynomialHamiltonian::third(int a, int b, int c, const Eigen::VectorXd& phi) const {
    return third_[a][b][c].eval({phi.data(), static_cast<std::size_t>(phi.size())});
}

Eigen::VectorXd PolynomialHamiltonian::vector_field(const Eigen::VectorXd& phi) const {
    return omega_.apply(gradient(phi));
}

void PolynomialHamiltonian::vector_field_into(const double* phi, double* out) const {
    const int n = n_;
    for (int a = 0; a < n; ++a) out[a] = grad_[n + a].eval_raw(phi);
    for (int a = 0; a < n; ++a) out[n + a] = -grad_[a].eval_raw(phi);
}

Eigen::MatrixXd PolynomialHamiltonian::stability_matrix(const Eigen::VectorXd& phi) const {
    // A = omega * Hess(H): rows 0..n-1 come from the p-block, rows n..2n-1 from -q-block
    const int d = dim();
    const int n = n_;
    Eigen::MatrixXd hess = hessian(phi);
    Eigen::MatrixXd a(d, d);
    a.topRows(n) = hess.bottomRows(n);
    a.bottomRows(n) = -hess.topRows(n);
    return a;
}

bool PolynomialHamiltonian::is_quadratic() const { return h_.degree() <= 2; }

bool PolynomialHamiltonian::is_separable() const {
    for (const auto& [exps, coeff] : h_.terms()) {
        int dq = 0, dp = 0;
        for (int i = 0; i < n_; ++i) dq += exps[i];
        for (int i = n_; i < 2 * n_; ++i) dp += exps[i];
        if (dq > 0 && dp > 0) return false;
    }
    return true;
}

PolynomialHamiltonian PolynomialHamiltonian::harmonic(double mass, double omega) {
    Polynomial h(2);
    h.add_term({2, 0}, 0.5 * mass * omega * omega);
    h.add_term({0, 2}, 0.5 / mass);
    return {1, h};
}

PolynomialHamiltonian PolynomialHamiltonian::free_particle(double mass) {
    Polynomial h(2);
    h.add_term({0, 2}, 0.5 / mass);
    return {1, h};
}

PolynomialHamiltonian PolynomialHamiltonian::quartic(double lambda, double mass, double omega) {
    Polynomial h(2);
    h.add_term({2, 0}, 0.5 * mass * omega * omega);
    h.add_term({0, 2}, 0.5 / mass);
    h.add_term({4, 0}, 0.25 * lambda);
    return {1, h};
}

namespace {

// Shared step-count policy: land on T exactly, guard against overflow.
long step_count(double T, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_flow: dt must be > 0");
    if (T < 0.0) throw std::invalid_argument("integrate_flow: T must be >= 0");
    const double raw = T / dt;
    if (raw > 5e8) throw std::overflow_error("integrate_flow: step count overflow");
    return std::max<long>(1, std::lround(raw));
}

}  // namespace

Trajectory integrate_flow(const PolynomialHamiltonian& H, const Eigen::VectorXd& phi0,
                          double T, double dt, bool with_tangent, int store_stride) {
    const int d = H.dim();
    if (phi0.size() != d) throw std::invalid_argument("integrate_flow: state has wrong dimension");
    if (store_stride < 1) store_stride = 1;

    Trajectory out;
    if (T == 0.0) {
        out.times.push_back(0.0);
        out.states.push_back(phi0);
        if (with_tangent) out.tangents.push_back(Eigen::MatrixXd::Identity(d, d));
        return out;
    }

    const long nsteps = step_count(T, dt);
    const double h = T / static_cast<double>(nsteps);

    Eigen::VectorXd phi = phi0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
    out.times.push_back(0.0);
    out.states.push_back(phi);
    if (with_tangent) out.tangents.push_back(m);

    Eigen::VectorXd k1(d), k2(d), k3(d), k4(d);
    Eigen::MatrixXd km1, km2, km3, km4;
    for (long step = 0; step < nsteps; ++step) {
        k1 = H.vector_field(phi);
        k2 = H.vector_field(phi + 0.5 * h * k1);
        k3 = H.vector_field(phi + 0.5 * h * k2);
        k4 = H.vector_field(phi + h * k3);
        if (with_tangent) {
            // tangent stages use the same phase-space stage points
            km1 = H.stability_matrix(phi) * m;
            km2 = H.stability_matrix(phi + 0.5 * h * k1) * (m + 0.5 * h * km1);
            km3 = H.stability_matrix(phi + 0.5 * h * k2) * (m + 0.5 * h * km2);
            km4 = H.stability_matrix(phi + h * k3) * (m + h * km3);
            m += (h / 6.0) * (km1 + 2.0 * km2 + 2.0 * km3 + km4);
        }
        phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (step % store_stride == store_stride - 1 || step == nsteps - 1) {
            out.times.push_back(h * static_cast<double>(step + 1));
            out.states.push_back(phi);
            if (with_tangent) out.tangents.push_back(m);
        }
    }
    return out;
}

Trajectory leapfrog_flow(const PolynomialHamiltonian& H, const Eigen::VectorXd& phi0,
                         double T, double dt, int store_stride) {
    if (!H.is_separable())
        throw std::invalid_argument("leapfrog_flow: Hamiltonian must be separable");
    const int d = H.dim();
    const int n = H.dof();
    if (phi0.size() != d) throw std::invalid_argument("leapfrog_flow: state has wrong dimension");
    if (store_stride < 1) store_stride = 1;

    Trajectory out;
    out.times.push_back(0.0);
    out.states.push_back(phi0);
    if (T == 0.0) return out;

    const long nsteps = step_count(T, dt);
    const double h = T / static_cast<double>(nsteps);

    Eigen::VectorXd phi = phi0;
    for (long step = 0; step < nsteps; ++step) {
        Eigen::VectorXd g = H.gradient(phi);
        phi.tail(n) -= 0.5 * h * g.head(n);           // kick
        g = H.gradient(phi);
        phi.head(n) += h * g.tail(n);                 // drift
        g = H.gradient(phi);
        phi.tail(n) -= 0.5 * h * g.head(n);           // kick
        if (step % store_stride == store_stride - 1 || step == nsteps - 1) {
            out.times.push_back(h * static_cast<double>(step + 1));
            out.states.push_back(phi);
        }
    }
    return out;
}

Eigen::MatrixXd finite_difference_jacobian(const PolynomialHamiltonian& H,
                                           const Eigen::VectorXd& phi0, double T,
                                           double dt, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("finite_difference_jacobian: eps must be > 0");
    const int d = H.dim();
    Eigen::MatrixXd j(d, d);
    for (int col = 0; col < d; ++col) {
        Eigen::VectorXd plus = phi0, minus = phi0;
        plus[col] += eps;
        minus[col] -= eps;
        const Eigen::VectorXd fp = integrate_flow(H, plus, T, dt, false, 1 << 30).final_state();
        const Eigen::VectorXd fm = integrate_flow(H, minus, T, dt, false, 1 << 30).final_state();
        j.col(col) = (fp - fm) / (2.0 * eps);
    }
    return j;
}

}  // namespace kvn
