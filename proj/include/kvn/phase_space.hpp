#ifndef KVNCPI_PHASE_SPACE_HPP
#define KVNCPI_PHASE_SPACE_HPP

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace kvn {

/// Exact multivariate polynomial with real coefficients; variables are the
/// 2n phase-space coordinates ordered (q_1..q_n, p_1..p_n). Derivatives are
/// structural (no truncation); coefficients are doubles.
class Polynomial {
  public:
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    int nvars() const noexcept { return nvars_; }
    bool empty() const noexcept { return terms_.empty(); }
    const std::map<std::vector<int>, double>& terms() const noexcept { return terms_; }

    /// Adds coeff * prod_i x_i^exps[i]; merges with an existing term.
    void add_term(std::vector<int> exps, double coeff);

    double eval(std::span<const double> x) const;
    /// Allocation-free evaluation; requires compile() to have run since the
    /// last add_term (PolynomialHamiltonian compiles its polynomials once).
    double eval_raw(const double* x) const;
    /// Flattens terms into contiguous arrays for eval_raw. Idempotent.
    void compile() const;

    Polynomial derivative(int var) const;
    int degree() const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator*(double s) const;

    std::string str() const;

  private:
    int nvars_;
    std::map<std::vector<int>, double> terms_;
    mutable bool compiled_ = false;
    mutable std::vector<double> flat_coef_;
    mutable std::vector<int> flat_exp_;  // nvars per term
};

/// Standard symplectic structure for phi = (q_1..q_n, p_1..p_n):
/// omega = [[0, I], [-I, 0]] as a matrix with upper-index entries omega^{ab}.
struct SymplecticForm {
    int n = 1;

    int entry(int a, int b) const noexcept {
        if (b == a + n) return 1;
        if (a == b + n) return -1;
        return 0;
    }
    /// out = omega * v
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd matrix() const;
};

/// Polynomial Hamiltonian H(phi) over 2n-dimensional phase space with
/// precomputed derivative polynomials up to third order.
class PolynomialHamiltonian {
  public:
    PolynomialHamiltonian(int dof, Polynomial h);

    int dof() const noexcept { return n_; }
    int dim() const noexcept { return 2 * n_; }
    const SymplecticForm& omega() const noexcept { return omega_; }
    const Polynomial& poly() const noexcept { return h_; }

    double value(const Eigen::VectorXd& phi) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& phi) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& phi) const;
    double third(int a, int b, int c, const Eigen::VectorXd& phi) const;

    /// Hamiltonian vector field omega^{ab} d_b H.
    Eigen::VectorXd vector_field(const Eigen::VectorXd& phi) const;
    /// Allocation-free variant for hot loops (out must hold 2n doubles).
    void vector_field_into(const double* phi, double* out) const;
    /// Stability matrix A^a_b = omega^{ac} d_c d_b H (tangent flow generator).
    Eigen::MatrixXd stability_matrix(const Eigen::VectorXd& phi) const;

    bool is_quadratic() const;
    /// True when H = T(p) + V(q) (no mixed q/p monomials).
    bool is_separable() const;
    int degree() const { return h_.degree(); }

    // canonical test systems (n = 1)
    static PolynomialHamiltonian harmonic(double mass = 1.0, double omega = 1.0);
    static PolynomialHamiltonian free_particle(double mass = 1.0);
    static PolynomialHamiltonian quartic(double lambda, double mass = 1.0, double omega = 1.0);

  private:
    int n_;
    Polynomial h_;
    SymplecticForm omega_;
    std::vector<Polynomial> grad_;                // [2n]
    std::vector<std::vector<Polynomial>> hess_;   // [2n][2n]
    std::vector<std::vector<std::vector<Polynomial>>> third_;  // [2n][2n][2n]
};

/// Sampled flow: phi(t_k) and optionally the monodromy M(t_k) = dphi(t_k)/dphi(0).
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::MatrixXd> tangents;  // empty unless requested

    const Eigen::VectorXd& final_state() const { return states.back(); }
    const Eigen::MatrixXd& final_tangent() const { return tangents.back(); }
};

/// Fixed-step RK4 integration of phidot = omega grad H from t=0 to t=T.
/// The step is adjusted to h = T/round(T/dt) so the final time is hit exactly.
/// With with_tangent, co-integrates Mdot = A(phi(t)) M through the same RK4
/// stages. store_stride thins the stored samples (endpoints always kept).
Trajectory integrate_flow(const PolynomialHamiltonian& H, const Eigen::VectorXd& phi0,
                          double T, double dt, bool with_tangent = false,
                          int store_stride = 1);

/// Kick-drift-kick leapfrog for separable H; second-order cross-check.
Trajectory leapfrog_flow(const PolynomialHamiltonian& H, const Eigen::VectorXd& phi0,
                         double T, double dt, int store_stride = 1);

/// Central-difference estimate of dphi(T)/dphi(0) from 4n flow integrations;
/// the independent oracle for the co-integrated tangent map.
Eigen::MatrixXd finite_difference_jacobian(const PolynomialHamiltonian& H,
                                           const Eigen::VectorXd& phi0, double T,
                                           double dt, double eps);

}  // namespace kvn

#endif
