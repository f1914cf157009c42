#ifndef KVNCPI_EXTENDED_STATE_HPP
#define KVNCPI_EXTENDED_STATE_HPP

#include <Eigen/Dense>

namespace kvn {

/// One-time snapshot of the extended multiplet (phi, lambda, c, cbar).
/// Numeric ghost mode: c and cbar are real coefficient vectors, one fixed
/// odd generator per index. lambda is complex because the ghost bilinear
/// in its equation of motion carries a factor i (it stays real for
/// quadratic Hamiltonians and real initial data).
struct ExtendedState {
    Eigen::VectorXd phi;      // 2n
    Eigen::VectorXcd lambda;  // 2n
    Eigen::VectorXd c;        // 2n
    Eigen::VectorXd cbar;     // 2n

    static ExtendedState zeros(int dof) {
        ExtendedState s;
        s.phi = Eigen::VectorXd::Zero(2 * dof);
        s.lambda = Eigen::VectorXcd::Zero(2 * dof);
        s.c = Eigen::VectorXd::Zero(2 * dof);
        s.cbar = Eigen::VectorXd::Zero(2 * dof);
        return s;
    }
    int dim() const { return static_cast<int>(phi.size()); }
};

}  // namespace kvn

#endif
