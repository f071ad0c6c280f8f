#pragma once

#include <Eigen/Dense>

#include "canmet/homology.hpp"

namespace canmet {

struct QuadratureConfig {
    int gl_order = 24;
    double rel_tol = 1e-10;
    int max_depth = 12;

    void validate() const;
};

/// Periods of the monomial basis w_k = x^{k-1} dx / y over the reduced
/// symplectic basis, the normalized period matrix, and derived data.
struct RiemannMatrix {
    int genus = 0;
    Eigen::MatrixXcd P;            // P(i,j) = int_{A_i} w_j
    Eigen::MatrixXcd Q;            // Q(i,j) = int_{B_i} w_j
    Eigen::MatrixXcd omega;        // Q P^{-1}
    Eigen::MatrixXcd C;            // P^{-1}; normalized basis is w C
    Eigen::MatrixXd A_inv_im;      // (Im omega)^{-1}
    Eigen::MatrixXd A_chol_lower;  // A_inv_im = L L^T
    double symmetry_residual = 0;  // ||omega - omega^T||_F / ||omega||_F
    double min_eig_im = 0;
};

Eigen::VectorXcd integrate_over_cycle(const CurveModel& curve, const Cycle& cycle,
                                      const QuadratureConfig& config);

RiemannMatrix riemann_matrix(const CurveModel& curve, const CycleBasis& basis,
                             const QuadratureConfig& config);

double agm(double a, double b);

/// Genus-1 oracle: tau = i K(k') / K(k) via the arithmetic-geometric mean.
cplx agm_period_tau(double k);

} // namespace canmet
