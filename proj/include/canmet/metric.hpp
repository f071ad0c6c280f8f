#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "canmet/periods.hpp"

namespace canmet {

struct CurvatureSample {
    SurfacePoint point;
    double rho = 0; // density in the point's own chart
    double K = 0;   // chart invariant
};

struct SurfaceQuadConfig {
    double rel_tol = 0.005;
    double abs_floor = 1.0; // scale guard for near-zero totals
    int panel_gl = 6;
    int max_panels = 400000;
};

/// Pointwise and global evaluation of the canonical metric of a curve with a
/// computed Riemann matrix.
class MetricEvaluator {
public:
    MetricEvaluator(const CurveModel& curve, RiemannMatrix rm);

    const CurveModel& curve() const { return *curve_; }
    const RiemannMatrix& rm() const { return rm_; }

    /// Normalized frame at p: w_hat = C^T h0, and its chart derivative.
    void normalized_frame(const SurfacePoint& p, Eigen::VectorXcd& w, Eigen::VectorXcd& w1) const;

    double rho(const SurfacePoint& p) const;
    CurvatureSample curvature(const SurfacePoint& p) const;
    double curvature_fd(const SurfacePoint& p, double h) const;

    double surface_area(const SurfaceQuadConfig& cfg = {}) const;
    double total_curvature(const SurfaceQuadConfig& cfg = {}) const;
    Eigen::MatrixXcd gram_matrix(const SurfaceQuadConfig& cfg = {}) const;
    cplx gram_pairing(int i, int j, const SurfaceQuadConfig& cfg = {}) const; // 1-based

    /// rho and K at an arbitrary finite x, choosing the branch chart when x
    /// is close to a branch point. rho is converted to the x-chart density.
    struct XSample {
        double rho_x = 0;
        double K = 0;
    };
    XSample sample_at_x(cplx x) const;

    /// Integrates a chart-aware pointwise integrand over the whole surface.
    /// The callback fills `out` (m components) at the given surface point;
    /// metric-style integrands must be even in y (both sheets contribute a
    /// factor two outside the branch charts).
    Eigen::VectorXcd integrate_surface(
        const std::function<void(const SurfacePoint&, std::span<cplx>)>& fn, int m,
        const SurfaceQuadConfig& cfg) const;

private:
    const CurveModel* curve_;
    RiemannMatrix rm_;
    Eigen::MatrixXcd Ct_;  // C^T
    Eigen::MatrixXcd Ac_;  // (Im omega)^{-1} as complex
    Eigen::MatrixXcd Ltc_; // Cholesky factor transposed, as complex
};

} // namespace canmet
