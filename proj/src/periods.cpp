#include "canmet/periods.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "canmet/parallel.hpp"
#include "canmet/quadrature.hpp"

namespace canmet {

void QuadratureConfig::validate() const {
    if (gl_order < 4) throw std::invalid_argument("gl_order must be >= 4");
    if (!(rel_tol > 0) || rel_tol > 1e-4)
        throw std::invalid_argument("rel_tol must lie in (0, 1e-4]");
    if (max_depth < 4) throw std::invalid_argument("max_depth must be >= 4");
}

namespace {

struct SegmentIntegrator {
    const CurveModel& curve;
    const Segment& seg;
    const GaussLegendre& gl;
    int genus;
    double rel_tol;
    int max_depth;
    int seg_index;

    // Gauss-Legendre pass over [t0, t1]; carries y through the nodes and
    // returns it continued to t1.
    Eigen::VectorXcd gl_pass(double t0, double t1, cplx y0, cplx& y1) const {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(genus);
        const double mid = 0.5 * (t0 + t1);
        const double half = 0.5 * (t1 - t0);
        cplx y = y0;
        double t_prev = t0;
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            const double t = mid + half * gl.nodes[i];
            y = continue_y_segment(curve, seg, y, t_prev, t);
            t_prev = t;
            const cplx z = seg.at(t);
            const cplx w = gl.weights[i] * half * seg.deriv(t) / y;
            cplx zp(1, 0);
            for (int k = 0; k < genus; ++k) {
                acc(k) += w * zp;
                zp *= z;
            }
        }
        y1 = continue_y_segment(curve, seg, y, t_prev, t1);
        return acc;
    }

    Eigen::VectorXcd refine(double t0, double t1, cplx y0, const Eigen::VectorXcd& parent,
                            int depth, cplx& y1) const {
        const double tm = 0.5 * (t0 + t1);
        cplx ym, yend;
        const Eigen::VectorXcd left = gl_pass(t0, tm, y0, ym);
        const Eigen::VectorXcd right = gl_pass(tm, t1, ym, yend);
        const Eigen::VectorXcd sum = left + right;
        const double err = (sum - parent).cwiseAbs().maxCoeff();
        if (err <= rel_tol * (sum.cwiseAbs().maxCoeff() + 1e-300)) {
            y1 = yend;
            return sum;
        }
        if (depth >= max_depth)
            throw QuadratureDivergence("max_depth reached on segment " +
                                       std::to_string(seg_index) + ", t in [" +
                                       std::to_string(t0) + ", " + std::to_string(t1) + "]");
        const Eigen::VectorXcd vl = refine(t0, tm, y0, left, depth + 1, ym);
        const Eigen::VectorXcd vr = refine(tm, t1, ym, right, depth + 1, y1);
        return vl + vr;
    }

    Eigen::VectorXcd run(cplx y0) const {
        cplx ignored;
        const Eigen::VectorXcd whole = gl_pass(0.0, 1.0, y0, ignored);
        cplx yend;
        return refine(0.0, 1.0, y0, whole, 0, yend);
    }
};

Eigen::VectorXcd pairwise_vec_sum(std::vector<Eigen::VectorXcd>& parts, size_t lo, size_t hi) {
    if (hi - lo == 1) return parts[lo];
    const size_t mid = lo + (hi - lo) / 2;
    return pairwise_vec_sum(parts, lo, mid) + pairwise_vec_sum(parts, mid, hi);
}

} // namespace

Eigen::VectorXcd integrate_over_cycle(const CurveModel& curve, const Cycle& cycle,
                                      const QuadratureConfig& config) {
    config.validate();
    const GaussLegendre& gl = GaussLegendre::order(config.gl_order);
    std::vector<Eigen::VectorXcd> parts;
    parts.reserve(cycle.contour.segs.size());
    for (size_t i = 0; i < cycle.contour.segs.size(); ++i) {
        SegmentIntegrator si{curve,          cycle.contour.segs[i], gl,
                             curve.genus(),  config.rel_tol,        config.max_depth,
                             static_cast<int>(i)};
        parts.push_back(si.run(cycle.y_start[i]));
    }
    return pairwise_vec_sum(parts, 0, parts.size());
}

RiemannMatrix riemann_matrix(const CurveModel& curve, const CycleBasis& basis,
                             const QuadratureConfig& config) {
    config.validate();
    const int g = basis.genus;
    if (g != curve.genus()) throw std::invalid_argument("basis genus mismatch");
    const int n = static_cast<int>(basis.candidates.size());

    Eigen::MatrixXcd V(n, g);
    parallel_for(static_cast<size_t>(n), [&](size_t c) {
        V.row(static_cast<int>(c)) =
            integrate_over_cycle(curve, basis.candidates[c], config).transpose();
    });

    RiemannMatrix rm;
    rm.genus = g;
    rm.P = basis.a_coeff.cast<cplx>() * V;
    rm.Q = basis.b_coeff.cast<cplx>() * V;

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rm.P);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0) || smax / smin > 1e12)
        throw SingularAperiod("A-period matrix is numerically singular (cond > 1e12)");

    rm.C = rm.P.partialPivLu().inverse();
    rm.omega = rm.Q * rm.C;

    const double nrm = rm.omega.norm();
    rm.symmetry_residual = (rm.omega - rm.omega.transpose()).norm() / (nrm + 1e-300);
    if (rm.symmetry_residual > 1e-6)
        throw RiemannRelationViolation("period matrix symmetry residual " +
                                       std::to_string(rm.symmetry_residual));

    const Eigen::MatrixXd im = 0.5 * (rm.omega.imag() + rm.omega.imag().transpose());
    const Eigen::LLT<Eigen::MatrixXd> llt(im);
    if (llt.info() != Eigen::Success)
        throw RiemannRelationViolation("Im(omega) is not positive definite");
    rm.A_inv_im = llt.solve(Eigen::MatrixXd::Identity(g, g));
    rm.A_inv_im = 0.5 * (rm.A_inv_im + rm.A_inv_im.transpose()).eval();
    const Eigen::LLT<Eigen::MatrixXd> llt_inv(rm.A_inv_im);
    if (llt_inv.info() != Eigen::Success)
        throw RiemannRelationViolation("(Im omega)^{-1} lost positive definiteness");
    rm.A_chol_lower = llt_inv.matrixL();
    rm.min_eig_im = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff();
    return rm;
}

double agm(double a, double b) {
    for (int i = 0; i < 200; ++i) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        if (std::abs(an - bn) <= 1e-17 * an) return an;
        a = an;
        b = bn;
    }
    return 0.5 * (a + b);
}

cplx agm_period_tau(double k) {
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("modulus k must lie in (0,1)");
    const double kp = std::sqrt(1.0 - k * k);
    // K(k) = pi / (2 agm(1, k')), so i K(k')/K(k) = i agm(1,k')/agm(1,k).
    return cplx(0.0, agm(1.0, kp) / agm(1.0, k));
}

} // namespace canmet
