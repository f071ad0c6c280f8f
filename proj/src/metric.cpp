#include "canmet/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "canmet/parallel.hpp"
#include "canmet/quadrature.hpp"

namespace canmet {

MetricEvaluator::MetricEvaluator(const CurveModel& curve, RiemannMatrix rm)
    : curve_(&curve), rm_(std::move(rm)) {
    if (rm_.genus != curve.genus())
        throw std::invalid_argument("Riemann matrix genus does not match the curve");
    Ct_ = rm_.C.transpose();
    Ac_ = rm_.A_inv_im.cast<cplx>();
    Ltc_ = rm_.A_chol_lower.transpose().cast<cplx>();
}

void MetricEvaluator::normalized_frame(const SurfacePoint& p, Eigen::VectorXcd& w,
                                       Eigen::VectorXcd& w1) const {
    const FrameValue fr = differential_frame(*curve_, p);
    w = Ct_ * fr.h0;
    w1 = Ct_ * fr.h1;
}

double MetricEvaluator::rho(const SurfacePoint& p) const {
    Eigen::VectorXcd w, w1;
    normalized_frame(p, w, w1);
    const cplx val = (w.transpose() * (Ac_ * w.conjugate()))(0);
    if (std::abs(val.imag()) > 1e-10 * (std::abs(val) + 1e-300))
        throw Error("density acquired an imaginary part");
    return val.real();
}

CurvatureSample MetricEvaluator::curvature(const SurfacePoint& p) const {
    Eigen::VectorXcd w, w1;
    normalized_frame(p, w, w1);
    const Eigen::VectorXcd u = Ltc_ * w;
    const Eigen::VectorXcd u1 = Ltc_ * w1;
    const double r = u.squaredNorm();
    if (r < 1e-14) throw DegenerateDensity("density vanished at the evaluation point");
    // Gram form: K = -2 |P_perp u1|^2 / rho^2, nonnegative projection residual.
    const cplx alpha = u.dot(u1) / r;
    const double resid = (u1 - alpha * u).squaredNorm();
    const double K = -2.0 * resid / (r * r);
    if (K > 1e-9 * (1.0 + std::abs(K))) throw Error("curvature lost nonpositivity");
    return {p, r, K};
}

double MetricEvaluator::curvature_fd(const SurfacePoint& p, double h) const {
    if (!(h > 0)) throw std::invalid_argument("stencil step must be positive");
    auto displaced = [&](cplx dz) {
        switch (p.chart) {
            case Chart::X:
                return point_principal(*curve_, p.coord + dz);
            case Chart::Branch:
                return branch_chart_point(*curve_, p.branch, p.coord + dz);
            default:
                return inf_chart_point(*curve_, p.coord + dz, p.sheet);
        }
    };
    const double rho0 = rho(p);
    double lap = -4.0 * std::log(rho0);
    for (cplx dz : {cplx(h, 0), cplx(-h, 0), cplx(0, h), cplx(0, -h)})
        lap += std::log(rho(displaced(dz)));
    const double ddbar = lap / (4.0 * h * h);
    return -2.0 * ddbar / rho0;
}

MetricEvaluator::XSample MetricEvaluator::sample_at_x(cplx x) const {
    const BranchSet& br = curve_->branch();
    const int j = br.nearest(x);
    const double dist = std::abs(x - br.points[j]);
    if (dist < 0.55 * br.r_chart()) {
        const cplx s = std::sqrt(x - br.points[j]);
        const SurfacePoint p = branch_chart_point(*curve_, j, s);
        const CurvatureSample cs = curvature(p);
        const double jac = std::norm(2.0 * s); // |dx/ds|^2; 0 at the branch point
        return {jac > 0 ? cs.rho / jac : std::numeric_limits<double>::infinity(), cs.K};
    }
    const CurvatureSample cs = curvature(point_principal(*curve_, x));
    return {cs.rho, cs.K};
}

namespace {

// C^3 ramp: 0 at t<=0, 1 at t>=1.
double smoothstep7(double t) {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

struct Panel {
    int piece;       // 0..n_branch-1: branch disks; n_branch: bulk; n_branch+1: cap
    double r0, r1, a0, a1;
    Eigen::VectorXcd value;
    double disc = 0;
    long id = 0;
};

} // namespace

Eigen::VectorXcd MetricEvaluator::integrate_surface(
    const std::function<void(const SurfacePoint&, std::span<cplx>)>& fn, int m,
    const SurfaceQuadConfig& cfg) const {
    const BranchSet& br = curve_->branch();
    const int nb = br.count();
    const double rch = br.r_chart();
    const double bump_in = 0.55 * rch, bump_out = 0.9 * rch;
    const double xi_max = inf_chart_max_abs(br);
    const double R1 = 1.0 / xi_max;
    const double R2 = 2.0 * R1;

    auto bump = [&](double d) { return 1.0 - smoothstep7((d - bump_in) / (bump_out - bump_in)); };
    auto cap_w = [&](double ax) { return smoothstep7((ax - R1) / (R2 - R1)); };

    std::vector<cplx> buf(static_cast<size_t>(m));
    // Integrand in polar coordinates of the given piece, Jacobian included.
    auto eval_point = [&](int piece, double r, double ang, std::span<cplx> out) {
        const cplx dir = std::exp(cplx(0, ang));
        if (piece < nb) {
            const cplx s = r * dir;
            const double w = bump(std::norm(s));
            if (w <= 0) {
                std::fill(out.begin(), out.end(), cplx(0, 0));
                return;
            }
            fn(branch_chart_point(*curve_, piece, s), out);
            for (auto& v : out) v *= w * r;
            return;
        }
        if (piece == nb) {
            const cplx x = r * dir;
            double w = 1.0 - cap_w(std::abs(x));
            if (w > 0)
                for (int j = 0; j < nb; ++j) w -= bump(std::abs(x - br.points[j]));
            if (w <= 1e-14) {
                std::fill(out.begin(), out.end(), cplx(0, 0));
                return;
            }
            fn(point_principal(*curve_, x), out);
            for (auto& v : out) v *= 2.0 * w * r; // both sheets
            return;
        }
        const cplx xi = r * dir;
        const double w = (r == 0.0) ? 1.0 : cap_w(1.0 / r);
        if (w <= 0) {
            std::fill(out.begin(), out.end(), cplx(0, 0));
            return;
        }
        fn(inf_chart_point(*curve_, xi, 1), out);
        for (auto& v : out) v *= 2.0 * w * r;
    };

    const GaussLegendre& gl = GaussLegendre::order(cfg.panel_gl);
    auto eval_panel_raw = [&](int piece, double r0, double r1, double a0, double a1) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(m);
        const double rmid = 0.5 * (r0 + r1), rh = 0.5 * (r1 - r0);
        const double amid = 0.5 * (a0 + a1), ah = 0.5 * (a1 - a0);
        for (size_t i = 0; i < gl.nodes.size(); ++i)
            for (size_t j = 0; j < gl.nodes.size(); ++j) {
                eval_point(piece, rmid + rh * gl.nodes[i], amid + ah * gl.nodes[j],
                           std::span<cplx>(buf));
                const double w = gl.weights[i] * gl.weights[j] * rh * ah;
                for (int c = 0; c < m; ++c) acc(c) += w * buf[c];
            }
        return acc;
    };
    long next_id = 0;
    auto make_panel = [&](int piece, double r0, double r1, double a0, double a1) {
        Panel p{piece, r0, r1, a0, a1, {}, 0, next_id++};
        const Eigen::VectorXcd whole = eval_panel_raw(piece, r0, r1, a0, a1);
        const double rmid = 0.5 * (r0 + r1), amid = 0.5 * (a0 + a1);
        Eigen::VectorXcd split = eval_panel_raw(piece, r0, rmid, a0, amid);
        split += eval_panel_raw(piece, rmid, r1, a0, amid);
        split += eval_panel_raw(piece, r0, rmid, amid, a1);
        split += eval_panel_raw(piece, rmid, r1, amid, a1);
        p.value = split;
        p.disc = (split - whole).cwiseAbs().maxCoeff();
        return p;
    };

    std::vector<Panel> panels;
    auto seed_piece = [&](int piece, double rmax, int nr, int na) {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < na; ++j)
                panels.push_back(make_panel(piece, rmax * i / nr, rmax * (i + 1) / nr,
                                            2.0 * pi * j / na, 2.0 * pi * (j + 1) / na));
    };
    for (int j = 0; j < nb; ++j) seed_piece(j, std::sqrt(bump_out), 3, 8);
    seed_piece(nb, R2, 10, 16);
    seed_piece(nb + 1, xi_max, 3, 8);

    auto worse = [](const Panel& a, const Panel& b) {
        if (a.disc != b.disc) return a.disc < b.disc;
        return a.id > b.id;
    };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
    Eigen::VectorXd disc_sum = Eigen::VectorXd::Zero(m);
    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(m);
    for (auto& p : panels) {
        disc_sum.array() += p.disc;
        total += p.value;
        queue.push(std::move(p));
    }

    auto converged = [&]() {
        for (int c = 0; c < m; ++c)
            if (disc_sum(c) > 0.3 * cfg.rel_tol * (std::abs(total(c)) + cfg.abs_floor))
                return false;
        return true;
    };
    long n_panels = static_cast<long>(panels.size());
    while (!converged()) {
        if (n_panels + 4 > cfg.max_panels)
            throw QuadratureDivergence("surface integral refinement exhausted");
        Panel top = queue.top();
        queue.pop();
        disc_sum.array() -= top.disc;
        total -= top.value;
        const double rmid = 0.5 * (top.r0 + top.r1), amid = 0.5 * (top.a0 + top.a1);
        for (auto [r0, r1, a0, a1] :
             {std::array<double, 4>{top.r0, rmid, top.a0, amid},
              std::array<double, 4>{rmid, top.r1, top.a0, amid},
              std::array<double, 4>{top.r0, rmid, amid, top.a1},
              std::array<double, 4>{rmid, top.r1, amid, top.a1}}) {
            Panel child = make_panel(top.piece, r0, r1, a0, a1);
            disc_sum.array() += child.disc;
            total += child.value;
            queue.push(std::move(child));
        }
        n_panels += 3;
    }

    // Deterministic final assembly: pairwise sum in panel-id order.
    std::vector<Panel> fin;
    fin.reserve(queue.size());
    while (!queue.empty()) {
        fin.push_back(queue.top());
        queue.pop();
    }
    std::sort(fin.begin(), fin.end(), [](const Panel& a, const Panel& b) { return a.id < b.id; });
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
    std::vector<cplx> comp(fin.size());
    for (int c = 0; c < m; ++c) {
        for (size_t i = 0; i < fin.size(); ++i) comp[i] = fin[i].value(c);
        out(c) = pairwise_sum(std::span<const cplx>(comp));
    }
    return out;
}

double MetricEvaluator::surface_area(const SurfaceQuadConfig& cfg) const {
    SurfaceQuadConfig c = cfg;
    c.abs_floor = std::max(c.abs_floor, static_cast<double>(curve_->genus()));
    const Eigen::VectorXcd v = integrate_surface(
        [&](const SurfacePoint& p, std::span<cplx> out) { out[0] = rho(p); }, 1, c);
    return v(0).real();
}

double MetricEvaluator::total_curvature(const SurfaceQuadConfig& cfg) const {
    SurfaceQuadConfig c = cfg;
    c.abs_floor = std::max(c.abs_floor, 4.0 * pi);
    const Eigen::VectorXcd v = integrate_surface(
        [&](const SurfacePoint& p, std::span<cplx> out) {
            const CurvatureSample cs = curvature(p);
            out[0] = cs.K * cs.rho;
        },
        1, c);
    return v(0).real();
}

Eigen::MatrixXcd MetricEvaluator::gram_matrix(const SurfaceQuadConfig& cfg) const {
    const int g = rm_.genus;
    const Eigen::VectorXcd v = integrate_surface(
        [&](const SurfacePoint& p, std::span<cplx> out) {
            Eigen::VectorXcd w, w1;
            normalized_frame(p, w, w1);
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) out[i * g + j] = w(i) * std::conj(w(j));
        },
        g * g, cfg);
    Eigen::MatrixXcd G(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) G(i, j) = v(i * g + j);
    return G;
}

cplx MetricEvaluator::gram_pairing(int i, int j, const SurfaceQuadConfig& cfg) const {
    const int g = rm_.genus;
    if (i < 1 || j < 1 || i > g || j > g) throw std::invalid_argument("pairing index out of range");
    const Eigen::VectorXcd v = integrate_surface(
        [&](const SurfacePoint& p, std::span<cplx> out) {
            Eigen::VectorXcd w, w1;
            normalized_frame(p, w, w1);
            out[0] = w(i - 1) * std::conj(w(j - 1));
        },
        1, cfg);
    return v(0);
}

} // namespace canmet
