#include "canmet/degeneration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "canmet/parallel.hpp"
#include "canmet/quadrature.hpp"

namespace canmet {

std::vector<cplx> default_nonsep_betas() {
    return {cplx(-3, 0), cplx(-2, 0), cplx(2, 0), cplx(3, 0), cplx(2, -2), cplx(2, 2)};
}

std::vector<cplx> default_sep_alphas() {
    std::vector<cplx> a;
    for (int k = 0; k < 5; ++k) a.push_back(0.8 * std::exp(cplx(0, 2.0 * pi * k / 5.0)));
    return a;
}

std::vector<cplx> default_sep_betas() {
    return {cplx(2, 0), cplx(3, 0), cplx(-2, 0), cplx(-3, 0), cplx(4, 0)};
}

PinchFamily PinchFamily::nonsep(cplx t, std::vector<cplx> betas) {
    if (!(std::abs(t) > 0 && std::abs(t) < 1))
        throw std::invalid_argument("pinch parameter must satisfy 0 < |t| < 1");
    if (std::abs(t) < pinch_t_floor) throw std::invalid_argument("|t| below the hard floor");
    if (betas.size() != 6) throw std::invalid_argument("nonsep family needs 6 fixed roots");
    for (cplx b : betas)
        if (std::abs(b) < 2.0 - 1e-12)
            throw std::invalid_argument("fixed roots must satisfy |beta| >= 2");
    PinchFamily f;
    f.kind = PinchKind::Nonsep;
    f.t = t;
    f.betas = std::move(betas);
    return f;
}

PinchFamily PinchFamily::sep(cplx eps, std::vector<cplx> alphas, std::vector<cplx> betas) {
    if (!(std::abs(eps) > 0 && std::abs(eps) < 1))
        throw std::invalid_argument("pinch parameter must satisfy 0 < |eps| < 1");
    if (std::abs(eps) < pinch_t_floor) throw std::invalid_argument("|eps| below the hard floor");
    if (alphas.size() != 5 || betas.size() != 5)
        throw std::invalid_argument("sep family needs 5 cluster and 5 fixed roots");
    for (cplx a : alphas)
        if (std::abs(a) > 1.0 + 1e-12)
            throw std::invalid_argument("cluster shape must satisfy |alpha| <= 1");
    for (cplx b : betas)
        if (std::abs(b) < 2.0 - 1e-12)
            throw std::invalid_argument("fixed roots must satisfy |beta| >= 2");
    PinchFamily f;
    f.kind = PinchKind::Sep;
    f.t = eps;
    f.alphas = std::move(alphas);
    f.betas = std::move(betas);
    return f;
}

std::vector<cplx> PinchFamily::branch_points() const {
    std::vector<cplx> pts;
    if (kind == PinchKind::Nonsep) {
        pts.push_back(-t);
        pts.push_back(t);
    } else {
        for (cplx a : alphas) pts.push_back(t * a);
    }
    for (cplx b : betas) pts.push_back(b);
    return pts;
}

double PinchFamily::plumbing_abs() const {
    const double at = std::abs(t);
    return (kind == PinchKind::Nonsep) ? at * at : at;
}

double PinchFamily::L() const { return std::abs(std::log(plumbing_abs())); }

CollarChart make_collar(const PinchFamily& fam) {
    if (fam.kind != PinchKind::Nonsep)
        throw std::invalid_argument("the collar chart requires a nonseparating family");
    CollarChart c;
    c.t_abs = std::abs(fam.t);
    c.L = fam.L();
    c.u_min = c.t_abs;
    c.u_max = collar_u_max;
    // |t| < L^{-1/2} < u_max needs L > 1/u_max^2; |t| <= 0.02 gives L > 7.8.
    if (!(c.t_abs < c.mid_radius() && c.mid_radius() < c.u_max))
        throw std::invalid_argument("collar regions collapse; |t| too large");
    return c;
}

PinchInstance::PinchInstance(const PinchFamily& fam, const QuadratureConfig& cfg) : fam_(fam) {
    curve_ = std::make_unique<CurveModel>(BranchSet::make(fam_.branch_points()));
    int pinned_cut = -1;
    if (fam_.kind == PinchKind::Nonsep) {
        // Pin the loop around the colliding pair as A_1 so the vanishing
        // cycle occupies a single hyperbolic pair of the reduced basis.
        const auto cuts = build_cuts(curve_->branch());
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < cuts.size(); ++i) {
            const double len = std::abs(cuts[i].q - cuts[i].p);
            if (len < best) {
                best = len;
                pinned_cut = static_cast<int>(i);
            }
        }
    }
    basis_ = cycle_basis(*curve_, pinned_cut);
    RiemannMatrix rm = riemann_matrix(*curve_, basis_, cfg);
    ev_ = std::make_unique<MetricEvaluator>(*curve_, std::move(rm));

    g_seed_ = cplx(0, 0);
    if (fam_.kind == PinchKind::Nonsep) {
        // Fix the branch of sqrt(prod(x - beta)) at x = 0 so that the collar
        // map lands on the anchor-labeled surface.
        auto gval = [&](cplx z) {
            cplx f(1, 0);
            for (cplx b : fam_.betas) f *= (z - b);
            return f;
        };
        g_seed_ = std::sqrt(gval(cplx(0, 0)));
        const cplx t = fam_.t;
        const double u_ref = 0.9 * collar_u_max;
        const cplx x_ref = 0.5 * (u_ref + t * t / u_ref);
        const cplx w_ref = 0.5 * (u_ref - t * t / u_ref);
        cplx G(0, 0);
        {
            // continue sqrt(g) from 0 to x_ref
            cplx w0 = g_seed_;
            const int steps = 64;
            cplx fp = gval(cplx(0, 0));
            for (int k = 1; k <= steps; ++k) {
                const cplx z = x_ref * (static_cast<double>(k) / steps);
                const cplx fn = gval(z);
                const cplx sp = std::sqrt(fn);
                w0 = (std::abs(sp - w0) <= std::abs(-sp - w0)) ? sp : -sp;
                fp = fn;
            }
            G = w0;
        }
        const cplx y_ref = w_ref * G;
        const cplx y_anchor = anchor_continued_y(*curve_, x_ref);
        if (std::abs(y_ref - y_anchor) > std::abs(y_ref + y_anchor)) g_seed_ = -g_seed_;
    }
}

namespace {

cplx continue_g(const PinchInstance& inst, cplx x_to) {
    const auto& betas = inst.family().betas;
    auto gval = [&](cplx z) {
        cplx f(1, 0);
        for (cplx b : betas) f *= (z - b);
        return f;
    };
    cplx w = inst.collar_g_seed();
    cplx fp = gval(cplx(0, 0));
    const int steps = 24; // collar x stays far from every beta
    for (int k = 1; k <= steps; ++k) {
        const cplx z = x_to * (static_cast<double>(k) / steps);
        const cplx fn = gval(z);
        if (std::abs(std::arg(fn / fp)) > 1.5)
            throw ContinuationStall("collar continuation left its safe region");
        const cplx sp = std::sqrt(fn);
        w = (std::abs(sp - w) <= std::abs(-sp - w)) ? sp : -sp;
        fp = fn;
    }
    return w;
}

} // namespace

SurfacePoint collar_to_surface(const PinchInstance& inst, cplx u) {
    const PinchFamily& fam = inst.family();
    if (fam.kind != PinchKind::Nonsep)
        throw std::invalid_argument("collar map requires a nonseparating family");
    const double au = std::abs(u);
    const double at = std::abs(fam.t);
    if (!(au > at && au < collar_u_max))
        throw OutOfCollar("|u| outside the collar annulus (" + std::to_string(at) + ", " +
                          std::to_string(collar_u_max) + ")");
    const cplx t = fam.t;
    const cplx x = 0.5 * (u + t * t / u);
    const cplx w = 0.5 * (u - t * t / u);
    const cplx y = w * continue_g(inst, x);

    const CurveModel& curve = inst.curve();
    const BranchSet& br = curve.branch();
    const int j = br.nearest(x);
    const double dist = std::abs(x - br.points[j]);
    if (dist < 0.55 * br.r_chart()) {
        SurfacePoint p;
        p.chart = Chart::Branch;
        p.branch = j;
        const cplx s = std::sqrt(x - br.points[j]);
        // s q(s) must reproduce the collar y; q is even in s.
        SurfacePoint cand = branch_chart_point(curve, j, s);
        if (std::abs(cand.y - y) > std::abs(cand.y + y)) cand = branch_chart_point(curve, j, -s);
        cand.x = x;
        cand.y = y;
        return cand;
    }
    SurfacePoint p;
    p.chart = Chart::X;
    p.sheet = 1; // metric quantities are even in y; the tag is not used downstream
    p.coord = x;
    p.x = x;
    p.y = y;
    return p;
}

double collar_density_u(const PinchInstance& inst, cplx u) {
    const SurfacePoint p = collar_to_surface(inst, u);
    const cplx t = inst.family().t;
    const cplx dxdu = 0.5 * (cplx(1, 0) - t * t / (u * u));
    double jac2 = std::norm(dxdu);
    if (p.chart == Chart::Branch) jac2 /= 4.0 * std::norm(p.coord); // ds/du = (dx/du)/(2s)
    return inst.evaluator().rho(p) * jac2;
}

std::vector<RadialStats> curvature_profile(const PinchInstance& inst,
                                           std::span<const double> radii, int n_angles) {
    std::vector<RadialStats> out(radii.size());
    for (size_t ri = 0; ri < radii.size(); ++ri) {
        const double r = radii[ri];
        std::vector<double> ks(static_cast<size_t>(n_angles));
        parallel_for(static_cast<size_t>(n_angles), [&](size_t k) {
            const cplx u = r * std::exp(cplx(0, 2.0 * pi * static_cast<double>(k) / n_angles));
            ks[k] = std::abs(inst.evaluator().curvature(collar_to_surface(inst, u)).K);
        });
        RadialStats st;
        st.radius = r;
        std::vector<double> sorted = ks;
        std::sort(sorted.begin(), sorted.end());
        st.max_abs_K = sorted.back();
        st.median_abs_K = sorted[sorted.size() / 2];
        out[ri] = st;
    }
    return out;
}

CollarBounds collar_metric_check(const PinchInstance& inst, int n_samples) {
    const CollarChart cc = inst.collar();
    const int n_angles = 64;
    const int nr = std::max(4, n_samples / n_angles);
    CollarBounds b;
    b.c_low = b.outer_low = std::numeric_limits<double>::infinity();

    const double r0 = 1.2 * cc.u_min, r1 = 0.85 * cc.mid_radius();
    for (int i = 0; i < nr; ++i) {
        const double r = r0 * std::pow(r1 / r0, static_cast<double>(i) / (nr - 1));
        for (int k = 0; k < n_angles; ++k) {
            const cplx u = r * std::exp(cplx(0, 2.0 * pi * k / n_angles));
            const double v = collar_density_u(inst, u) * std::norm(u) * cc.L;
            b.c_low = std::min(b.c_low, v);
            b.c_high = std::max(b.c_high, v);
        }
    }
    const double s0 = 1.15 * cc.mid_radius(), s1 = 0.9 * cc.u_max;
    for (int i = 0; i < nr; ++i) {
        const double r = s0 * std::pow(s1 / s0, static_cast<double>(i) / (nr - 1));
        for (int k = 0; k < n_angles; ++k) {
            const cplx u = r * std::exp(cplx(0, 2.0 * pi * k / n_angles));
            const double v = collar_density_u(inst, u);
            b.outer_low = std::min(b.outer_low, v);
            b.outer_high = std::max(b.outer_high, v);
        }
    }
    return b;
}

double collar_integral(const PinchInstance& inst, int radial_per_decade, int n_angles) {
    const CollarChart cc = inst.collar();
    const double rmin = cc.u_min, rmax = cc.mid_radius();
    const int npanel =
        std::max(4, static_cast<int>(std::ceil(radial_per_decade * std::log10(rmax / rmin))));
    const GaussLegendre& gl = GaussLegendre::order(8);
    std::vector<double> contrib;
    for (int p = 0; p < npanel; ++p) {
        const double a = rmin * std::pow(rmax / rmin, static_cast<double>(p) / npanel);
        const double b = rmin * std::pow(rmax / rmin, static_cast<double>(p + 1) / npanel);
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
            const double wr = 0.5 * (b - a) * gl.weights[i];
            std::vector<double> ang(static_cast<size_t>(n_angles));
            parallel_for(static_cast<size_t>(n_angles), [&](size_t k) {
                const cplx u = r * std::exp(cplx(0, 2.0 * pi * static_cast<double>(k) / n_angles));
                ang[k] = collar_density_u(inst, u);
            });
            const double mean = pairwise_sum(std::span<const double>(ang)) / n_angles;
            contrib.push_back(wr * r * 2.0 * pi * mean);
        }
    }
    const double integral = pairwise_sum(std::span<const double>(contrib));
    return cc.L * integral;
}

GramStats gram_stats(const RiemannMatrix& rm, double L, int dominant) {
    const int g = rm.genus;
    GramStats st;
    if (dominant < 0) {
        dominant = 0;
        for (int j = 1; j < g; ++j)
            if (rm.omega(j, j).imag() > rm.omega(dominant, dominant).imag()) dominant = j;
    }
    st.dominant = dominant;
    st.im_dom = rm.omega(dominant, dominant).imag();
    st.a_dom_L = rm.A_inv_im(dominant, dominant) * L;
    double off = 0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            if (i != j) off = std::max(off, std::abs(rm.A_inv_im(i, j)));
    st.offdiag_L = off * L;
    return st;
}

namespace {

double band(std::span<const double> v) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return hi / lo;
}

// Relative spread of Im omega_dom differences between decade-spaced rows.
double decade_variation(const std::vector<double>& ts, const std::vector<double>& im) {
    std::vector<size_t> idx{0};
    for (size_t i = 1; i < ts.size(); ++i)
        if (std::abs(std::log10(ts[idx.back()] / ts[i]) - 1.0) < 0.05) idx.push_back(i);
    if (idx.size() < 3) return 0.0;
    std::vector<double> diffs;
    for (size_t k = 1; k < idx.size(); ++k) diffs.push_back(im[idx[k]] - im[idx[k - 1]]);
    double lo = diffs[0], hi = diffs[0], sum = 0;
    for (double d : diffs) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        sum += d;
    }
    return (hi - lo) / (sum / diffs.size());
}

} // namespace

ScalingReport nonsep_sweep(std::span<const double> t_grid, int n_angles,
                           const QuadratureConfig& cfg, int profile_points,
                           std::vector<cplx> betas) {
    if (t_grid.size() < 2) throw std::invalid_argument("t grid needs at least two values");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i - 1]))
            throw std::invalid_argument("t grid must be strictly descending");

    ScalingReport rep;
    rep.n_angles = n_angles;
    std::vector<std::unique_ptr<PinchInstance>> insts;
    for (double t : t_grid)
        insts.push_back(std::make_unique<PinchInstance>(PinchFamily::nonsep(t, betas), cfg));

    // Dominant diagonal: the one with the largest growth across the sweep.
    int dominant = 0;
    {
        const auto& first = insts.front()->rm().omega;
        const auto& last = insts.back()->rm().omega;
        double best = -1;
        for (int j = 0; j < first.rows(); ++j) {
            const double growth = last(j, j).imag() - first(j, j).imag();
            if (growth > best) {
                best = growth;
                dominant = j;
            }
        }
    }

    for (size_t i = 0; i < t_grid.size(); ++i) {
        const PinchInstance& inst = *insts[i];
        const CollarChart cc = inst.collar();
        ScalingRow row;
        row.t = t_grid[i];
        row.L = cc.L;
        const double radii[3] = {0.9 * cc.u_max, cc.mid_radius(), 2.0 * cc.t_abs};
        const auto prof = curvature_profile(inst, radii, n_angles);
        row.m_outer = prof[0].max_abs_K;
        row.m_mid = prof[1].max_abs_K;
        row.m_inner = prof[2].max_abs_K;
        row.mid_over_L = row.m_mid / cc.L;
        row.inner_env = row.m_inner / (inst.family().plumbing_abs() * cc.L * cc.L);
        const CollarBounds cb = collar_metric_check(inst, 8 * 64);
        row.c_low = cb.c_low;
        row.c_high = cb.c_high;
        row.collar_I = collar_integral(inst);
        row.I_ratio = row.collar_I / (cc.L - std::log(cc.L));
        row.gram = gram_stats(inst.rm(), cc.L, dominant);
        if (profile_points > 0) {
            std::vector<double> ladder;
            const double r0 = 1.5 * cc.t_abs, r1 = 0.9 * cc.u_max;
            for (int k = 0; k < profile_points; ++k)
                ladder.push_back(
                    r0 * std::pow(r1 / r0, static_cast<double>(k) / (profile_points - 1)));
            row.profile = curvature_profile(inst, ladder, n_angles);
        }
        rep.rows.push_back(row);
    }

    std::vector<double> mid, outer, inner_env, clow, chigh, iratio, a11, offd, im, ts;
    rep.mid_increasing = rep.inner_decreasing = true;
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        if (i > 0 && !(r.m_mid > rep.rows[i - 1].m_mid)) rep.mid_increasing = false;
        if (i > 0 && !(r.m_inner < rep.rows[i - 1].m_inner)) rep.inner_decreasing = false;
        mid.push_back(r.mid_over_L);
        outer.push_back(r.m_outer);
        inner_env.push_back(r.inner_env);
        clow.push_back(r.c_low);
        chigh.push_back(r.c_high);
        iratio.push_back(r.I_ratio);
        a11.push_back(r.gram.a_dom_L);
        offd.push_back(r.gram.offdiag_L);
        im.push_back(r.gram.im_dom);
        ts.push_back(r.t);
    }
    rep.mid_band = band(mid);
    rep.outer_band = band(outer);
    rep.inner_band = band(inner_env);
    rep.c_low_band = band(clow);
    rep.c_high_band = band(chigh);
    rep.I_band = band(iratio);
    rep.a11_band = band(a11);
    rep.offdiag_band = band(offd);
    rep.im_decade_var = decade_variation(ts, im);
    return rep;
}

std::vector<GramRow> gram_asymptotics(std::span<const double> t_grid,
                                      const QuadratureConfig& cfg) {
    std::vector<std::unique_ptr<PinchInstance>> insts;
    for (double t : t_grid)
        insts.push_back(std::make_unique<PinchInstance>(PinchFamily::nonsep(t), cfg));
    int dominant = 0;
    double best = -1;
    const auto& first = insts.front()->rm().omega;
    const auto& last = insts.back()->rm().omega;
    for (int j = 0; j < first.rows(); ++j) {
        const double growth = last(j, j).imag() - first(j, j).imag();
        if (growth > best) {
            best = growth;
            dominant = j;
        }
    }
    std::vector<GramRow> rows;
    for (size_t i = 0; i < t_grid.size(); ++i) {
        GramRow r;
        r.t = t_grid[i];
        r.L = insts[i]->family().L();
        r.gram = gram_stats(insts[i]->rm(), r.L, dominant);
        rows.push_back(r);
    }
    return rows;
}

SepReport sep_sweep(std::span<const double> eps_grid, const QuadratureConfig& cfg,
                    std::vector<cplx> alphas, std::vector<cplx> betas) {
    SepReport rep;
    for (double eps : eps_grid) {
        const PinchInstance inst(PinchFamily::sep(eps, alphas, betas), cfg);
        SepRow row;
        row.eps = eps;
        row.max_K_signed = -std::numeric_limits<double>::infinity();
        // The neck circle |x| = sqrt(eps) is the plumbing core: with the node
        // chart z = sqrt(x) and t_p ~ sqrt(eps), it sits at |z| = sqrt(t_p).
        // The edge set replaces it with the outer-collar boundary |x| = 1/L.
        const double L_sep = 0.5 * std::abs(std::log(eps));
        enum { kFixed, kNeck, kEdge };
        std::vector<cplx> probes;
        std::vector<int> tag;
        for (int k = 0; k < 8; ++k) {
            probes.push_back(1.5 * std::exp(cplx(0, 2.0 * pi * k / 8.0)));
            tag.push_back(kFixed);
        }
        for (int k = 0; k < 64; ++k) {
            const cplx dir = std::exp(cplx(0, 2.0 * pi * k / 64.0));
            probes.push_back(std::sqrt(eps) * dir);
            tag.push_back(kNeck);
            probes.push_back(dir / L_sep);
            tag.push_back(kEdge);
        }
        std::vector<MetricEvaluator::XSample> samples(probes.size());
        parallel_for(probes.size(), [&](size_t i) {
            samples[i] = inst.evaluator().sample_at_x(probes[i]);
        });
        for (size_t i = 0; i < samples.size(); ++i) {
            const auto& s = samples[i];
            const double rho_node = 4.0 * std::abs(probes[i]) * s.rho_x;
            row.max_K_signed = std::max(row.max_K_signed, s.K);
            if (tag[i] == kFixed) {
                row.max_abs_K = std::max(row.max_abs_K, std::abs(s.K));
                row.max_rho = std::max(row.max_rho, s.rho_x);
                row.edge_max_abs_K = std::max(row.edge_max_abs_K, std::abs(s.K));
                row.edge_max_rho = std::max(row.edge_max_rho, s.rho_x);
            } else if (tag[i] == kNeck) {
                row.max_abs_K = std::max(row.max_abs_K, std::abs(s.K));
                row.max_rho = std::max(row.max_rho, rho_node);
            } else {
                row.edge_max_abs_K = std::max(row.edge_max_abs_K, std::abs(s.K));
                row.edge_max_rho = std::max(row.edge_max_rho, rho_node);
            }
        }
        rep.rows.push_back(row);
    }
    std::vector<double> ks, rhos, eks, erhos;
    for (const auto& r : rep.rows) {
        ks.push_back(r.max_abs_K);
        rhos.push_back(r.max_rho);
        eks.push_back(r.edge_max_abs_K);
        erhos.push_back(r.edge_max_rho);
    }
    rep.k_band = band(ks);
    rep.rho_band = band(rhos);
    rep.edge_k_band = band(eks);
    rep.edge_rho_band = band(erhos);
    return rep;
}

} // namespace canmet
