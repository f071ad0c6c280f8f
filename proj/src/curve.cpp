#include "canmet/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace canmet {

namespace {

double wrap_2pi(double a) {
    a = std::fmod(a, 2.0 * pi);
    if (a < 0) a += 2.0 * pi;
    return a;
}

std::string fmt_cplx(cplx z) {
    std::ostringstream os;
    os << "(" << z.real() << "," << z.imag() << ")";
    return os.str();
}

} // namespace

PolyValue poly_eval(std::span<const cplx> roots, cplx x) {
    cplx f(1.0, 0.0);
    cplx df(0.0, 0.0);
    for (cplx r : roots) {
        const cplx d = x - r;
        df = df * d + f;
        f *= d;
    }
    return {f, df};
}

BranchSet BranchSet::make(std::vector<cplx> pts) {
    if (pts.size() < 4 || pts.size() % 2 != 0)
        throw std::invalid_argument("branch set needs an even count >= 4");
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            gap = std::min(gap, std::abs(pts[i] - pts[j]));
    if (!(gap > 0))
        throw std::invalid_argument("branch points must be pairwise distinct");
    BranchSet br;
    br.points = std::move(pts);
    br.min_gap = gap;
    return br;
}

int BranchSet::nearest(cplx x) const {
    int best = 0;
    double bd = std::abs(x - points[0]);
    for (int i = 1; i < count(); ++i) {
        double d = std::abs(x - points[i]);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

double BranchSet::dist_nearest(cplx x) const { return std::abs(x - points[nearest(x)]); }

Segment Segment::line(cplx a, cplx b) {
    Segment s;
    s.kind = Kind::Line;
    s.a = a;
    s.b = b;
    return s;
}

Segment Segment::arc(cplx center, double radius, double ang0, double dang) {
    Segment s;
    s.kind = Kind::Arc;
    s.center = center;
    s.radius = radius;
    s.ang0 = ang0;
    s.dang = dang;
    s.a = center + radius * std::exp(cplx(0, ang0));
    s.b = center + radius * std::exp(cplx(0, ang0 + dang));
    return s;
}

cplx Segment::at(double t) const {
    if (kind == Kind::Line) return a + t * (b - a);
    return center + radius * std::exp(cplx(0, ang0 + t * dang));
}

cplx Segment::deriv(double t) const {
    if (kind == Kind::Line) return b - a;
    return cplx(0, dang) * radius * std::exp(cplx(0, ang0 + t * dang));
}

double Segment::length() const {
    if (kind == Kind::Line) return std::abs(b - a);
    return radius * std::abs(dang);
}

double Segment::dist_to(cplx p) const {
    if (kind == Kind::Line) {
        const cplx d = b - a;
        const double L2 = std::norm(d);
        if (L2 == 0) return std::abs(p - a);
        double t = ((p - a).real() * d.real() + (p - a).imag() * d.imag()) / L2;
        t = std::clamp(t, 0.0, 1.0);
        return std::abs(p - (a + t * d));
    }
    const double r = std::abs(p - center);
    const double ang = std::atan2((p - center).imag(), (p - center).real());
    const double span = std::abs(dang);
    double off = (dang >= 0) ? wrap_2pi(ang - ang0) : wrap_2pi(ang0 - ang);
    if (off <= span || span >= 2.0 * pi) return std::abs(r - radius);
    return std::min(std::abs(p - a), std::abs(p - b));
}

Segment Segment::reversed() const {
    Segment s = *this;
    std::swap(s.a, s.b);
    if (kind == Kind::Arc) {
        s.ang0 = ang0 + dang;
        s.dang = -dang;
    }
    return s;
}

bool Contour::is_chained() const {
    for (size_t i = 0; i + 1 < segs.size(); ++i)
        if (segs[i].b != segs[i + 1].a) return false;
    return true;
}

bool Contour::is_closed() const {
    return !segs.empty() && is_chained() && segs.front().a == segs.back().b;
}

double Contour::length() const {
    double L = 0;
    for (const auto& s : segs) L += s.length();
    return L;
}

double Contour::min_clearance(const BranchSet& br) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : segs)
        for (cplx p : br.points) d = std::min(d, s.dist_to(p));
    return d;
}

void Contour::append(Segment s) {
    if (!segs.empty()) s.a = segs.back().b;
    segs.push_back(s);
}

void Contour::append(const Contour& c) {
    for (const auto& s : c.segs) append(s);
}

Contour Contour::reversed() const {
    Contour r;
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) r.append(it->reversed());
    return r;
}

double Contour::winding_number(cplx p) const {
    double total = 0;
    for (const auto& s : segs) {
        const double d = s.dist_to(p);
        if (d <= 0) return std::numeric_limits<double>::quiet_NaN();
        int n = static_cast<int>(std::ceil(4.0 * s.length() / d));
        n = std::clamp(n, 4, 1 << 16);
        cplx prev = s.at(0.0) - p;
        for (int k = 1; k <= n; ++k) {
            const cplx cur = s.at(static_cast<double>(k) / n) - p;
            total += std::arg(cur / prev);
            prev = cur;
        }
    }
    return total / (2.0 * pi);
}

Contour detoured_path(const BranchSet& br, cplx a, cplx b, double clear) {
    const cplx d = b - a;
    const double L2 = std::norm(d);
    Contour out;
    if (L2 == 0) throw std::invalid_argument("degenerate path");
    if (br.dist_nearest(a) < clear || br.dist_nearest(b) < clear)
        throw std::invalid_argument("path endpoint within clearance of a branch point");

    struct Hit {
        double t1, t2;
        cplx mu;
    };
    std::vector<Hit> hits;
    for (cplx mu : br.points) {
        const cplx am = mu - a;
        const double tc = (am.real() * d.real() + am.imag() * d.imag()) / L2;
        const double h2 = std::norm(am - tc * d);
        const double disc = clear * clear - h2;
        if (disc <= clear * clear * 1e-24) continue;
        const double dt = std::sqrt(disc / L2);
        const double t1 = tc - dt, t2 = tc + dt;
        if (t2 <= 0.0 || t1 >= 1.0) continue;
        hits.push_back({t1, t2, mu});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& u, const Hit& v) { return u.t1 < v.t1; });
    for (size_t i = 0; i + 1 < hits.size(); ++i)
        if (hits[i + 1].t1 <= hits[i].t2)
            throw Error("detour disks overlap along path; clearance too large");

    cplx cur = a;
    for (const Hit& h : hits) {
        const cplx e1 = a + h.t1 * d;
        const cplx e2 = a + h.t2 * d;
        if (std::abs(e1 - cur) > 1e-14 * std::abs(d))
            out.append(Segment::line(cur, e1));
        const double a1 = std::atan2((e1 - h.mu).imag(), (e1 - h.mu).real());
        const double a2 = std::atan2((e2 - h.mu).imag(), (e2 - h.mu).real());
        double dccw = wrap_2pi(a2 - a1);
        const double dang = (dccw <= pi) ? dccw : dccw - 2.0 * pi;
        out.append(Segment::arc(h.mu, clear, a1, dang));
        cur = out.end();
    }
    if (out.segs.empty() || std::abs(b - cur) > 1e-14 * std::abs(d))
        out.append(Segment::line(cur, b));
    return out;
}

CurveModel::CurveModel(BranchSet branch) : branch_(std::move(branch)) {
    genus_ = branch_.count() / 2 - 1;
    if (genus_ < 1) throw std::invalid_argument("genus must be >= 1");
    cplx centroid(0, 0);
    for (cplx p : branch_.points) centroid += p;
    centroid /= static_cast<double>(branch_.count());
    double spread = 0;
    for (cplx p : branch_.points) spread = std::max(spread, std::abs(p - centroid));
    const double reach = 2.0 * spread + 3.0 * branch_.min_gap;
    anchor_x_ = centroid + reach * std::exp(cplx(0, 1.2));
    anchor_y_ = std::sqrt(eval_poly(anchor_x_).f);
}

PolyValue CurveModel::eval_poly_skip(int skip, cplx x) const {
    cplx f(1, 0), df(0, 0);
    for (int i = 0; i < branch_.count(); ++i) {
        if (i == skip) continue;
        const cplx d = x - branch_.points[i];
        df = df * d + f;
        f *= d;
    }
    return {f, df};
}

double x_chart_min_dist(const BranchSet& br) { return 0.5 * br.r_chart(); }

double inf_chart_max_abs(const BranchSet& br) {
    double m = 0;
    for (cplx p : br.points) m = std::max(m, std::abs(p));
    return 0.5 / m;
}

namespace {

// Adaptive square-root continuation of sqrt(fn(.)) along a constant-speed
// path. Substeps are capped so their path length stays below
// clearance(z)/(n_zeros + 2): with every zero of fn at distance >= clearance
// from the current point, the true argument of fn then moves by less than
// pi/2 per step (an endpoint-only test would alias full turns to zero).
// The root closer to the previous value is kept.
template <class PointFn, class ValueFn, class ClearFn>
cplx continue_sqrt_walk(const PointFn& point, const ValueFn& value, const ClearFn& clearance,
                        int n_zeros, double speed, cplx w0, double t_from, double t_to,
                        const char* what) {
    const double total = t_to - t_from;
    if (total == 0.0) return w0;
    cplx z_prev = point(t_from);
    cplx f_prev = value(z_prev);
    if (f_prev == cplx(0, 0)) throw ContinuationStall(std::string(what) + ": start on zero locus");
    cplx w = w0;
    double t = t_from;
    double step = total;
    const double t_eps = std::abs(total) * 1e-15;
    long iter = 0;
    while (std::abs(t_to - t) > t_eps) {
        if (++iter > 4000000) throw ContinuationStall(std::string(what) + ": iteration cap");
        if (std::abs(step) > std::abs(t_to - t)) step = t_to - t;
        const double clear = clearance(z_prev);
        bool ok = clear > 0 && speed * std::abs(step) <= clear / (n_zeros + 2);
        cplx f_next;
        if (ok) {
            f_next = value(point(t + step));
            ok = f_next != cplx(0, 0) && std::abs(std::arg(f_next / f_prev)) < 1.5;
        }
        if (ok) {
            const cplx sp = std::sqrt(f_next);
            w = (std::abs(sp - w) <= std::abs(-sp - w)) ? sp : -sp;
            t += step;
            z_prev = point(t);
            f_prev = f_next;
            step *= 1.7;
        } else {
            step *= 0.5;
            if (std::abs(step) < std::abs(total) * 1e-14)
                throw ContinuationStall(std::string(what) +
                                        ": argument bound unreachable near t=" + std::to_string(t));
        }
    }
    return w;
}

} // namespace

cplx continue_y_segment(const CurveModel& curve, const Segment& seg, cplx y_start,
                        double t_from, double t_to) {
    const BranchSet& br = curve.branch();
    return continue_sqrt_walk([&](double t) { return seg.at(t); },
                              [&](cplx z) { return curve.eval_poly(z).f; },
                              [&](cplx z) { return br.dist_nearest(z); }, br.count(),
                              seg.length(), y_start, t_from, t_to, "continue_y");
}

cplx continue_y(const CurveModel& curve, const Contour& contour, cplx y_seed) {
    cplx y = y_seed;
    for (const auto& s : contour.segs) y = continue_y_segment(curve, s, y);
    return y;
}

SurfacePoint point_principal(const CurveModel& curve, cplx x) {
    const BranchSet& br = curve.branch();
    if (br.dist_nearest(x) < x_chart_min_dist(br))
        throw ChartViolation("x too close to a branch point for the x-chart: " + fmt_cplx(x));
    SurfacePoint p;
    p.chart = Chart::X;
    p.sheet = 1;
    p.coord = x;
    p.x = x;
    p.y = std::sqrt(curve.eval_poly(x).f);
    return p;
}

SurfacePoint point_on_sheet(const CurveModel& curve, cplx x, int sheet) {
    const BranchSet& br = curve.branch();
    if (sheet != 1 && sheet != 2) throw std::invalid_argument("sheet must be 1 or 2");
    if (br.dist_nearest(x) < x_chart_min_dist(br))
        throw ChartViolation("x too close to a branch point for the x-chart: " + fmt_cplx(x));
    const Contour path = detoured_path(br, curve.anchor_x(), x, br.d_safe());
    cplx y = continue_y(curve, path, curve.anchor_y());
    if (sheet == 2) y = -y;
    SurfacePoint p;
    p.chart = Chart::X;
    p.sheet = sheet;
    p.coord = x;
    p.x = x;
    p.y = y;
    return p;
}

SurfacePoint branch_chart_point(const CurveModel& curve, int branch_index, cplx s) {
    const BranchSet& br = curve.branch();
    if (branch_index < 0 || branch_index >= br.count())
        throw std::invalid_argument("branch index out of range");
    if (std::norm(s) > br.r_chart() * (1.0 + 1e-12))
        throw ChartViolation("|s|^2 exceeds the branch chart radius");
    const cplx lambda = br.points[branch_index];
    const cplx q0 = std::sqrt(curve.eval_poly_skip(branch_index, lambda).f);
    // Walk in u = s^2: the zeros of g(lambda + u) sit at |u| >= min_gap.
    const cplx q = continue_sqrt_walk(
        [&](double t) { return (t * s) * (t * s); },
        [&](cplx u) { return curve.eval_poly_skip(branch_index, lambda + u).f; },
        [&](cplx u) { return br.min_gap - std::abs(u); }, br.count() - 1, 2.0 * std::norm(s),
        q0, 0.0, 1.0, "branch chart q");
    SurfacePoint p;
    p.chart = Chart::Branch;
    p.branch = branch_index;
    p.coord = s;
    p.x = lambda + s * s;
    p.y = s * q;
    p.aux = q;
    return p;
}

SurfacePoint inf_chart_point(const CurveModel& curve, cplx xi, int sheet) {
    const BranchSet& br = curve.branch();
    if (sheet != 1 && sheet != 2) throw std::invalid_argument("sheet must be 1 or 2");
    if (std::abs(xi) > inf_chart_max_abs(br) * (1.0 + 1e-12))
        throw ChartViolation("|xi| exceeds the infinity chart radius");
    auto F = [&](cplx z) {
        cplx f(1, 0);
        for (cplx lam : br.points) f *= (cplx(1, 0) - lam * z);
        return f;
    };
    const double xi_max = inf_chart_max_abs(br);
    const cplx eta0 = (sheet == 1) ? cplx(1, 0) : cplx(-1, 0);
    // Zeros of F sit at 1/lambda, i.e. |zeta| >= 2 xi_max.
    const cplx eta = continue_sqrt_walk([&](double t) { return t * xi; }, F,
                                        [&](cplx z) { return 2.0 * xi_max - std::abs(z); },
                                        br.count(), std::abs(xi), eta0, 0.0, 1.0,
                                        "infinity chart eta");
    SurfacePoint p;
    p.chart = Chart::Inf;
    p.sheet = sheet;
    p.coord = xi;
    p.aux = eta;
    if (xi == cplx(0, 0)) {
        const double inf = std::numeric_limits<double>::infinity();
        p.x = cplx(inf, 0);
        p.y = cplx(inf, 0);
    } else {
        p.x = 1.0 / xi;
        const int g = curve.genus();
        p.y = eta * std::pow(p.x, g + 1);
    }
    return p;
}

SurfacePoint to_x_chart(const CurveModel& curve, const SurfacePoint& p) {
    if (p.chart == Chart::X) return p;
    if (p.chart == Chart::Inf && p.coord == cplx(0, 0))
        throw ChartViolation("the point over x = infinity has no x-chart representative");
    const cplx x = p.x;
    const BranchSet& br = curve.branch();
    if (br.dist_nearest(x) < x_chart_min_dist(br))
        throw ChartViolation("point outside the x-chart validity disk");
    const cplx y1 = point_on_sheet(curve, x, 1).y;
    SurfacePoint q;
    q.chart = Chart::X;
    q.sheet = (std::abs(p.y - y1) <= std::abs(p.y + y1)) ? 1 : 2;
    q.coord = x;
    q.x = x;
    q.y = p.y;
    return q;
}

SurfacePoint to_branch_chart(const CurveModel& curve, const SurfacePoint& p) {
    if (p.chart == Chart::Branch) return p;
    const BranchSet& br = curve.branch();
    const int j = br.nearest(p.x);
    const cplx lambda = br.points[j];
    if (std::abs(p.x - lambda) > br.r_chart() * (1.0 + 1e-12))
        throw ChartViolation("point outside the branch chart disk");
    cplx s = std::sqrt(p.x - lambda);
    SurfacePoint q = branch_chart_point(curve, j, s);
    if (std::abs(q.y - p.y) > std::abs(q.y + p.y)) {
        q = branch_chart_point(curve, j, -s);
    }
    q.x = p.x;
    q.y = p.y;
    return q;
}

void check_point(const CurveModel& curve, const SurfacePoint& p) {
    if (p.chart == Chart::Inf) {
        if (std::abs(p.coord) > inf_chart_max_abs(curve.branch()) * (1.0 + 1e-12))
            throw ChartViolation("infinity chart radius exceeded");
        return;
    }
    const cplx f = curve.eval_poly(p.x).f;
    if (std::abs(p.y * p.y - f) > 1e-10 * (1.0 + std::abs(f)))
        throw ChartViolation("cached y is off the curve");
    if (p.chart == Chart::X) {
        if (curve.branch().dist_nearest(p.x) < x_chart_min_dist(curve.branch()))
            throw ChartViolation("x-chart validity radius violated");
    } else {
        if (std::norm(p.coord) > curve.branch().r_chart() * (1.0 + 1e-12))
            throw ChartViolation("branch chart radius exceeded");
        const cplx lambda = curve.branch().points[p.branch];
        if (std::abs(lambda + p.coord * p.coord - p.x) > 1e-12 * (1.0 + std::abs(p.x)))
            throw ChartViolation("branch chart coordinate inconsistent with x");
    }
}

FrameValue differential_frame(const CurveModel& curve, const SurfacePoint& p) {
    const int g = curve.genus();
    FrameValue fr;
    fr.h0.resize(g);
    fr.h1.resize(g);
    std::vector<cplx> xp(g, cplx(1, 0)); // xp[i] = coordinate power i
    if (p.chart == Chart::X) {
        check_point(curve, p);
        const cplx x = p.coord;
        const cplx y = p.y;
        for (int i = 1; i < g; ++i) xp[i] = xp[i - 1] * x;
        const PolyValue pv = curve.eval_poly(x);
        const cplx logdf = pv.df / pv.f;
        for (int k = 1; k <= g; ++k) {
            const cplx xk1 = xp[k - 1];
            const cplx lead = (k == 1) ? cplx(0, 0) : static_cast<double>(k - 1) * xp[k - 2];
            fr.h0(k - 1) = xk1 / y;
            fr.h1(k - 1) = (lead - xk1 * logdf * 0.5) / y;
        }
        return fr;
    }
    if (p.chart == Chart::Branch) {
        check_point(curve, p);
        const cplx s = p.coord;
        const cplx q = p.aux;
        const cplx x = p.x;
        for (int i = 1; i < g; ++i) xp[i] = xp[i - 1] * x;
        const PolyValue gv = curve.eval_poly_skip(p.branch, x);
        const cplx logdg = gv.df / gv.f;
        for (int k = 1; k <= g; ++k) {
            const cplx xk1 = xp[k - 1];
            const cplx xk2 = (k == 1) ? cplx(0, 0) : xp[k - 2];
            fr.h0(k - 1) = 2.0 * xk1 / q;
            fr.h1(k - 1) = (2.0 * s / q) * (2.0 * static_cast<double>(k - 1) * xk2 - xk1 * logdg);
        }
        return fr;
    }
    // Infinity chart: x = 1/xi, y = eta x^{g+1} with eta^2 = prod(1 - lam xi).
    const cplx xi = p.coord;
    const cplx eta = p.aux;
    cplx F(1, 0), dF(0, 0);
    for (cplx lam : curve.branch().points) {
        const cplx d = cplx(1, 0) - lam * xi;
        dF = dF * d + F * (-lam);
        F *= d;
    }
    const cplx logdF = dF / F;
    for (int i = 1; i < g; ++i) xp[i] = xp[i - 1] * xi;
    for (int k = 1; k <= g; ++k) {
        const int m = g - k;
        const cplx xim = xp[m];
        const cplx xim1 = (m == 0) ? cplx(0, 0) : xp[m - 1];
        fr.h0(k - 1) = -xim / eta;
        fr.h1(k - 1) = (-static_cast<double>(m) * xim1 + xim * logdF * 0.5) / eta;
    }
    return fr;
}

} // namespace canmet
