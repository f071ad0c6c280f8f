#include <random>

#include "doctest.h"

#include "canmet/curve.hpp"
#include "oracles.hpp"

using namespace canmet;

namespace {

CurveModel quartic() { // y^2 = x^4 - 1
    return CurveModel(BranchSet::make({cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}));
}

CurveModel hexic() { // y^2 = x^6 - 1
    std::vector<cplx> roots;
    for (int k = 0; k < 6; ++k) roots.push_back(std::exp(cplx(0, pi * k / 3.0)));
    return CurveModel(BranchSet::make(roots));
}

// Follow-the-branch displacement for finite differences of frame entries.
SurfacePoint displaced_on_branch(const CurveModel& c, const SurfacePoint& p, cplx dz) {
    SurfacePoint q;
    q.chart = Chart::X;
    q.sheet = p.sheet;
    q.coord = p.coord + dz;
    q.x = q.coord;
    q.y = continue_y_segment(c, Segment::line(p.x, q.x), p.y);
    return q;
}

} // namespace

TEST_CASE("poly_eval products and derivatives") {
    std::vector<cplx> two = {cplx(-1, 0), cplx(1, 0)};
    auto v = poly_eval(two, cplx(0, 0));
    CHECK(v.f == cplx(-1, 0));
    CHECK(v.df == cplx(0, 0));

    std::vector<cplx> four = {cplx(0, 0), cplx(1, 0), cplx(2, 0), cplx(3, 0)};
    auto w = poly_eval(four, cplx(4, 0));
    CHECK(w.f.real() == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(w.df.real() == doctest::Approx(50.0).epsilon(1e-14));
}

TEST_CASE("branch set canonical order and validation") {
    auto br = BranchSet::make({cplx(1, 0), cplx(0, 1), cplx(0, -1), cplx(-1, 0)});
    CHECK(br.points[0] == cplx(-1, 0));
    CHECK(br.points[1] == cplx(0, -1));
    CHECK(br.points[2] == cplx(0, 1));
    CHECK(br.points[3] == cplx(1, 0));
    CHECK(br.min_gap == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(BranchSet::make({cplx(0, 0), cplx(1, 0)}), std::invalid_argument);
    CHECK_THROWS_AS(BranchSet::make({cplx(0, 0), cplx(0, 0), cplx(1, 0), cplx(2, 0)}),
                    std::invalid_argument);
}

TEST_CASE("anchor respects its clearance invariant") {
    const CurveModel c = hexic();
    for (cplx p : c.branch().points)
        CHECK(std::abs(c.anchor_x() - p) >= 2.0 * c.branch().min_gap);
    const cplx y2 = c.anchor_y() * c.anchor_y();
    const cplx f = c.eval_poly(c.anchor_x()).f;
    CHECK(std::abs(y2 - f) <= 1e-12 * std::abs(f));
}

TEST_CASE("continuation: trivial, single, and double monodromy") {
    const CurveModel c = quartic();
    const cplx far(3.0, 0.5);
    const cplx y0 = std::sqrt(c.eval_poly(far).f);

    Contour square;
    square.append(Segment::line(far, far + cplx(0.5, 0)));
    square.append(Segment::line(far + cplx(0.5, 0), far + cplx(0.5, 0.5)));
    square.append(Segment::line(far + cplx(0.5, 0.5), far + cplx(0, 0.5)));
    square.append(Segment::line(far + cplx(0, 0.5), far));
    CHECK(std::abs(continue_y(c, square, y0) - y0) < 1e-12 * std::abs(y0));

    // Small circle around the single branch point at x = 1.
    Contour loop;
    loop.segs.push_back(Segment::arc(cplx(1, 0), 0.3, 0.0, 2.0 * pi));
    const cplx seed = std::sqrt(c.eval_poly(loop.segs[0].a).f);
    const cplx end = continue_y(c, loop, seed);
    CHECK(std::abs(end + seed) < 1e-10 * std::abs(seed));

    const cplx oracle = oracles::dense_sqrt_continuation(
        [&](double t) { return loop.segs[0].at(t); },
        [&](cplx z) { return c.eval_poly(z).f; }, seed, 10000);
    CHECK(std::abs(end - oracle) < 1e-9 * std::abs(seed));

    // Circle enclosing both x = 1 and x = -1.
    Contour big;
    big.segs.push_back(Segment::arc(cplx(0, 0), 1.35, 0.0, 2.0 * pi));
    const cplx seed2 = std::sqrt(c.eval_poly(big.segs[0].a).f);
    CHECK(std::abs(continue_y(c, big, seed2) - seed2) < 1e-9 * std::abs(seed2));
}

TEST_CASE("monodromy parity equals winding parity for random contours") {
    const CurveModel c = hexic();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested = 0;
    while (tested < 20) {
        const cplx center(4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0);
        const int nv = 5 + static_cast<int>(u(rng) * 5);
        std::vector<cplx> verts;
        for (int k = 0; k < nv; ++k) {
            const double ang = 2.0 * pi * (k + 0.3 * u(rng)) / nv;
            const double rad = 0.5 + 1.5 * u(rng);
            verts.push_back(center + rad * std::exp(cplx(0, ang)));
        }
        Contour poly;
        bool clear = true;
        for (int k = 0; k < nv; ++k) {
            Segment s = Segment::line(verts[k], verts[(k + 1) % nv]);
            for (cplx p : c.branch().points)
                if (s.dist_to(p) < c.branch().d_safe()) clear = false;
            poly.append(s);
        }
        poly.segs.back().b = poly.segs.front().a;
        if (!clear) continue;
        ++tested;

        int enclosed = 0;
        for (cplx p : c.branch().points)
            enclosed += static_cast<int>(std::lround(poly.winding_number(p))) != 0 ? 1 : 0;
        const cplx seed = std::sqrt(c.eval_poly(poly.start()).f);
        const cplx end = continue_y(c, poly, seed);
        const double sign = (enclosed % 2 == 0) ? 1.0 : -1.0;
        CHECK(std::abs(end - sign * seed) < 1e-8 * std::abs(seed));
    }
}

TEST_CASE("continuation stalls on a contour through a branch point") {
    const CurveModel c = quartic();
    Contour bad;
    bad.append(Segment::line(cplx(0.5, -0.5), cplx(1.5, 0.5))); // passes through x = 1
    CHECK_THROWS_AS(continue_y(c, bad, std::sqrt(c.eval_poly(cplx(0.5, -0.5)).f)),
                    ContinuationStall);
}

TEST_CASE("detoured path keeps clearance and endpoints") {
    const CurveModel c = hexic();
    const double clear = c.branch().d_safe();
    // A straight segment through the branch point at x = 1.
    const cplx a(0.55, -0.021), b(1.8, 0.013);
    const Contour path = detoured_path(c.branch(), a, b, clear);
    CHECK(path.start() == a);
    CHECK(path.end() == b);
    CHECK(path.is_chained());
    CHECK(path.min_clearance(c.branch()) >= clear * (1.0 - 1e-9));
    CHECK(path.segs.size() >= 3); // line, arc, line at least
}

TEST_CASE("x-chart frame matches the closed forms") {
    const CurveModel c = quartic();
    const SurfacePoint p = point_principal(c, cplx(0, 0));
    CHECK(std::abs(p.y - cplx(0, 1)) < 1e-14); // principal sqrt(-1) = i
    const FrameValue fr = differential_frame(c, p);
    REQUIRE(fr.h0.size() == 1);
    CHECK(std::abs(fr.h0(0) - cplx(0, -1)) < 1e-14); // 1/i
}

TEST_CASE("branch chart frame is regular at s = 0") {
    const CurveModel c = quartic();
    const int j = c.branch().nearest(cplx(1, 0));
    const SurfacePoint p = branch_chart_point(c, j, cplx(0, 0));
    const FrameValue fr = differential_frame(c, p);
    // q(0)^2 = prod_{l != 1} (1 - lambda_l); the series oracle evaluates it directly.
    const cplx q0_sq = c.eval_poly_skip(j, cplx(1, 0)).f;
    const cplx expect = 2.0 / std::sqrt(q0_sq);
    CHECK(std::abs(fr.h0(0) - expect) < 1e-12 * std::abs(expect));
    CHECK(std::abs(fr.h1(0)) < 1e-12);
}

TEST_CASE("frame derivative agrees with finite differences") {
    for (const CurveModel& c : {quartic(), hexic()}) {
        std::mt19937_64 rng(777);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double h = 1e-5 * c.branch().r_chart();
        int done = 0;
        while (done < 100) {
            const cplx x(5.0 * u(rng) - 2.5, 5.0 * u(rng) - 2.5);
            if (c.branch().dist_nearest(x) < 1.2 * c.branch().r_chart()) continue;
            ++done;
            const SurfacePoint p = point_principal(c, x);
            const FrameValue fr = differential_frame(c, p);
            const FrameValue fp = differential_frame(c, displaced_on_branch(c, p, cplx(h, 0)));
            const FrameValue fm = differential_frame(c, displaced_on_branch(c, p, cplx(-h, 0)));
            for (int k = 0; k < c.genus(); ++k) {
                const cplx fd = (fp.h0(k) - fm.h0(k)) / (2.0 * h);
                CHECK(std::abs(fd - fr.h1(k)) <= 1e-7 * (std::abs(fr.h1(k)) + 1e-12));
            }
        }
    }
}

TEST_CASE("chart transition factors: branch and infinity overlaps") {
    const CurveModel c = hexic();
    const double rc = c.branch().r_chart();

    // x-chart vs branch chart in the overlap annulus.
    const cplx x = cplx(1, 0) + 0.8 * rc * std::exp(cplx(0, 0.7));
    const SurfacePoint px = point_on_sheet(c, x, 1);
    const SurfacePoint pb = to_branch_chart(c, px);
    CHECK(std::abs(pb.y - px.y) < 1e-10 * std::abs(px.y));
    const FrameValue fx = differential_frame(c, px);
    const FrameValue fb = differential_frame(c, pb);
    for (int k = 0; k < c.genus(); ++k) {
        const cplx expect = fx.h0(k) * 2.0 * pb.coord; // dx/ds = 2s
        CHECK(std::abs(fb.h0(k) - expect) <= 1e-8 * std::abs(expect));
    }

    // x-chart vs infinity chart.
    const cplx xf(2.6, 0.45);
    const SurfacePoint qx = point_on_sheet(c, xf, 1);
    const cplx xi = 1.0 / xf;
    SurfacePoint qi = inf_chart_point(c, xi, 1);
    if (std::abs(qi.y - qx.y) > std::abs(qi.y + qx.y)) qi = inf_chart_point(c, xi, 2);
    CHECK(std::abs(qi.y - qx.y) < 1e-9 * std::abs(qx.y));
    const FrameValue gx = differential_frame(c, qx);
    const FrameValue gi = differential_frame(c, qi);
    for (int k = 0; k < c.genus(); ++k) {
        const cplx expect = gx.h0(k) * (-xf * xf); // dx/dxi = -1/xi^2
        CHECK(std::abs(gi.h0(k) - expect) <= 1e-8 * std::abs(expect));
    }
}

TEST_CASE("chart violations are reported") {
    const CurveModel c = hexic();
    CHECK_THROWS_AS(point_principal(c, cplx(1.0 + 0.01 * c.branch().r_chart(), 0)),
                    ChartViolation);
    CHECK_THROWS_AS(branch_chart_point(c, 0, cplx(2.0 * std::sqrt(c.branch().r_chart()), 0)),
                    ChartViolation);
    CHECK_THROWS_AS(inf_chart_point(c, cplx(0.9, 0), 1), ChartViolation);
}

TEST_CASE("sheet labels: the two sheets carry opposite y") {
    const CurveModel c = hexic();
    const cplx x(0.3, 0.4);
    const SurfacePoint p1 = point_on_sheet(c, x, 1);
    const SurfacePoint p2 = point_on_sheet(c, x, 2);
    CHECK(std::abs(p1.y + p2.y) < 1e-12 * std::abs(p1.y));
    check_point(c, p1);
    check_point(c, p2);
}
