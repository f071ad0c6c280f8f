#include <cmath>

#include "doctest.h"

#include "canmet/degeneration.hpp"

using namespace canmet;

TEST_CASE("pinch family shapes and validation") {
    const PinchFamily nf = PinchFamily::nonsep(cplx(1e-2, 0));
    CHECK(nf.branch_points().size() == 8); // genus 3
    CHECK(CurveModel(BranchSet::make(nf.branch_points())).genus() == 3);
    CHECK(nf.plumbing_abs() == doctest::Approx(1e-4));
    CHECK(nf.L() == doctest::Approx(2.0 * std::abs(std::log(1e-2))));

    const PinchFamily sf = PinchFamily::sep(cplx(1e-2, 0));
    CHECK(sf.branch_points().size() == 10); // genus 4
    CHECK(CurveModel(BranchSet::make(sf.branch_points())).genus() == 4);

    CHECK_THROWS_AS(PinchFamily::nonsep(cplx(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(PinchFamily::nonsep(cplx(1e-7, 0)), std::invalid_argument);
    CHECK_THROWS_AS(PinchFamily::nonsep(cplx(1e-2, 0), {cplx(1, 0)}), std::invalid_argument);
    CHECK_THROWS_AS(make_collar(PinchFamily::sep(cplx(1e-2, 0))), std::invalid_argument);
}

TEST_CASE("collar map algebra") {
    const cplx t(1e-2, 0);
    // u = t is the branch point itself.
    CHECK(std::abs(0.5 * (t + t * t / t) - t) == 0.0);
    // |u| >> |t|: x = u/2 with relative error below |t/u|^2.
    const cplx u(0.37, 0.12);
    const cplx x = 0.5 * (u + t * t / u);
    CHECK(std::abs(x - 0.5 * u) <= std::norm(t / u) * std::abs(0.5 * u) * (1 + 1e-12));
}

TEST_CASE("collar points, density, and the inverse map") {
    const PinchFamily fam = PinchFamily::nonsep(cplx(1e-2, 0));
    const PinchInstance inst(fam, pinch_quadrature_defaults());
    const CollarChart cc = inst.collar();
    CHECK(cc.u_min < cc.mid_radius());
    CHECK(cc.mid_radius() < cc.u_max);

    for (double r : {2.5e-2, 0.1, 0.4}) {
        for (int k = 0; k < 8; ++k) {
            const cplx u = r * std::exp(cplx(0, 2.0 * pi * k / 8.0));
            const SurfacePoint p = collar_to_surface(inst, u);
            check_point(inst.curve(), p);
            // Inverse: the larger root of u^2 - 2xu + t^2 = 0 recovers u.
            const cplx t = fam.t;
            const cplx w = std::sqrt(p.x * p.x - t * t);
            const cplx up = (std::abs(p.x + w) >= std::abs(p.x - w)) ? p.x + w : p.x - w;
            CHECK(std::abs(up - u) <= 1e-10 * std::abs(u));

            CHECK(collar_density_u(inst, u) > 0);
            const CurvatureSample cs = inst.evaluator().curvature(p);
            CHECK(cs.K <= 1e-9);
        }
    }
    CHECK_THROWS_AS(collar_to_surface(inst, cplx(1e-3, 0)), OutOfCollar);
    CHECK_THROWS_AS(collar_to_surface(inst, cplx(0.7, 0)), OutOfCollar);
}

TEST_CASE("collar metric bounds and sampling adequacy") {
    const PinchInstance inst(PinchFamily::nonsep(cplx(1e-2, 0)), pinch_quadrature_defaults());
    const CollarBounds b = collar_metric_check(inst, 8 * 64);
    CHECK(b.c_low > 1.0 / 20.0);
    CHECK(b.c_high < 20.0);
    CHECK(b.c_low > 0);
    CHECK(b.outer_low > 0);
    CHECK(b.outer_high < 1e3);

    // Half-step rotation of the angular grid moves the mid-circle max by < 5%.
    const CollarChart cc = inst.collar();
    const int n = 64;
    double m0 = 0, m1 = 0;
    for (int k = 0; k < n; ++k) {
        const double base = 2.0 * pi * k / n;
        const cplx u0 = cc.mid_radius() * std::exp(cplx(0, base));
        const cplx u1 = cc.mid_radius() * std::exp(cplx(0, base + pi / n));
        m0 = std::max(m0, std::abs(inst.evaluator().curvature(collar_to_surface(inst, u0)).K));
        m1 = std::max(m1, std::abs(inst.evaluator().curvature(collar_to_surface(inst, u1)).K));
    }
    CHECK(std::abs(m1 - m0) <= 0.05 * m0);
}

TEST_CASE("collar integral is positive and refinement-stable") {
    const PinchInstance inst(PinchFamily::nonsep(cplx(1e-2, 0)), pinch_quadrature_defaults());
    const double coarse = collar_integral(inst, 8, 64);
    const double fine = collar_integral(inst, 16, 128);
    CHECK(coarse > 0);
    CHECK(std::abs(fine - coarse) <= 0.01 * std::abs(fine));
}

TEST_CASE("two-point sweep: mid-circle curvature grows as t shrinks") {
    const double grid[2] = {1e-2, 1e-3};
    const ScalingReport rep = nonsep_sweep(grid, 32, pinch_quadrature_defaults());
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.mid_increasing);
    CHECK(rep.rows[0].m_mid > 0);
    CHECK(rep.rows[1].m_mid > rep.rows[0].m_mid);
    CHECK(rep.rows[1].m_inner < rep.rows[0].m_inner);
    for (const auto& row : rep.rows) {
        CHECK(row.c_low > 1.0 / 20.0);
        CHECK(row.c_high < 20.0);
        CHECK(row.I_ratio > 1.0 / 3.0);
        CHECK(row.I_ratio < 3.0);
        CHECK(row.gram.im_dom > 0);
        CHECK(row.gram.a_dom_L > 0);
    }
    CHECK(rep.rows[1].gram.im_dom > rep.rows[0].gram.im_dom);
}

TEST_CASE("gram asymptotics track the vanishing period") {
    const double grid[2] = {1e-2, 1e-3};
    const auto rows = gram_asymptotics(grid, pinch_quadrature_defaults());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].gram.dominant == rows[1].gram.dominant);
    CHECK(rows[1].gram.im_dom > rows[0].gram.im_dom);
    // leading log coefficient ~ 1/(2 pi): growth per decade of t is log(100)/(2 pi)
    const double growth = rows[1].gram.im_dom - rows[0].gram.im_dom;
    CHECK(growth == doctest::Approx(std::log(100.0) / (2.0 * pi)).epsilon(0.05));
    for (const auto& r : rows) {
        CHECK(r.gram.a_dom_L > 0);
        CHECK(r.gram.offdiag_L >= 0);
    }
}

TEST_CASE("separating sweep stays bounded at one epsilon") {
    const double grid[1] = {1e-2};
    const SepReport rep = sep_sweep(grid, pinch_quadrature_defaults());
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].max_K_signed <= 1e-9);
    CHECK(rep.rows[0].max_rho > 0);
    CHECK(rep.rows[0].max_abs_K > 0);
}
