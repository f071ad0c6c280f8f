#include <cmath>

#include "doctest.h"

#include "canmet/metric.hpp"
#include "canmet/sampling.hpp"
#include "oracles.hpp"

using namespace canmet;

namespace {

struct Fixture {
    CurveModel curve;
    MetricEvaluator ev;
    explicit Fixture(std::vector<cplx> roots)
        : curve(BranchSet::make(std::move(roots))),
          ev(curve, riemann_matrix(curve, cycle_basis(curve), {})) {}
};

std::vector<cplx> nth_roots(int n) {
    std::vector<cplx> r;
    for (int k = 0; k < n; ++k) r.push_back(std::exp(cplx(0, 2.0 * pi * k / n)));
    return r;
}

Fixture& quartic() {
    static Fixture f(nth_roots(4));
    return f;
}

Fixture& hexic() {
    static Fixture f(nth_roots(6));
    return f;
}

} // namespace

TEST_CASE("density is positive, real, and sheet independent") {
    auto& fx = hexic();
    for (cplx x : generic_x_samples(fx.curve.branch(), 25, 99, 2.2, fx.curve.branch().r_chart())) {
        const double r1 = fx.ev.rho(point_on_sheet(fx.curve, x, 1));
        const double r2 = fx.ev.rho(point_on_sheet(fx.curve, x, 2));
        CHECK(r1 > 0);
        CHECK(r1 == doctest::Approx(r2).epsilon(1e-13));
    }
}

TEST_CASE("genus-1 curvature vanishes and the area is 1") {
    auto& fx = quartic();
    for (cplx x : generic_x_samples(fx.curve.branch(), 30, 7, 2.0, fx.curve.branch().r_chart())) {
        const CurvatureSample cs = fx.ev.curvature(point_principal(fx.curve, x));
        CHECK(std::abs(cs.K) < 1e-8);
    }
    const SurfacePoint p = point_principal(fx.curve, cplx(0.4, 0.1));
    CHECK(std::abs(fx.ev.curvature_fd(p, 1e-4)) < 1e-6);

    const double area = fx.ev.surface_area();
    CHECK(std::abs(area - 1.0) <= 0.01);
    CHECK(std::abs(fx.ev.total_curvature()) <= 0.05);
}

TEST_CASE("density transforms with |2s|^2 between overlapping charts") {
    auto& fx = hexic();
    const double rc = fx.curve.branch().r_chart();
    const cplx x = cplx(1, 0) + 0.75 * rc * std::exp(cplx(0, 2.1));
    const SurfacePoint px = point_on_sheet(fx.curve, x, 1);
    const SurfacePoint pb = to_branch_chart(fx.curve, px);
    const double rho_x = fx.ev.rho(px);
    const double rho_s = fx.ev.rho(pb);
    CHECK(rho_s == doctest::Approx(rho_x * std::norm(2.0 * pb.coord)).epsilon(1e-8));

    const double kx = fx.ev.curvature(px).K;
    const double kb = fx.ev.curvature(pb).K;
    CHECK(kx == doctest::Approx(kb).epsilon(1e-8));
}

TEST_CASE("curvature vanishes at branch points and is negative elsewhere") {
    auto& fx = hexic();
    for (int j = 0; j < fx.curve.branch().count(); ++j) {
        const CurvatureSample cs = fx.ev.curvature(branch_chart_point(fx.curve, j, cplx(0, 0)));
        CHECK(std::abs(cs.K) <= 1e-6);
        CHECK(cs.rho > 0);
    }
    for (cplx x : generic_x_samples(fx.curve.branch(), 40, 31, 2.0, fx.curve.branch().r_chart()))
        CHECK(fx.ev.curvature(point_principal(fx.curve, x)).K < 0);
}

TEST_CASE("closed-form curvature matches finite differences") {
    auto& fx = hexic();
    const double h = 1e-4 * fx.curve.branch().r_chart();
    int checked = 0;
    for (cplx x :
         generic_x_samples(fx.curve.branch(), 30, 555, 1.3, 1.3 * fx.curve.branch().r_chart())) {
        const SurfacePoint p = point_principal(fx.curve, x);
        const double kc = fx.ev.curvature(p).K;
        const double kf = fx.ev.curvature_fd(p, h);
        CHECK(std::abs(kf - kc) <= 1e-5 * std::abs(kc));
        // Richardson cross-check: the doubled step stays within tolerance and
        // the h^2 extrapolation of the pair lands closer than either.
        const double kf2 = fx.ev.curvature_fd(p, 2.0 * h);
        CHECK(std::abs(kf2 - kc) <= 1e-5 * std::abs(kc));
        const double rich = (4.0 * kf - kf2) / 3.0;
        CHECK(std::abs(rich - kc) <= 1e-5 * std::abs(kc));
        ++checked;
    }
    CHECK(checked == 30);
}

TEST_CASE("finite-difference stencil respects the chart boundary") {
    auto& fx = hexic();
    const double rc = fx.curve.branch().r_chart();
    const SurfacePoint p = point_principal(fx.curve, cplx(1, 0) + cplx(0.8 * rc, 0));
    CHECK_THROWS_AS(fx.ev.curvature_fd(p, 0.5 * rc), ChartViolation);
}

TEST_CASE("nonpositivity across random curves") {
    for (int trial = 0; trial < 2; ++trial) {
        const CurveModel c(BranchSet::make(random_branch_points(3, 1000 + trial)));
        const MetricEvaluator ev(c, riemann_matrix(c, cycle_basis(c), {}));
        for (cplx x : generic_x_samples(c.branch(), 50, 17, 2.5, c.branch().r_chart())) {
            const CurvatureSample cs = ev.curvature(point_principal(c, x));
            CHECK(cs.K <= 1e-9);
            CHECK(cs.rho > 0);
        }
    }
}

TEST_CASE("area law and Gauss-Bonnet at genus 2") {
    auto& fx = hexic();
    const double area = fx.ev.surface_area();
    CHECK(std::abs(area - 2.0) <= 0.02);
    const double total = fx.ev.total_curvature();
    CHECK(std::abs(total - (-4.0 * pi)) <= 0.02 * 4.0 * pi);
}

TEST_CASE("gram pairings reproduce Im(omega)") {
    auto& fx = hexic();
    const Eigen::MatrixXcd G = fx.ev.gram_matrix();
    const Eigen::MatrixXd im = fx.ev.rm().omega.imag();
    const double scale = im.cwiseAbs().maxCoeff();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(G(i, j) - std::conj(G(j, i))) <= 1e-8 * scale);
            CHECK(std::abs(G(i, j) - cplx(im(i, j), 0)) <= 0.01 * scale);
        }
    CHECK(G(0, 0).real() > 0);
    const cplx p01 = fx.ev.gram_pairing(1, 2);
    CHECK(std::abs(p01 - G(0, 1)) <= 0.005 * scale);
}

TEST_CASE("x-chart samples switch to the branch chart near branch points") {
    auto& fx = hexic();
    const cplx lambda(1, 0);
    const cplx x = lambda + cplx(0.2 * fx.curve.branch().r_chart(), 0);
    const auto s = fx.ev.sample_at_x(x);
    CHECK(s.K <= 1e-9);
    CHECK(s.rho_x > 0);
}
