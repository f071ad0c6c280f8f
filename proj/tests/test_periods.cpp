#include <cmath>

#include "doctest.h"

#include "canmet/parallel.hpp"
#include "canmet/periods.hpp"
#include "oracles.hpp"

using namespace canmet;

namespace {

CurveModel elliptic_k(double k) { // y^2 ~ (1 - x^2)(1 - k^2 x^2) up to the leading factor
    return CurveModel(
        BranchSet::make({cplx(1, 0), cplx(-1, 0), cplx(1.0 / k, 0), cplx(-1.0 / k, 0)}));
}

CurveModel hexic() {
    std::vector<cplx> roots;
    for (int q = 0; q < 6; ++q) roots.push_back(std::exp(cplx(0, pi * q / 3.0)));
    return CurveModel(BranchSet::make(roots));
}

double ellip_K_quadrature(double k) {
    // K(k) = int_0^1 dx / sqrt((1-x^2)(1-k^2 x^2)), Gauss-Chebyshev on the
    // sqrt(1-x^2) factor.
    return 0.5 * oracles::gauss_chebyshev(
                     [k](double x) { return 1.0 / std::sqrt(1.0 - k * k * x * x); }, 200);
}

} // namespace

TEST_CASE("quadrature config invariants") {
    QuadratureConfig bad;
    bad.gl_order = 2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.rel_tol = 1e-3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.max_depth = 2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(QuadratureConfig{}.validate());
}

TEST_CASE("agm oracle limits and self-dual point") {
    // K -> pi/2 as k -> 0.
    CHECK(pi / (2.0 * agm(1.0, std::sqrt(1.0 - 1e-16))) == doctest::Approx(pi / 2).epsilon(1e-12));
    const cplx tau_self = agm_period_tau(std::sqrt(0.5));
    CHECK(std::abs(tau_self - cplx(0, 1)) < 1e-12);

    // Against direct quadrature at k = 1/2.
    const double k = 0.5;
    const double K = pi / (2.0 * agm(1.0, std::sqrt(1.0 - k * k)));
    CHECK(K == doctest::Approx(ellip_K_quadrature(k)).epsilon(1e-10));
    const double Kp = pi / (2.0 * agm(1.0, k));
    const cplx tau = agm_period_tau(k);
    CHECK(std::abs(tau - cplx(0, Kp / K)) < 1e-12);

    CHECK_THROWS_AS(agm_period_tau(0.0), std::invalid_argument);
    CHECK_THROWS_AS(agm_period_tau(1.0), std::invalid_argument);
}

TEST_CASE("contractible cycles integrate to zero") {
    const CurveModel c = hexic();
    Contour square;
    const cplx base(2.4, 1.7);
    square.append(Segment::line(base, base + cplx(0.6, 0)));
    square.append(Segment::line(base + cplx(0.6, 0), base + cplx(0.6, 0.6)));
    square.append(Segment::line(base + cplx(0.6, 0.6), base + cplx(0, 0.6)));
    square.append(Segment::line(base + cplx(0, 0.6), base));
    const Cycle cy = make_cycle(c, square, std::sqrt(c.eval_poly(base).f));
    const Eigen::VectorXcd v = integrate_over_cycle(c, cy, {});
    for (int i = 0; i < v.size(); ++i) CHECK(std::abs(v(i)) < 1e-9);
}

TEST_CASE("reversed orientation negates the periods exactly") {
    const CurveModel c = hexic();
    const auto basis = cycle_basis(c);
    const Cycle& cy = basis.candidates[1];
    Cycle rev = make_cycle(c, cy.contour.reversed(), cy.y_seed);
    const Eigen::VectorXcd fwd = integrate_over_cycle(c, cy, {});
    const Eigen::VectorXcd bwd = integrate_over_cycle(c, rev, {});
    const double scale = fwd.cwiseAbs().maxCoeff();
    for (int i = 0; i < fwd.size(); ++i) CHECK(std::abs(fwd(i) + bwd(i)) <= 1e-13 * scale);
}

TEST_CASE("quartic loop period matches the real-axis oracle") {
    // y^2 = x^4 - 1; a rectangle around [-1, 1] picks up twice the integral
    // of dx/sqrt(1 - x^4) over the real cut with a pure phase.
    const CurveModel c(
        BranchSet::make({cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}));
    Contour rect;
    rect.append(Segment::line(cplx(-1.35, -0.45), cplx(1.35, -0.45)));
    rect.append(Segment::line(cplx(1.35, -0.45), cplx(1.35, 0.45)));
    rect.append(Segment::line(cplx(1.35, 0.45), cplx(-1.35, 0.45)));
    rect.append(Segment::line(cplx(-1.35, 0.45), cplx(-1.35, -0.45)));
    const Cycle cy = make_cycle(c, rect, std::sqrt(c.eval_poly(cplx(-1.35, -0.45)).f));
    const Eigen::VectorXcd v = integrate_over_cycle(c, cy, {});

    const double oracle = oracles::gauss_chebyshev(
        [](double x) { return 1.0 / std::sqrt(1.0 + x * x); }, 200); // int dx/sqrt(1-x^4)
    CHECK(std::abs(v(0).real()) < 1e-9);
    CHECK(std::abs(std::abs(v(0).imag()) - 2.0 * oracle) < 1e-9);
}

TEST_CASE("genus-1 period matches the AGM oracle across moduli") {
    for (double k : {0.3, 0.5, 0.9}) {
        const CurveModel c = elliptic_k(k);
        const auto basis = cycle_basis(c);
        const RiemannMatrix rm = riemann_matrix(c, basis, {});
        // The oracle is in the classical K'/K convention; the curve's primitive
        // periods are 4K and 2iK', so its ratio is oracle/2 up to Sp(2,Z).
        const cplx mine = oracles::fundamental_domain(rm.omega(0, 0));
        const cplx oracle = oracles::fundamental_domain(agm_period_tau(k) / 2.0);
        CHECK(std::abs(mine - oracle) < 1e-10);
    }
}

TEST_CASE("Riemann relations at genus 2") {
    const CurveModel c = hexic();
    const auto basis = cycle_basis(c);
    const RiemannMatrix rm = riemann_matrix(c, basis, {});
    CHECK(rm.symmetry_residual <= 1e-8);
    CHECK(rm.min_eig_im > 0);

    // Normalized A-periods recompute to the identity.
    QuadratureConfig tight;
    tight.rel_tol = 5e-11;
    Eigen::MatrixXcd V(basis.candidates.size(), 2);
    for (size_t i = 0; i < basis.candidates.size(); ++i)
        V.row(i) = integrate_over_cycle(c, basis.candidates[i], tight).transpose();
    const Eigen::MatrixXcd P2 = basis.a_coeff.cast<cplx>() * V;
    const Eigen::MatrixXcd I2 = P2 * rm.C;
    CHECK((I2 - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("scaling the branch points leaves omega invariant") {
    const CurveModel c1(BranchSet::make({cplx(-1.2, 0.1), cplx(-0.4, -0.6), cplx(0.3, 0.7),
                                         cplx(1.1, -0.2), cplx(1.8, 0.5), cplx(2.4, -0.3)}));
    std::vector<cplx> doubled;
    for (cplx p : c1.branch().points) doubled.push_back(2.0 * p);
    const CurveModel c2(BranchSet::make(doubled));
    const RiemannMatrix r1 = riemann_matrix(c1, cycle_basis(c1), {});
    const RiemannMatrix r2 = riemann_matrix(c2, cycle_basis(c2), {});
    CHECK((r1.omega - r2.omega).norm() <= 1e-8 * r1.omega.norm());
}

TEST_CASE("halving the tolerance barely moves omega") {
    const CurveModel c = hexic();
    const auto basis = cycle_basis(c);
    QuadratureConfig base;
    base.rel_tol = 1e-8;
    QuadratureConfig fine = base;
    fine.rel_tol = 0.5e-8;
    const RiemannMatrix r1 = riemann_matrix(c, basis, base);
    const RiemannMatrix r2 = riemann_matrix(c, basis, fine);
    CHECK((r1.omega - r2.omega).norm() <= 10.0 * base.rel_tol * r1.omega.norm());
}

TEST_CASE("exhausted bisection reports divergence") {
    // The corridor of the tiny-cut loop needs bisection deeper than 4 levels.
    const CurveModel c(BranchSet::make(
        {cplx(-1e-3, 0), cplx(1e-3, 0), cplx(-2, 0), cplx(2, 0), cplx(-3, 0), cplx(3, 0)}));
    const auto cands = candidate_cycles(c, build_cuts(c.branch()));
    QuadratureConfig shallow;
    shallow.max_depth = 4;
    shallow.rel_tol = 1e-10;
    bool threw = false;
    try {
        for (const auto& cy : cands) integrate_over_cycle(c, cy, shallow);
    } catch (const QuadratureDivergence&) {
        threw = true;
    }
    CHECK(threw);
}

TEST_CASE("results are independent of the worker count") {
    const CurveModel c = hexic();
    const auto basis = cycle_basis(c);
    set_max_threads(1);
    const RiemannMatrix r1 = riemann_matrix(c, basis, {});
    set_max_threads(2);
    const RiemannMatrix r2 = riemann_matrix(c, basis, {});
    set_max_threads(0);
    CHECK(r1.omega == r2.omega);
}

TEST_CASE("degenerate A-period combinations are rejected") {
    const CurveModel c = hexic();
    CycleBasis basis = cycle_basis(c);
    basis.a_coeff.row(1) = basis.a_coeff.row(0);
    CHECK_THROWS_AS(riemann_matrix(c, basis, {}), SingularAperiod);
}
