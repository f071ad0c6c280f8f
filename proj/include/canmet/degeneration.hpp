#pragma once

#include <memory>
#include <span>
#include <vector>

#include "canmet/metric.hpp"

namespace canmet {

enum class PinchKind { Nonsep, Sep };

std::vector<cplx> default_nonsep_betas(); // {-3, -2, 2, 3, 2-2i, 2+2i}
std::vector<cplx> default_sep_alphas();   // fifth roots of unity scaled by 0.8
std::vector<cplx> default_sep_betas();    // {2, 3, -2, -3, 4}

/// One-parameter pinching family realized by branch point collision.
///  Nonsep (genus 3): f_t = (x^2 - t^2) prod(x - beta_j), plumbing |t_p| = |t|^2.
///  Sep (genus 4):    f_eps = prod(x - eps alpha_i) prod(x - beta_j).
struct PinchFamily {
    PinchKind kind = PinchKind::Nonsep;
    cplx t;
    std::vector<cplx> alphas;
    std::vector<cplx> betas;

    static PinchFamily nonsep(cplx t, std::vector<cplx> betas = default_nonsep_betas());
    static PinchFamily sep(cplx eps, std::vector<cplx> alphas = default_sep_alphas(),
                           std::vector<cplx> betas = default_sep_betas());

    std::vector<cplx> branch_points() const;
    double plumbing_abs() const;
    double L() const; // |log plumbing_abs|
};

inline constexpr double collar_u_max = 0.5;
inline constexpr double pinch_t_floor = 1e-6;

/// The plumbing annulus |t| < |u| < u_max of an opened nonseparating node,
/// with the inner/outer region split at L^{-1/2}.
struct CollarChart {
    double t_abs = 0;
    double L = 0;
    double u_min = 0;
    double u_max = collar_u_max;
    double mid_radius() const { return 1.0 / std::sqrt(L); }
};

CollarChart make_collar(const PinchFamily& fam);

/// Deeper bisection than the plain default; pinch integrands cluster near
/// the colliding pair.
inline QuadratureConfig pinch_quadrature_defaults() { return {24, 1e-10, 26}; }

/// A family member with homology, periods, and evaluator computed once.
class PinchInstance {
public:
    PinchInstance(const PinchFamily& fam, const QuadratureConfig& cfg);

    const PinchFamily& family() const { return fam_; }
    const CurveModel& curve() const { return *curve_; }
    const CycleBasis& basis() const { return basis_; }
    const RiemannMatrix& rm() const { return ev_->rm(); }
    const MetricEvaluator& evaluator() const { return *ev_; }
    CollarChart collar() const { return make_collar(fam_); }
    cplx collar_g_seed() const { return g_seed_; }

private:
    PinchFamily fam_;
    std::unique_ptr<CurveModel> curve_;
    CycleBasis basis_;
    std::unique_ptr<MetricEvaluator> ev_;
    cplx g_seed_; // anchor-consistent branch of sqrt(prod(x - beta)) at x = 0
};

/// u -> (x, y) via x = (u + t^2/u)/2, with the local root w = (u - t^2/u)/2,
/// so x^2 - w^2 = t^2 exactly. Picks the branch chart near the colliding pair.
SurfacePoint collar_to_surface(const PinchInstance& inst, cplx u);

/// Canonical density in the u coordinate.
double collar_density_u(const PinchInstance& inst, cplx u);

struct RadialStats {
    double radius = 0;
    double max_abs_K = 0;
    double median_abs_K = 0;
};

std::vector<RadialStats> curvature_profile(const PinchInstance& inst,
                                           std::span<const double> radii, int n_angles);

struct CollarBounds {
    double c_low = 0, c_high = 0;         // min/max of rho_u |u|^2 L over B'
    double outer_low = 0, outer_high = 0; // min/max of rho_u over B''
};

CollarBounds collar_metric_check(const PinchInstance& inst, int n_samples);

/// I(t) = L * integral of rho over B' in the u chart.
double collar_integral(const PinchInstance& inst, int radial_per_decade = 8, int n_angles = 64);

struct GramStats {
    int dominant = 0; // index of the diagonal with the growing period
    double im_dom = 0;
    double a_dom_L = 0;
    double offdiag_L = 0;
};

GramStats gram_stats(const RiemannMatrix& rm, double L, int dominant);

struct ScalingRow {
    double t = 0, L = 0;
    double m_outer = 0, m_mid = 0, m_inner = 0;
    double mid_over_L = 0;
    double inner_env = 0; // m_inner / (|t_p| L^2)
    double c_low = 0, c_high = 0;
    double collar_I = 0;
    double I_ratio = 0; // I / (L - log L)
    GramStats gram;
    std::vector<RadialStats> profile; // optional plot ladder
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    int n_angles = 0;
    bool mid_increasing = false;
    bool inner_decreasing = false;
    double mid_band = 0;     // max/min of m_mid / L
    double outer_band = 0;   // max/min of m_outer
    double inner_band = 0;   // max/min of inner_env
    double c_low_band = 0;
    double c_high_band = 0;
    double I_band = 0;
    double im_decade_var = 0; // relative spread of decade differences of Im omega_11
    double a11_band = 0;
    double offdiag_band = 0;
};

/// profile_points > 0 additionally samples a geometric radius ladder per t.
ScalingReport nonsep_sweep(std::span<const double> t_grid, int n_angles,
                           const QuadratureConfig& cfg, int profile_points = 0,
                           std::vector<cplx> betas = default_nonsep_betas());

struct GramRow {
    double t = 0, L = 0;
    GramStats gram;
};

std::vector<GramRow> gram_asymptotics(std::span<const double> t_grid,
                                      const QuadratureConfig& cfg);

/// Probes: eight fixed points with |x| = 1.5 and the neck circle |x| =
/// sqrt(eps) (the plumbing core). Densities at neck probes are reported in
/// the node chart z = sqrt(x). The edge_* columns probe the outer-collar
/// boundary |x| = 1/|log t_p| instead of the core.
struct SepRow {
    double eps = 0;
    double max_abs_K = 0;
    double max_rho = 0;
    double max_K_signed = 0;
    double edge_max_abs_K = 0;
    double edge_max_rho = 0;
};

struct SepReport {
    std::vector<SepRow> rows;
    double k_band = 0;
    double rho_band = 0;
    double edge_k_band = 0;
    double edge_rho_band = 0;
};

SepReport sep_sweep(std::span<const double> eps_grid, const QuadratureConfig& cfg,
                    std::vector<cplx> alphas = default_sep_alphas(),
                    std::vector<cplx> betas = default_sep_betas());

} // namespace canmet
