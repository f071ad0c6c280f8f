#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "canmet/types.hpp"

namespace canmet {

/// f(x) = prod_i (x - r_i) together with f'(x), accumulated in one pass.
struct PolyValue {
    cplx f;
    cplx df;
};

PolyValue poly_eval(std::span<const cplx> roots, cplx x);

/// The 2g+2 finite branch points of a hyperelliptic curve, in canonical
/// order: ascending real part, ties broken by imaginary part.
struct BranchSet {
    std::vector<cplx> points;
    double min_gap = 0.0;

    static BranchSet make(std::vector<cplx> pts);

    int count() const { return static_cast<int>(points.size()); }
    double r_chart() const { return min_gap / 3.0; }
    double d_safe() const { return min_gap / 10.0; }

    int nearest(cplx x) const;
    double dist_nearest(cplx x) const;
};

/// One contour piece: a straight line or a circular arc.
/// Arcs are z(t) = center + radius * exp(i (ang0 + t * dang)), t in [0,1].
struct Segment {
    enum class Kind { Line, Arc };

    Kind kind = Kind::Line;
    cplx a, b; // endpoints; authoritative for chaining
    cplx center;
    double radius = 0.0;
    double ang0 = 0.0;
    double dang = 0.0;

    static Segment line(cplx a, cplx b);
    static Segment arc(cplx center, double radius, double ang0, double dang);

    cplx at(double t) const;
    cplx deriv(double t) const; // dz/dt
    double length() const;
    double dist_to(cplx p) const;
    Segment reversed() const;
};

struct Contour {
    std::vector<Segment> segs;

    cplx start() const { return segs.front().a; }
    cplx end() const { return segs.back().b; }
    bool is_closed() const;
    bool is_chained() const; // consecutive endpoints match exactly
    double length() const;
    double min_clearance(const BranchSet& br) const;
    void append(Segment s); // snaps s.a to current end
    void append(const Contour& c);
    Contour reversed() const;
    /// Total winding angle around p divided by 2*pi (exact per segment).
    double winding_number(cplx p) const;
};

/// Straight path from a to b with arc detours of radius `clear` around any
/// branch point whose disk the segment would enter. The detour takes the
/// shorter arc; ties go to positive orientation.
Contour detoured_path(const BranchSet& br, cplx a, cplx b, double clear);

class CurveModel {
public:
    explicit CurveModel(BranchSet branch);

    const BranchSet& branch() const { return branch_; }
    int genus() const { return genus_; }
    cplx anchor_x() const { return anchor_x_; }
    cplx anchor_y() const { return anchor_y_; }

    PolyValue eval_poly(cplx x) const { return poly_eval(branch_.points, x); }
    /// prod over i != skip of (x - r_i), with derivative.
    PolyValue eval_poly_skip(int skip, cplx x) const;

private:
    BranchSet branch_;
    int genus_;
    cplx anchor_x_;
    cplx anchor_y_;
};

enum class Chart { X, Branch, Inf };

/// A point of the surface in one concrete chart.
///  X:      coord = x, sheet in {1,2}; y continued from the anchor.
///  Branch: coord = s with x = lambda_j + s^2, aux = q where y = s q.
///  Inf:    coord = xi = 1/x, aux = eta where y = eta x^{g+1}.
struct SurfacePoint {
    Chart chart = Chart::X;
    int sheet = 1;
    int branch = -1;
    cplx coord;
    cplx x;
    cplx y;
    cplx aux;
};

// Chart validity radii. X-chart points keep at least x_chart_min_dist from
// every branch point; the branch chart covers |x - lambda| <= r_chart, so the
// two overlap in an annulus.
double x_chart_min_dist(const BranchSet& br);   // 0.5 * r_chart
double inf_chart_max_abs(const BranchSet& br);  // |xi| bound

cplx continue_y(const CurveModel& curve, const Contour& contour, cplx y_seed);
cplx continue_y_segment(const CurveModel& curve, const Segment& seg, cplx y_start,
                        double t_from = 0.0, double t_to = 1.0);

/// X-chart point with the anchor-based sheet convention: sheet 1 carries the
/// continuation of the principal root at the anchor.
SurfacePoint point_on_sheet(const CurveModel& curve, cplx x, int sheet);
/// X-chart point with y = principal sqrt(f). Cheap; valid wherever a sheet
/// label is not needed (the metric quantities are even in y).
SurfacePoint point_principal(const CurveModel& curve, cplx x);
SurfacePoint branch_chart_point(const CurveModel& curve, int branch_index, cplx s);
SurfacePoint inf_chart_point(const CurveModel& curve, cplx xi, int sheet);

SurfacePoint to_x_chart(const CurveModel& curve, const SurfacePoint& p);
SurfacePoint to_branch_chart(const CurveModel& curve, const SurfacePoint& p);

void check_point(const CurveModel& curve, const SurfacePoint& p); // throws ChartViolation

struct FrameValue {
    Eigen::VectorXcd h0; // coefficients of x^{k-1} dx / y in the chart coordinate
    Eigen::VectorXcd h1; // d/d(coord) of h0
};

FrameValue differential_frame(const CurveModel& curve, const SurfacePoint& p);

} // namespace canmet
