#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "canmet/curve.hpp"

namespace canmet {

using MatXll = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// A branch cut: a straight segment joining two branch points.
struct Cut {
    int index = 0;
    cplx p, q;
};

/// Consecutive pairing in canonical order; throws CutCollision on overlap.
std::vector<Cut> build_cuts(const BranchSet& br);
/// Custom pairing (indices into the canonically ordered branch set).
std::vector<Cut> build_cuts(const BranchSet& br,
                            const std::vector<std::pair<int, int>>& pairing);

/// A closed loop on the surface: a closed planar contour whose analytic
/// continuation of y returns to the seed.
struct Cycle {
    Contour contour;
    std::vector<int> sheet_pattern; // per segment: +1 if y_start is the principal root
    std::vector<cplx> y_start;      // continued y at each segment start
    cplx y_seed;
};

Cycle make_cycle(const CurveModel& curve, Contour contour, cplx y_seed);

/// Sheet-1 y at x, continued from the anchor along a detoured straight path.
/// No chart validity gate; x only needs d_safe clearance.
cplx anchor_continued_y(const CurveModel& curve, cplx x);

/// 2g+1 candidates: one loop around each cut, one dumbbell through each
/// consecutive cut pair. Loops are realized as two branch point circles
/// joined by a corridor traversed once on each sheet.
std::vector<Cycle> candidate_cycles(const CurveModel& curve, const std::vector<Cut>& cuts,
                                    double radius_jitter = 0.0);

/// Signed transverse crossings, counted only when both strands lie on the
/// same sheet at the crossing point.
MatXll intersection_numbers(const CurveModel& curve, const std::vector<Cycle>& cycles);

struct CycleBasis {
    std::vector<Cycle> candidates;
    MatXll candidate_intersections;
    MatXll a_coeff; // g x n integer combinations over candidates
    MatXll b_coeff;
    int genus = 0;

    /// Intersection matrix of the reduced basis; exactly [[0,I],[-I,0]].
    MatXll intersection() const;
};

/// preferred_first >= 0 pins that candidate as the first A-vector, so the
/// reduced basis isolates it in a single hyperbolic pair.
CycleBasis symplectic_reduce(std::vector<Cycle> candidates, const MatXll& M,
                             int preferred_first = -1);

/// Full pipeline: cuts, candidates, crossings (with the one jitter retry),
/// symplectic reduction. Verifies the reduced rank matches the genus.
CycleBasis cycle_basis(const CurveModel& curve, int preferred_cut = -1);

} // namespace canmet
