#pragma once

#include <cstdint>
#include <vector>

#include "canmet/curve.hpp"

namespace canmet {

/// 2g+2 points uniform in a disk with the pairwise gap enforced by
/// rejection. Deterministic for a fixed seed.
std::vector<cplx> random_branch_points(int genus, std::uint64_t seed, double radius = 2.0,
                                       double min_gap = 0.25);

/// Points in |x| <= radius keeping `clearance` away from every branch point.
std::vector<cplx> generic_x_samples(const BranchSet& br, int count, std::uint64_t seed,
                                    double radius, double clearance);

} // namespace canmet
