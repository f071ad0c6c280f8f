#pragma once

#include <span>
#include <vector>

#include "canmet/types.hpp"

namespace canmet {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    // Cached by order; thread safe.
    static const GaussLegendre& order(int n);
};

double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

} // namespace canmet
