#pragma once

// Independent oracles used by the tests. These deliberately avoid the library
// code paths they are checking.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "canmet/types.hpp"

namespace oracles {

using canmet::cplx;

/// Square-root continuation by brute force: N fixed samples along the path,
/// nearest-root tracking at every step.
inline cplx dense_sqrt_continuation(const std::function<cplx(double)>& path,
                                    const std::function<cplx(cplx)>& f, cplx w0, int n_samples) {
    cplx w = w0;
    for (int k = 1; k <= n_samples; ++k) {
        const cplx v = f(path(static_cast<double>(k) / n_samples));
        const cplx sp = std::sqrt(v);
        w = (std::abs(sp - w) <= std::abs(-sp - w)) ? sp : -sp;
    }
    return w;
}

/// Gauss-Chebyshev: integral of f(x)/sqrt(1-x^2) over [-1, 1].
inline double gauss_chebyshev(const std::function<double(double)>& f, int n) {
    double s = 0;
    for (int k = 1; k <= n; ++k) s += f(std::cos((2.0 * k - 1.0) * canmet::pi / (2.0 * n)));
    return s * canmet::pi / n;
}

/// Modular reduction of a genus-1 period to the standard fundamental domain.
inline cplx fundamental_domain(cplx tau) {
    for (int i = 0; i < 200; ++i) {
        tau -= std::round(tau.real());
        if (std::abs(tau) < 1.0 - 1e-15) {
            tau = -1.0 / tau;
            continue;
        }
        break;
    }
    tau -= std::round(tau.real());
    return tau;
}

/// Proper segment intersection predicate via orientation tests.
inline bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
    auto orient = [](cplx p, cplx q, cplx r) {
        const double v = (q.real() - p.real()) * (r.imag() - p.imag()) -
                         (q.imag() - p.imag()) * (r.real() - p.real());
        return (v > 0) - (v < 0);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

} // namespace oracles
