#include "canmet/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace canmet {

namespace {

GaussLegendre compute_rule(int n) {
    if (n < 2) throw std::invalid_argument("Gauss-Legendre order must be >= 2");
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev estimate of the i-th root, then Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    return gl;
}

} // namespace

const GaussLegendre& GaussLegendre::order(int n) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

namespace {

template <class T>
T pairwise_sum_impl(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s = v[0];
        for (size_t i = 1; i < v.size(); ++i) s += v[i];
        return s;
    }
    const size_t half = v.size() / 2;
    return pairwise_sum_impl(v.first(half)) + pairwise_sum_impl(v.subspan(half));
}

} // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_sum_impl(v); }
cplx pairwise_sum(std::span<const cplx> v) { return pairwise_sum_impl(v); }

} // namespace canmet
