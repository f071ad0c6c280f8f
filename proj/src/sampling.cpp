#include "canmet/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace canmet {

namespace {

cplx draw_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double a = 2.0 * pi * unit(rng);
    return cplx(r * std::cos(a), r * std::sin(a));
}

} // namespace

std::vector<cplx> random_branch_points(int genus, std::uint64_t seed, double radius,
                                       double min_gap) {
    if (genus < 1) throw std::invalid_argument("genus must be >= 1");
    const int n = 2 * genus + 2;
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<cplx> pts;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            bool placed = false;
            for (int tries = 0; tries < 2000; ++tries) {
                const cplx cand = draw_in_disk(rng, radius);
                bool clear = true;
                for (cplx p : pts)
                    if (std::abs(cand - p) < min_gap) {
                        clear = false;
                        break;
                    }
                if (clear) {
                    pts.push_back(cand);
                    placed = true;
                    break;
                }
            }
            ok = placed;
        }
        if (ok) return pts;
    }
    throw Error("could not place branch points with the requested gap");
}

std::vector<cplx> generic_x_samples(const BranchSet& br, int count, std::uint64_t seed,
                                    double radius, double clearance) {
    std::mt19937_64 rng(seed);
    std::vector<cplx> out;
    long guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > 1000000) throw Error("could not place sample points");
        const cplx cand = draw_in_disk(rng, radius);
        if (br.dist_nearest(cand) >= clearance) out.push_back(cand);
    }
    return out;
}

} // namespace canmet
