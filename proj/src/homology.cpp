#include "canmet/homology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace canmet {

namespace {

double cross2(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

double wrap_2pi(double a) {
    a = std::fmod(a, 2.0 * pi);
    if (a < 0) a += 2.0 * pi;
    return a;
}

double seg_seg_distance(cplx a1, cplx b1, cplx a2, cplx b2) {
    auto seg_point = [](cplx a, cplx b, cplx p) {
        const cplx d = b - a;
        const double L2 = std::norm(d);
        if (L2 == 0) return std::abs(p - a);
        double t = ((p - a).real() * d.real() + (p - a).imag() * d.imag()) / L2;
        t = std::clamp(t, 0.0, 1.0);
        return std::abs(p - (a + t * d));
    };
    const cplx d1 = b1 - a1, d2 = b2 - a2;
    const double den = cross2(d1, d2);
    if (std::abs(den) > 1e-14 * std::abs(d1) * std::abs(d2)) {
        const double t = cross2(a2 - a1, d2) / den;
        const double u = cross2(a2 - a1, d1) / den;
        if (t >= 0 && t <= 1 && u >= 0 && u <= 1) return 0.0;
    }
    return std::min(std::min(seg_point(a1, b1, a2), seg_point(a1, b1, b2)),
                    std::min(seg_point(a2, b2, a1), seg_point(a2, b2, b1)));
}

void validate_cuts(const BranchSet& br, const std::vector<Cut>& cuts) {
    const double tol = 1e-12 * br.min_gap;
    for (size_t i = 0; i < cuts.size(); ++i)
        for (size_t j = i + 1; j < cuts.size(); ++j)
            if (seg_seg_distance(cuts[i].p, cuts[i].q, cuts[j].p, cuts[j].q) <= tol)
                throw CutCollision("cut " + std::to_string(i) + " intersects cut " +
                                   std::to_string(j));
}

} // namespace

std::vector<Cut> build_cuts(const BranchSet& br) {
    std::vector<std::pair<int, int>> pairing;
    for (int i = 0; i + 1 < br.count(); i += 2) pairing.emplace_back(i, i + 1);
    return build_cuts(br, pairing);
}

std::vector<Cut> build_cuts(const BranchSet& br, const std::vector<std::pair<int, int>>& pairing) {
    if (static_cast<int>(pairing.size()) * 2 != br.count())
        throw std::invalid_argument("pairing must cover every branch point once");
    std::vector<bool> used(br.count(), false);
    std::vector<Cut> cuts;
    for (size_t i = 0; i < pairing.size(); ++i) {
        const auto [u, v] = pairing[i];
        if (u < 0 || v < 0 || u >= br.count() || v >= br.count() || u == v || used[u] || used[v])
            throw std::invalid_argument("invalid cut pairing");
        used[u] = used[v] = true;
        cuts.push_back({static_cast<int>(i), br.points[u], br.points[v]});
    }
    validate_cuts(br, cuts);
    return cuts;
}

cplx anchor_continued_y(const CurveModel& curve, cplx x) {
    const Contour path = detoured_path(curve.branch(), curve.anchor_x(), x, curve.branch().d_safe());
    return continue_y(curve, path, curve.anchor_y());
}

Cycle make_cycle(const CurveModel& curve, Contour contour, cplx y_seed) {
    if (!contour.is_closed()) throw Error("cycle contour is not closed");
    Cycle cy;
    cy.y_seed = y_seed;
    cplx y = y_seed;
    for (const auto& seg : contour.segs) {
        cy.y_start.push_back(y);
        const cplx yp = std::sqrt(curve.eval_poly(seg.a).f);
        cy.sheet_pattern.push_back(std::abs(y - yp) <= std::abs(y + yp) ? 1 : -1);
        y = continue_y_segment(curve, seg, y);
    }
    if (std::abs(y - y_seed) > 1e-8 * (std::abs(y_seed) + 1e-300))
        throw Error("continued y does not close up around the contour");
    cy.contour = std::move(contour);
    return cy;
}

namespace {

// Circle around c starting and ending at the seam angle; endpoints snapped.
Segment full_circle(cplx c, double r, double seam_angle) {
    Segment s = Segment::arc(c, r, seam_angle, 2.0 * pi);
    s.b = s.a;
    return s;
}

Cycle pair_loop(const CurveModel& curve, cplx c1, cplx c2, double r, double clear) {
    const cplx u = (c2 - c1) / std::abs(c2 - c1);
    const Segment circle1 = full_circle(c1, r, std::atan2(u.imag(), u.real()));
    const Segment circle2 = full_circle(c2, r, std::atan2(-u.imag(), -u.real()));
    // Corridor endpoints taken from the arc endpoints keep the chain exact.
    const Contour corridor = detoured_path(curve.branch(), circle1.a, circle2.a, clear);

    Contour loop;
    loop.segs.push_back(circle1);
    loop.append(corridor);
    loop.append(circle2);
    loop.append(corridor.reversed());
    return make_cycle(curve, std::move(loop), anchor_continued_y(curve, circle1.a));
}

} // namespace

std::vector<Cycle> candidate_cycles(const CurveModel& curve, const std::vector<Cut>& cuts,
                                    double radius_jitter) {
    const int g = curve.genus();
    if (static_cast<int>(cuts.size()) != g + 1)
        throw std::invalid_argument("expected g+1 cuts");
    const double d = curve.branch().d_safe();
    const int n = 2 * g + 1;
    auto radius = [&](int k) { return d * (1.4 + 0.45 * (k + 1) / (n + 1)) + radius_jitter; };
    auto clear = [&](int k) { return d * (1.0 + 0.3 * (k + 1) / (n + 1)) + 0.5 * radius_jitter; };

    std::vector<Cycle> out;
    out.reserve(n);
    for (int i = 0; i <= g; ++i)
        out.push_back(pair_loop(curve, cuts[i].p, cuts[i].q, radius(i), clear(i)));
    for (int i = 0; i < g; ++i)
        out.push_back(
            pair_loop(curve, cuts[i].q, cuts[i + 1].p, radius(g + 1 + i), clear(g + 1 + i)));
    return out;
}

namespace {

struct Crossing {
    double t1, t2; // parameters on the two segments
    cplx z;
};

constexpr double kParamEps = 1e-9;

// Appends proper crossings; throws DegenerateCrossing for tangencies,
// overlaps, or hits too close to a segment endpoint.
void find_crossings(const Segment& s1, const Segment& s2, std::vector<Crossing>& out) {
    auto param_ok = [](double t) { return t > kParamEps && t < 1.0 - kParamEps; };
    auto param_near_end = [](double t) {
        return (t > -kParamEps && t <= kParamEps) || (t >= 1.0 - kParamEps && t < 1.0 + kParamEps);
    };
    auto arc_param = [](const Segment& s, cplx z, double& u) {
        const double ang = std::atan2((z - s.center).imag(), (z - s.center).real());
        const double off = (s.dang >= 0) ? wrap_2pi(ang - s.ang0) : wrap_2pi(s.ang0 - ang);
        u = off / std::abs(s.dang);
        return u <= 1.0 + kParamEps;
    };

    if (s1.kind == Segment::Kind::Line && s2.kind == Segment::Kind::Line) {
        const cplx d1 = s1.b - s1.a, d2 = s2.b - s2.a;
        const double den = cross2(d1, d2);
        const double scale = std::abs(d1) * std::abs(d2);
        if (std::abs(den) <= 1e-12 * scale) {
            // Parallel; only collinear overlap is a problem.
            const double off = std::abs(cross2(d1, s2.a - s1.a)) / std::abs(d1);
            if (off < 1e-10 * std::abs(d1) &&
                seg_seg_distance(s1.a, s1.b, s2.a, s2.b) < 1e-10 * std::abs(d1))
                throw DegenerateCrossing("collinear overlapping strands");
            return;
        }
        const double t = cross2(s2.a - s1.a, d2) / den;
        const double u = cross2(s2.a - s1.a, d1) / den;
        if (t < -kParamEps || t > 1 + kParamEps || u < -kParamEps || u > 1 + kParamEps) return;
        if (param_near_end(t) || param_near_end(u))
            throw DegenerateCrossing("crossing at a segment junction");
        if (param_ok(t) && param_ok(u)) out.push_back({t, u, s1.at(t)});
        return;
    }
    if (s1.kind == Segment::Kind::Arc && s2.kind == Segment::Kind::Arc) {
        const double D = std::abs(s2.center - s1.center);
        const double tol = 1e-9 * (s1.radius + s2.radius);
        if (D < tol) return; // concentric: distinct radii by construction
        if (D >= s1.radius + s2.radius - tol || D <= std::abs(s1.radius - s2.radius) + tol) {
            if (std::abs(D - (s1.radius + s2.radius)) < tol ||
                std::abs(D - std::abs(s1.radius - s2.radius)) < tol) {
                // Tangency only matters if it lies on both arc spans.
                const cplx z = s1.center + (s2.center - s1.center) * (s1.radius / D);
                double u1, u2;
                if (arc_param(s1, z, u1) && arc_param(s2, z, u2))
                    throw DegenerateCrossing("tangent circles");
            }
            return;
        }
        const cplx e = (s2.center - s1.center) / D;
        const double xx = (D * D + s1.radius * s1.radius - s2.radius * s2.radius) / (2 * D);
        const double yy2 = s1.radius * s1.radius - xx * xx;
        if (yy2 <= 0) return;
        const double yy = std::sqrt(yy2);
        for (double sgn : {1.0, -1.0}) {
            const cplx z = s1.center + e * cplx(xx, sgn * yy);
            double u1, u2;
            if (!arc_param(s1, z, u1) || !arc_param(s2, z, u2)) continue;
            if (param_near_end(u1) || param_near_end(u2))
                throw DegenerateCrossing("arc crossing at a segment junction");
            if (param_ok(u1) && param_ok(u2)) out.push_back({u1, u2, z});
        }
        return;
    }
    // Line x Arc (either order).
    const bool line_first = (s1.kind == Segment::Kind::Line);
    const Segment& ln = line_first ? s1 : s2;
    const Segment& ar = line_first ? s2 : s1;
    const cplx d = ln.b - ln.a;
    const double A = std::norm(d);
    const cplx am = ln.a - ar.center;
    const double B = 2.0 * (d.real() * am.real() + d.imag() * am.imag());
    const double C = std::norm(am) - ar.radius * ar.radius;
    const double disc = B * B - 4 * A * C;
    const double disc_tol = 1e-12 * (B * B + 4 * std::abs(A * C)) + 1e-300;
    if (disc <= 0) {
        return;
    }
    if (disc <= disc_tol) {
        const double t = -B / (2 * A);
        double u;
        if (t > -kParamEps && t < 1 + kParamEps && arc_param(ar, ln.at(t), u))
            throw DegenerateCrossing("line tangent to arc");
        return;
    }
    const double sq = std::sqrt(disc);
    for (double root : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)}) {
        if (root < -kParamEps || root > 1 + kParamEps) continue;
        const cplx z = ln.at(root);
        double u;
        if (!arc_param(ar, z, u)) continue;
        if (param_near_end(root) || param_near_end(u))
            throw DegenerateCrossing("line/arc crossing at a segment junction");
        if (!param_ok(root) || !param_ok(u)) continue;
        out.push_back(line_first ? Crossing{root, u, z} : Crossing{u, root, z});
    }
}

} // namespace

MatXll intersection_numbers(const CurveModel& curve, const std::vector<Cycle>& cycles) {
    const int n = static_cast<int>(cycles.size());
    MatXll M = MatXll::Zero(n, n);
    std::vector<Crossing> hits;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            long long total = 0;
            for (size_t si = 0; si < cycles[i].contour.segs.size(); ++si) {
                const Segment& a = cycles[i].contour.segs[si];
                for (size_t sj = 0; sj < cycles[j].contour.segs.size(); ++sj) {
                    const Segment& b = cycles[j].contour.segs[sj];
                    hits.clear();
                    find_crossings(a, b, hits);
                    for (const Crossing& h : hits) {
                        const cplx ta = a.deriv(h.t1);
                        const cplx tb = b.deriv(h.t2);
                        const double cr = cross2(ta, tb);
                        if (std::abs(cr) <= 1e-9 * std::abs(ta) * std::abs(tb))
                            throw DegenerateCrossing("non-transverse crossing");
                        const cplx ya =
                            continue_y_segment(curve, a, cycles[i].y_start[si], 0.0, h.t1);
                        const cplx yb =
                            continue_y_segment(curve, b, cycles[j].y_start[sj], 0.0, h.t2);
                        if (std::abs(ya) == 0.0 || std::abs(yb) == 0.0)
                            throw DegenerateCrossing("crossing on the branch locus");
                        const bool same_sheet = std::abs(ya - yb) <= std::abs(ya + yb);
                        if (same_sheet) total += (cr > 0) ? 1 : -1;
                    }
                }
            }
            M(i, j) = total;
            M(j, i) = -total;
        }
    }
    return M;
}

namespace {

long long pairing(const MatXll& M, const std::vector<long long>& u,
                  const std::vector<long long>& v) {
    const int n = static_cast<int>(u.size());
    long long acc = 0;
    for (int i = 0; i < n; ++i) {
        if (u[i] == 0) continue;
        long long row = 0;
        for (int j = 0; j < n; ++j) row += M(i, j) * v[j];
        acc += u[i] * row;
        if (std::abs(acc) > (1LL << 56)) throw Error("integer overflow in symplectic reduction");
    }
    return acc;
}

void axpy(std::vector<long long>& u, long long k, const std::vector<long long>& v) {
    for (size_t i = 0; i < u.size(); ++i) {
        u[i] += k * v[i];
        if (std::abs(u[i]) > (1LL << 40)) throw Error("integer overflow in symplectic reduction");
    }
}

} // namespace

CycleBasis symplectic_reduce(std::vector<Cycle> candidates, const MatXll& M,
                             int preferred_first) {
    const int n = M.rows();
    if (M.cols() != n || static_cast<int>(candidates.size()) != n)
        throw std::invalid_argument("matrix/candidate size mismatch");
    if ((M + M.transpose()).cwiseAbs().maxCoeff() != 0)
        throw std::invalid_argument("intersection matrix must be antisymmetric");
    if (preferred_first >= n) throw std::invalid_argument("preferred pivot out of range");

    std::vector<std::vector<long long>> U(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) U[i][i] = 1;
    std::vector<int> alive(n);
    for (int i = 0; i < n; ++i) alive[i] = i;
    std::vector<std::pair<std::vector<long long>, std::vector<long long>>> pairs;

    for (long guard = 0; guard < 100000; ++guard) {
        // Smallest nonzero pairing among the remaining vectors; an optional
        // preferred candidate is pinned as the first A-vector so downstream
        // code can demand that a specific cycle ends up alone in slot one.
        int ia = -1, ib = -1;
        long long best = 0;
        bool pin = false;
        if (preferred_first >= 0 && pairs.empty()) {
            for (size_t x = 0; x < alive.size(); ++x)
                if (alive[x] == preferred_first) {
                    for (size_t y = 0; y < alive.size(); ++y) {
                        if (y == x) continue;
                        const long long p = pairing(M, U[alive[x]], U[alive[y]]);
                        if (p != 0 && (ia < 0 || std::abs(p) < std::abs(best))) {
                            ia = static_cast<int>(x);
                            ib = static_cast<int>(y);
                            best = p;
                        }
                    }
                    pin = ia >= 0;
                }
        }
        if (ia < 0) {
            for (size_t x = 0; x < alive.size(); ++x)
                for (size_t y = x + 1; y < alive.size(); ++y) {
                    const long long p = pairing(M, U[alive[x]], U[alive[y]]);
                    if (p != 0 && (ia < 0 || std::abs(p) < std::abs(best))) {
                        ia = static_cast<int>(x);
                        ib = static_cast<int>(y);
                        best = p;
                    }
                }
        }
        if (ia < 0) break;
        if (best < 0) {
            if (pin) {
                // Keep the pinned vector in the A slot; flip the partner.
                for (auto& v : U[alive[ib]]) v = -v;
                best = -best;
            } else {
                std::swap(ia, ib);
                best = -best;
            }
        }
        const int a = alive[ia], b = alive[ib];
        if (best > 1) {
            // Euclidean step: make some pairing smaller than `best`.
            bool reduced = false;
            for (size_t x = 0; x < alive.size() && !reduced; ++x) {
                const int c = alive[x];
                if (c == a || c == b) continue;
                const long long pac = pairing(M, U[a], U[c]);
                if (pac % best != 0) {
                    axpy(U[c], -(pac / best), U[b]); // <a, c - k b> = pac - k best
                    reduced = true;
                    break;
                }
                const long long pbc = pairing(M, U[b], U[c]);
                if (pbc % best != 0) {
                    axpy(U[c], pbc / best, U[a]); // <b, c + k a> = pbc - k best
                    reduced = true;
                    break;
                }
            }
            if (!reduced)
                throw RankDeficient("intersection form is not unimodular on the candidate span");
            continue;
        }
        // best == 1: clear the hyperbolic pair (a, b) from everything else.
        for (size_t x = 0; x < alive.size(); ++x) {
            const int c = alive[x];
            if (c == a || c == b) continue;
            const long long ca = pairing(M, U[c], U[a]);
            const long long cb = pairing(M, U[c], U[b]);
            if (cb != 0) axpy(U[c], -cb, U[a]);
            if (ca != 0) axpy(U[c], ca, U[b]);
        }
        pairs.emplace_back(U[a], U[b]);
        std::vector<int> next;
        for (int v : alive)
            if (v != a && v != b) next.push_back(v);
        alive = std::move(next);
    }

    const int g = static_cast<int>(pairs.size());
    if (g == 0) throw RankDeficient("no symplectic pairs found");

    CycleBasis basis;
    basis.genus = g;
    basis.candidate_intersections = M;
    basis.a_coeff = MatXll::Zero(g, n);
    basis.b_coeff = MatXll::Zero(g, n);
    for (int k = 0; k < g; ++k)
        for (int c = 0; c < n; ++c) {
            basis.a_coeff(k, c) = pairs[k].first[c];
            basis.b_coeff(k, c) = pairs[k].second[c];
        }
    basis.candidates = std::move(candidates);

    // The reduced pairing must be exactly standard.
    const MatXll J = basis.intersection();
    for (int i = 0; i < 2 * g; ++i)
        for (int j = 0; j < 2 * g; ++j) {
            const long long want =
                (i < g && j == i + g) ? 1 : ((i >= g && j == i - g) ? -1 : 0);
            if (J(i, j) != want) throw RankDeficient("reduction failed to reach standard form");
        }
    return basis;
}

MatXll CycleBasis::intersection() const {
    const int g = genus;
    const int n = candidate_intersections.rows();
    MatXll T(2 * g, n);
    T.topRows(g) = a_coeff;
    T.bottomRows(g) = b_coeff;
    return T * candidate_intersections * T.transpose();
}

CycleBasis cycle_basis(const CurveModel& curve, int preferred_cut) {
    const auto cuts = build_cuts(curve.branch());
    if (preferred_cut >= static_cast<int>(cuts.size()))
        throw std::invalid_argument("preferred cut out of range");
    std::vector<Cycle> cands;
    MatXll M;
    try {
        cands = candidate_cycles(curve, cuts);
        M = intersection_numbers(curve, cands);
    } catch (const DegenerateCrossing&) {
        cands = candidate_cycles(curve, cuts, curve.branch().d_safe() / 7.0);
        M = intersection_numbers(curve, cands);
    }
    CycleBasis basis = symplectic_reduce(std::move(cands), M, preferred_cut);
    if (basis.genus != curve.genus())
        throw RankDeficient("candidate cycles span rank " + std::to_string(2 * basis.genus) +
                            ", expected " + std::to_string(2 * curve.genus()));
    return basis;
}

} // namespace canmet
