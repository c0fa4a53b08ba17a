#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "twwc/channel.hpp"
#include "twwc/info_measures.hpp"

namespace twwc {

// The five Shannon quantities entering every region formula (nats).
struct MeasureBundle {
    double i_y2v1_x2 = 0;  // I(Y2;V1|X2)
    double i_y1v2_x1 = 0;  // I(Y1;V2|X1)
    double i_z_v1 = 0;     // I(Z;V1)
    double i_z_v2 = 0;     // I(Z;V2)
    double i_z_v1v2 = 0;   // I(V1,V2;Z)
};

struct RatePair {
    double R1 = 0, R2 = 0;
};

// Halfspace a1*R1 + a2*R2 <= b. Regions live in the nonnegative quadrant;
// R1 >= 0 and R2 >= 0 are ambient and not listed.
struct Halfspace {
    double a1 = 0, a2 = 0, b = 0;
};

struct RateRegion {
    std::vector<Halfspace> halfspaces;
    std::vector<RatePair> vertices;  // hull-ordered, for display
    bool clamped = false;            // some bound was negative and clamped to 0
};

enum class SecrecyKind { Joint, Individual };
enum class CodingKind { Adaptive, NonAdaptive };

inline MeasureBundle measure_bundle(const Channel& ch, const InputDistribution& d) {
    JointPmf j = joint_pmf(ch, d);
    MeasureBundle m;
    m.i_y2v1_x2 = conditional_mutual_information(j, {"Y2"}, {"V1"}, {"X2"});
    m.i_y1v2_x1 = conditional_mutual_information(j, {"Y1"}, {"V2"}, {"X1"});
    m.i_z_v1 = mutual_information(j, {"Z"}, {"V1"});
    m.i_z_v2 = mutual_information(j, {"Z"}, {"V2"});
    m.i_z_v1v2 = mutual_information(j, {"Z"}, {"V1", "V2"});
    return m;
}

namespace detail {

// Vertex enumeration for a small 2-D H-representation: intersect every pair of
// boundary lines (including the axes) and keep feasible points.
inline std::vector<RatePair> enumerate_vertices(const std::vector<Halfspace>& hs, double tol = 1e-9) {
    std::vector<Halfspace> lines = hs;
    lines.push_back({1, 0, 0});   // R1 = 0 boundary (as -R1 <= 0 flipped; line form only)
    lines.push_back({0, 1, 0});
    auto feasible = [&](double r1, double r2) {
        if (r1 < -tol || r2 < -tol) return false;
        for (const auto& h : hs)
            if (h.a1 * r1 + h.a2 * r2 > h.b + tol) return false;
        return true;
    };
    std::vector<RatePair> pts;
    auto push = [&](double r1, double r2) {
        r1 = std::max(r1, 0.0) + 0.0;  // +0.0 normalizes negative zero
        r2 = std::max(r2, 0.0) + 0.0;
        if (!feasible(r1, r2)) return;
        for (const auto& p : pts)
            if (std::fabs(p.R1 - r1) < 1e-9 && std::fabs(p.R2 - r2) < 1e-9) return;
        pts.push_back({r1, r2});
    };
    push(0, 0);
    for (size_t i = 0; i < lines.size(); ++i)
        for (size_t j = i + 1; j < lines.size(); ++j) {
            double det = lines[i].a1 * lines[j].a2 - lines[j].a1 * lines[i].a2;
            if (std::fabs(det) < 1e-12) continue;
            double r1 = (lines[i].b * lines[j].a2 - lines[j].b * lines[i].a2) / det;
            double r2 = (lines[i].a1 * lines[j].b - lines[j].a1 * lines[i].b) / det;
            push(r1, r2);
        }
    return pts;
}

// Monotone chain; lexicographic tie-break. Returns counterclockwise hull.
inline std::vector<RatePair> convex_hull(std::vector<RatePair> pts) {
    std::sort(pts.begin(), pts.end(), [](const RatePair& a, const RatePair& b) {
        return a.R1 != b.R1 ? a.R1 < b.R1 : a.R2 < b.R2;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const RatePair& a, const RatePair& b) {
                              return std::fabs(a.R1 - b.R1) < 1e-12 && std::fabs(a.R2 - b.R2) < 1e-12;
                          }),
              pts.end());
    if (pts.size() <= 2) return pts;
    auto cross = [](const RatePair& o, const RatePair& a, const RatePair& b) {
        return (a.R1 - o.R1) * (b.R2 - o.R2) - (a.R2 - o.R2) * (b.R1 - o.R1);
    };
    std::vector<RatePair> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

}  // namespace detail

// Emits the paper's inequality set for the requested secrecy/coding kind.
// Nonnegativity convention: every bound value (including each argument of the
// min terms in the individual-adaptive sum constraint) is clamped at 0, with
// the clamped flag raised when a value fell below -1e-9.
inline RateRegion region_from_measures(const MeasureBundle& m, SecrecyKind sec, CodingKind cod) {
    const double A = m.i_y2v1_x2, B = m.i_y1v2_x1;
    const double C1 = m.i_z_v1, C2 = m.i_z_v2, C12 = m.i_z_v1v2;
    RateRegion r;
    auto clamp0 = [&](double v) {
        if (v < -1e-9) r.clamped = true;
        return std::max(v, 0.0);
    };
    double sum_adaptive = clamp0(A + B - C12);
    if (sec == SecrecyKind::Joint) {
        if (cod == CodingKind::Adaptive) {
            r.halfspaces = {{1, 0, clamp0(A)}, {0, 1, clamp0(B)}, {1, 1, sum_adaptive}};
        } else {
            r.halfspaces = {{1, 0, clamp0(A - C1)}, {0, 1, clamp0(B - C2)}, {1, 1, sum_adaptive}};
        }
    } else {
        if (cod == CodingKind::Adaptive) {
            double sum_ind = clamp0(std::min(clamp0(A - C1), sum_adaptive) +
                                    std::min(clamp0(B - C2), sum_adaptive));
            r.halfspaces = {{1, 0, clamp0(A)}, {0, 1, clamp0(B)},
                            {1, 0, sum_adaptive}, {0, 1, sum_adaptive},  // max{R1,R2} bound
                            {1, 1, sum_ind}};
        } else {
            r.halfspaces = {{1, 0, clamp0(A - C1)}, {0, 1, clamp0(B - C2)},
                            {1, 0, sum_adaptive}, {0, 1, sum_adaptive}};
        }
    }
    r.vertices = detail::convex_hull(detail::enumerate_vertices(r.halfspaces));
    return r;
}

inline bool contains(const RateRegion& r, const RatePair& p, double tol = 1e-9) {
    if (p.R1 < -tol || p.R2 < -tol) return false;
    for (const auto& h : r.halfspaces)
        if (h.a1 * p.R1 + h.a2 * p.R2 > h.b + tol) return false;
    return true;
}

// ---- Union over input distributions -------------------------------------

struct SearchOptions {
    int samples = 200;          // Dirichlet(1) random restarts
    int refine_steps = 40;      // coordinate-ascent perturbations per weight direction
    uint64_t seed = 1;
    int v1_size = 0;            // 0: default |V1| = |X1|
    int v2_size = 0;
    int sample_cap = 100000;
};

inline InputDistribution random_product_distribution(const Channel& ch, int v1_size, int v2_size,
                                                     Rng& rng) {
    auto dirichlet = [&](int k) {
        std::vector<double> v(k);
        double s = 0.0;
        for (int i = 0; i < k; ++i) {
            double u = rng.unit();
            v[i] = -std::log(u <= 0.0 ? 0x1.0p-53 : u);  // Exp(1)
            s += v[i];
        }
        for (double& x : v) x /= s;
        return v;
    };
    InputDistribution d;
    d.pV1 = dirichlet(v1_size);
    d.pV2 = dirichlet(v2_size);
    d.pX1givenV1.resize(v1_size);
    for (auto& row : d.pX1givenV1) row = dirichlet(ch.x1);
    d.pX2givenV2.resize(v2_size);
    for (auto& row : d.pX2givenV2) row = dirichlet(ch.x2);
    return d;
}

// Sampled inner approximation of the closure-of-union region: vertex clouds of
// per-distribution regions, hulled together with the origin. Monotone in the
// sample budget; reproducible bit-for-bit for a fixed seed.
inline RateRegion search_union(const Channel& ch, SecrecyKind sec, CodingKind cod,
                               const SearchOptions& opt) {
    int v1 = opt.v1_size > 0 ? opt.v1_size : ch.x1;
    int v2 = opt.v2_size > 0 ? opt.v2_size : ch.x2;
    if (opt.samples > opt.sample_cap)
        throw BudgetExceeded("search_union: samples exceed configured cap");
    Rng rng(derive_seed(opt.seed, 0xd15717));
    std::vector<RatePair> cloud{{0, 0}};
    bool clamped = false;

    auto eval = [&](const InputDistribution& d) {
        RateRegion reg = region_from_measures(measure_bundle(ch, d), sec, cod);
        clamped = clamped || reg.clamped;
        for (const auto& v : reg.vertices) cloud.push_back(v);
        return reg;
    };

    // Structured baseline (V = X, uniform inputs) plus random restarts.
    std::vector<InputDistribution> pool;
    if (v1 >= ch.x1 && v2 >= ch.x2) {
        InputDistribution base = uniform_identity_distribution(ch);
        base.pV1.resize(size_t(v1), 0.0);
        base.pX1givenV1.resize(size_t(v1), std::vector<double>(size_t(ch.x1), 1.0 / ch.x1));
        base.pV2.resize(size_t(v2), 0.0);
        base.pX2givenV2.resize(size_t(v2), std::vector<double>(size_t(ch.x2), 1.0 / ch.x2));
        eval(base);
        pool.push_back(std::move(base));
    }
    for (int i = 0; i < opt.samples; ++i) {
        InputDistribution d = random_product_distribution(ch, v1, v2, rng);
        eval(d);
        pool.push_back(std::move(d));
    }

    // Coordinate-ascent refinement of the weighted sum rate, one run per
    // weight direction, starting from the best restart for that weight.
    const double weights[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    auto support = [&](const RateRegion& reg, double w) {
        double best = 0.0;
        for (const auto& v : reg.vertices) best = std::max(best, w * v.R1 + (1.0 - w) * v.R2);
        return best;
    };
    auto perturb_pmf = [&](std::vector<double> v, double sigma) {
        double s = 0.0;
        for (double& x : v) {
            x = std::max(x * std::exp(sigma * rng.gaussian()), 1e-12);
            s += x;
        }
        for (double& x : v) x /= s;
        return v;
    };
    for (double w : weights) {
        if (pool.empty()) break;
        size_t best_i = 0;
        double best_v = -1.0;
        for (size_t i = 0; i < pool.size(); ++i) {
            RateRegion reg = region_from_measures(measure_bundle(ch, pool[i]), sec, cod);
            double v = support(reg, w);
            if (v > best_v) {
                best_v = v;
                best_i = i;
            }
        }
        InputDistribution cur = pool[best_i];
        double cur_v = best_v;
        for (int step = 0; step < opt.refine_steps; ++step) {
            double sigma = 0.5 * std::pow(0.93, step);
            InputDistribution cand = cur;
            cand.pV1 = perturb_pmf(cand.pV1, sigma);
            cand.pV2 = perturb_pmf(cand.pV2, sigma);
            for (auto& row : cand.pX1givenV1) row = perturb_pmf(row, sigma);
            for (auto& row : cand.pX2givenV2) row = perturb_pmf(row, sigma);
            RateRegion reg = eval(cand);
            double v = support(reg, w);
            if (v > cur_v) {
                cur_v = v;
                cur = std::move(cand);
            }
        }
    }

    RateRegion out;
    out.clamped = clamped;
    out.vertices = detail::convex_hull(cloud);
    // Rebuild an H-representation from the hull edges (downward closure in the
    // quadrant: only edges with outward normal in the first quadrant bind).
    std::vector<RatePair> hull = out.vertices;
    for (size_t i = 0; i < hull.size(); ++i) {
        const RatePair& p = hull[i];
        const RatePair& q = hull[(i + 1) % hull.size()];
        double a1 = q.R2 - p.R2, a2 = p.R1 - q.R1;  // outward normal for ccw order
        if (a1 < -1e-12 || a2 < -1e-12) continue;
        double norm = std::max(std::fabs(a1), std::fabs(a2));
        if (norm < 1e-12) continue;
        out.halfspaces.push_back({a1 / norm, a2 / norm, (a1 * p.R1 + a2 * p.R2) / norm});
    }
    if (out.halfspaces.empty()) out.halfspaces = {{1, 0, 0}, {0, 1, 0}};
    return out;
}

}  // namespace twwc
