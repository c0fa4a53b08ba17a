#pragma once

#include <functional>
#include <string>
#include <vector>

#include "twwc/channel.hpp"
#include "twwc/info_measures.hpp"

namespace twwc {

struct NonAdaptiveRates {
    double R1 = 0.0, R2 = 0.0, R1r = 0.0, R2r = 0.0;  // nats per channel use
    void validate() const {
        if (R1 < 0 || R2 < 0 || R1r < 0 || R2r < 0)
            throw Error("NonAdaptiveRates: rates must be nonnegative");
    }
};

// Adaptive-code rate split: secret / key / encrypted / open parts per user.
// One-time-pad feasibility requires R1e <= R2k and R2e <= R1k.
struct RateSplit {
    double R1s = 0, R1k = 0, R1e = 0, R1o = 0;
    double R2s = 0, R2k = 0, R2e = 0, R2o = 0;

    void validate(double tol = 1e-12) const {
        for (double v : {R1s, R1k, R1e, R1o, R2s, R2k, R2e, R2o})
            if (v < 0) throw SplitInfeasible("RateSplit: negative component");
        if (R1e > R2k + tol || R2e > R1k + tol)
            throw SplitInfeasible("RateSplit: one-time-pad constraint R_ie <= R_{i+1,k} violated");
    }
    double R1() const { return R1s + R1e; }
    double R2() const { return R2s + R2e; }
    double Rt1() const { return R1s + R1k; }    // composite secret rate
    double Rt2() const { return R2s + R2k; }
    double Rt1r() const { return R1o + R1e; }   // composite randomization rate
    double Rt2r() const { return R2o + R2e; }
};

// Per-term exponent diagnostics: bound term = constant * exp(n * rate).
struct BoundTerm {
    std::string label;
    double rate;  // per-use exponent, already including the factor s
};

struct BoundReport {
    int n = 0;
    int t = 1;
    double s_used = 0.0;
    // Factor-2 code family (paired with the joint-secrecy statement).
    double error_bound = 0.0;
    double joint_leak_bound = 0.0;
    // Factor-3 code family (paired with the individual-secrecy statement).
    double error_bound_ind = 0.0;
    double ind_leak_bound_1 = 0.0;
    double ind_leak_bound_2 = 0.0;
    std::vector<BoundTerm> terms;
};

// The five single-letter quantities entering the bounds, all on the auxiliary
// joint induced by (ch, d).
struct SingleLetterRenyi {
    double i_down_y2_v1_x2;  // I^down_{1/(1+s)}(Y2; V1 | X2)
    double i_down_y1_v2_x1;  // I^down_{1/(1+s)}(Y1; V2 | X1)
    double i_up_z_v1;        // I^up_{1+s}(Z; V1)
    double i_up_z_v2;        // I^up_{1+s}(Z; V2)
    double i_up_z_v1v2;      // I^up_{1+s}(Z; V1,V2)
};

inline SingleLetterRenyi single_letter_renyi(const JointPmf& joint, RenyiOrderOffset s) {
    SingleLetterRenyi q{};
    q.i_down_y2_v1_x2 = cond_renyi_mi_down(joint, {"Y2"}, {"V1"}, {"X2"}, s);
    q.i_down_y1_v2_x1 = cond_renyi_mi_down(joint, {"Y1"}, {"V2"}, {"X1"}, s);
    q.i_up_z_v1 = renyi_mi_up(joint, {"Z"}, {"V1"}, s);
    q.i_up_z_v2 = renyi_mi_up(joint, {"Z"}, {"V2"}, s);
    q.i_up_z_v1v2 = renyi_mi_up(joint, {"Z"}, {"V1", "V2"}, s);
    return q;
}

// Finite-n bounds for the non-adaptive code. Error and joint-leakage carry the
// constant 2; the individual-secrecy family carries 3. Bounds are absolute
// numbers; per-term rates are kept for plotting.
inline BoundReport nonadaptive_bounds(const Channel& ch, const InputDistribution& d,
                                      const NonAdaptiveRates& r, int n, RenyiOrderOffset s) {
    if (n < 1) throw Error("nonadaptive_bounds: n must be >= 1");
    r.validate();
    JointPmf joint = joint_pmf(ch, d);
    SingleLetterRenyi q = single_letter_renyi(joint, s);

    BoundReport rep;
    rep.n = n;
    rep.t = 1;
    rep.s_used = s.s;

    double e1 = s.s * (r.R1 + r.R1r - q.i_down_y2_v1_x2);
    double e2 = s.s * (r.R2 + r.R2r - q.i_down_y1_v2_x1);
    rep.error_bound = 2.0 * (std::exp(n * e1) + std::exp(n * e2));
    rep.error_bound_ind = 3.0 * (std::exp(n * e1) + std::exp(n * e2));
    rep.terms.push_back({"err_user1", e1});
    rep.terms.push_back({"err_user2", e2});

    double l1 = s.s * (q.i_up_z_v1 - r.R1r);
    double l2 = s.s * (q.i_up_z_v2 - r.R2r);
    double l12 = s.s * (q.i_up_z_v1v2 - r.R1r - r.R2r);
    rep.joint_leak_bound = 2.0 * (std::exp(n * l1) + std::exp(n * l2) + std::exp(n * l12));
    rep.terms.push_back({"leak_S1", l1});
    rep.terms.push_back({"leak_S2", l2});
    rep.terms.push_back({"leak_S12", l12});

    double a1 = s.s * (q.i_up_z_v1v2 - (r.R1r + r.R2r + r.R2));
    double a2 = s.s * (q.i_up_z_v1 - r.R1r);
    double a3 = s.s * (q.i_up_z_v2 - (r.R2r + r.R2));
    rep.ind_leak_bound_1 = 3.0 * (std::exp(n * a1) + std::exp(n * a2) + std::exp(n * a3));
    double b1 = s.s * (q.i_up_z_v1v2 - (r.R1r + r.R2r + r.R1));
    double b2 = s.s * (q.i_up_z_v2 - r.R2r);
    double b3 = s.s * (q.i_up_z_v1 - (r.R1r + r.R1));
    rep.ind_leak_bound_2 = 3.0 * (std::exp(n * b1) + std::exp(n * b2) + std::exp(n * b3));
    return rep;
}

// t-round adaptive bounds: the non-adaptive bounds with the composite rates
// substituted and a linear factor t; the individual-leakage groupings add the
// peer's secret rate R_{i+1,s} per round.
inline BoundReport adaptive_bounds(const Channel& ch, const InputDistribution& d,
                                   const RateSplit& split, int n, int t, RenyiOrderOffset s) {
    if (n < 1 || t < 1) throw Error("adaptive_bounds: n and t must be >= 1");
    split.validate();
    JointPmf joint = joint_pmf(ch, d);
    SingleLetterRenyi q = single_letter_renyi(joint, s);

    BoundReport rep;
    rep.n = n;
    rep.t = t;
    rep.s_used = s.s;

    double e1 = s.s * (split.Rt1() + split.Rt1r() - q.i_down_y2_v1_x2);
    double e2 = s.s * (split.Rt2() + split.Rt2r() - q.i_down_y1_v2_x1);
    rep.error_bound = 2.0 * t * (std::exp(n * e1) + std::exp(n * e2));
    rep.error_bound_ind = 3.0 * t * (std::exp(n * e1) + std::exp(n * e2));
    rep.terms.push_back({"err_user1", e1});
    rep.terms.push_back({"err_user2", e2});

    double l1 = s.s * (q.i_up_z_v1 - split.Rt1r());
    double l2 = s.s * (q.i_up_z_v2 - split.Rt2r());
    double l12 = s.s * (q.i_up_z_v1v2 - split.Rt1r() - split.Rt2r());
    rep.joint_leak_bound = 2.0 * t * (std::exp(n * l1) + std::exp(n * l2) + std::exp(n * l12));
    rep.terms.push_back({"leak_S1", l1});
    rep.terms.push_back({"leak_S2", l2});
    rep.terms.push_back({"leak_S12", l12});

    double a1 = s.s * (q.i_up_z_v1v2 - (split.Rt1r() + split.Rt2r() + split.R2s));
    double a2 = s.s * (q.i_up_z_v1 - split.Rt1r());
    double a3 = s.s * (q.i_up_z_v2 - (split.Rt2r() + split.R2s));
    rep.ind_leak_bound_1 = 3.0 * t * (std::exp(n * a1) + std::exp(n * a2) + std::exp(n * a3));
    double b1 = s.s * (q.i_up_z_v1v2 - (split.Rt1r() + split.Rt2r() + split.R1s));
    double b2 = s.s * (q.i_up_z_v2 - split.Rt2r());
    double b3 = s.s * (q.i_up_z_v1 - (split.Rt1r() + split.R1s));
    rep.ind_leak_bound_2 = 3.0 * t * (std::exp(n * b1) + std::exp(n * b2) + std::exp(n * b3));
    return rep;
}

// Default order grid: 0.01..0.99 step 0.01, plus the endpoint 1.0.
inline std::vector<double> default_s_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 99; ++i) g.push_back(i * 0.01);
    g.push_back(1.0);
    return g;
}

// Grid minimizer of an arbitrary bound; ties break toward the smaller s.
inline std::pair<double, double> optimize_order(const std::function<double(double)>& bound_fn,
                                                const std::vector<double>& grid) {
    if (grid.empty()) throw EmptyGrid("optimize_order: empty grid");
    double best_s = grid.front();
    double best_v = bound_fn(grid.front());
    for (size_t i = 1; i < grid.size(); ++i) {
        double v = bound_fn(grid[i]);
        if (v < best_v) {
            best_v = v;
            best_s = grid[i];
        }
    }
    return {best_s, best_v};
}

}  // namespace twwc
