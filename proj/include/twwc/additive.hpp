#pragma once

// Additive F_q two-way wiretap channels and the correlation-exploiting
// adaptive machinery: closed-form information quantities, the conditionally
// independent secrecy advantage, the induced virtual-protocol MAC, and the
// two-stage conversion demo.

#include <array>
#include <optional>
#include <vector>

#include "twwc/channel.hpp"
#include "twwc/codebook.hpp"
#include "twwc/info_measures.hpp"
#include "twwc/protocol.hpp"

namespace twwc {

struct AdditiveSpec {
    int q = 2;
    int a1 = 1, a2 = 1, a3 = 1;
    int b1 = 1, b2 = 1, b3 = 1;
    std::vector<double> n1_pmf, n2_pmf, n3_pmf;

    void validate() const {
        if (q < 2) throw NonPrimeField("AdditiveSpec: q must be a prime >= 2");
        for (int f = 2; f * f <= q; ++f)
            if (q % f == 0) throw NonPrimeField("AdditiveSpec: q is not prime");
        for (int c : {a1, a2, a3, b1, b2, b3})
            if (c % q == 0) throw ZeroCoefficient("AdditiveSpec: coefficients must be nonzero mod q");
        for (const auto* pm : {&n1_pmf, &n2_pmf, &n3_pmf}) {
            if (int(pm->size()) != q) throw DimensionError("AdditiveSpec: noise pmf length != q");
            double s = 0.0;
            for (double v : *pm) {
                if (v < 0.0) throw StochasticityError("AdditiveSpec: negative noise probability");
                s += v;
            }
            if (std::fabs(s - 1.0) > 1e-12) throw StochasticityError("AdditiveSpec: noise pmf sum");
        }
    }
};

namespace fq {

inline int add(int a, int b, int q) { return (a + b) % q; }
inline int sub(int a, int b, int q) { return ((a - b) % q + q) % q; }
inline int mul(int a, int b, int q) { return int((int64_t(a) * b) % q); }
inline int inv(int a, int q) {  // q prime
    int r = 1, base = ((a % q) + q) % q, e = q - 2;
    while (e > 0) {
        if (e & 1) r = mul(r, base, q);
        base = mul(base, base, q);
        e >>= 1;
    }
    return r;
}

}  // namespace fq

// Y1 = a1 X1 + b1 X2 + N1, Y2 = a2 X1 + b2 X2 + N2, Z = a3 X1 + b3 X2 + N3.
// Product noise makes the result conditionally independent by construction.
inline Channel build_additive(const AdditiveSpec& spec) {
    spec.validate();
    int q = spec.q;
    Channel ch(q, q, q, q, q);
    for (int x1 = 0; x1 < q; ++x1)
        for (int x2 = 0; x2 < q; ++x2) {
            int m1 = fq::add(fq::mul(spec.a1, x1, q), fq::mul(spec.b1, x2, q), q);
            int m2 = fq::add(fq::mul(spec.a2, x1, q), fq::mul(spec.b2, x2, q), q);
            int m3 = fq::add(fq::mul(spec.a3, x1, q), fq::mul(spec.b3, x2, q), q);
            for (int y1 = 0; y1 < q; ++y1)
                for (int y2 = 0; y2 < q; ++y2)
                    for (int z = 0; z < q; ++z)
                        ch.at(x1, x2, y1, y2, z) = spec.n1_pmf[size_t(fq::sub(y1, m1, q))] *
                                                   spec.n2_pmf[size_t(fq::sub(y2, m2, q))] *
                                                   spec.n3_pmf[size_t(fq::sub(z, m3, q))];
        }
    return ch;
}

inline double pmf_entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p) h -= xlogx(v);
    return h;
}

// pmf of N_a - c*N_b over F_q.
inline std::vector<double> noise_difference_pmf(const std::vector<double>& pa,
                                                const std::vector<double>& pb, int c, int q) {
    std::vector<double> out(size_t(q), 0.0);
    for (int na = 0; na < q; ++na)
        for (int nb = 0; nb < q; ++nb)
            out[size_t(fq::sub(na, fq::mul(c, nb, q), q))] += pa[size_t(na)] * pb[size_t(nb)];
    return out;
}

// Every quantity evaluated both by the log q - H(.) closed form and by generic
// information measures on the built channel under uniform independent inputs.
struct ClosedFormEntry {
    const char* name;
    double closed;
    double generic;
};

struct ClosedFormReport {
    std::vector<ClosedFormEntry> entries;
    double adv1_closed = 0, adv1_generic = 0;
    double adv2_closed = 0, adv2_generic = 0;

    double max_abs_gap() const {
        double g = 0.0;
        for (const auto& e : entries) g = std::max(g, std::fabs(e.closed - e.generic));
        g = std::max(g, std::fabs(adv1_closed - adv1_generic));
        g = std::max(g, std::fabs(adv2_closed - adv2_generic));
        return g;
    }
};

inline ClosedFormReport closed_form_report(const AdditiveSpec& spec) {
    spec.validate();
    int q = spec.q;
    double lq = std::log(double(q));
    Channel ch = build_additive(spec);
    JointPmf j = joint_pmf(ch, uniform_identity_distribution(ch));

    auto d1 = noise_difference_pmf(spec.n1_pmf, spec.n3_pmf,
                                   fq::mul(spec.b1, fq::inv(spec.b3, q), q), q);
    auto d2 = noise_difference_pmf(spec.n2_pmf, spec.n3_pmf,
                                   fq::mul(spec.a2, fq::inv(spec.a3, q), q), q);

    ClosedFormReport rep;
    rep.entries = {
        {"I(Y2;X1|X2)", lq - pmf_entropy(spec.n2_pmf),
         conditional_mutual_information(j, {"Y2"}, {"X1"}, {"X2"})},
        {"I(Y1;X2|X1)", lq - pmf_entropy(spec.n1_pmf),
         conditional_mutual_information(j, {"Y1"}, {"X2"}, {"X1"})},
        {"I(Z;X1)", 0.0, mutual_information(j, {"Z"}, {"X1"})},
        {"I(Z;X2)", 0.0, mutual_information(j, {"Z"}, {"X2"})},
        {"I(X1,X2;Z)", lq - pmf_entropy(spec.n3_pmf), mutual_information(j, {"Z"}, {"X1", "X2"})},
        {"I(Y1;Z|X1)", lq - pmf_entropy(d1), conditional_mutual_information(j, {"Y1"}, {"Z"}, {"X1"})},
        {"I(Y2;Z|X2)", lq - pmf_entropy(d2), conditional_mutual_information(j, {"Y2"}, {"Z"}, {"X2"})},
    };
    rep.adv1_closed = pmf_entropy(d1) - pmf_entropy(spec.n1_pmf);
    rep.adv1_generic = rep.entries[1].generic - rep.entries[5].generic;
    rep.adv2_closed = pmf_entropy(d2) - pmf_entropy(spec.n2_pmf);
    rep.adv2_generic = rep.entries[0].generic - rep.entries[6].generic;
    return rep;
}

// adv_i = I(Y_i; X_peer | X_i) - I(Y_i; Z | X_i); positive for every
// conditionally independent channel with a noisy eavesdropper link.
struct AdvantageReport {
    double adv1 = 0.0;
    double adv2 = 0.0;
    bool conditionally_independent = true;
};

inline AdvantageReport secrecy_advantage(const Channel& ch, const std::vector<double>& px1,
                                         const std::vector<double>& px2) {
    InputDistribution d = identity_distribution(ch, px1, px2);
    JointPmf j = joint_pmf(ch, d);
    AdvantageReport rep;
    rep.conditionally_independent = is_conditionally_independent(ch);
    rep.adv1 = conditional_mutual_information(j, {"Y1"}, {"X2"}, {"X1"}) -
               conditional_mutual_information(j, {"Y1"}, {"Z"}, {"X1"});
    rep.adv2 = conditional_mutual_information(j, {"Y2"}, {"X1"}, {"X2"}) -
               conditional_mutual_information(j, {"Y2"}, {"Z"}, {"X2"});
    return rep;
}

// The masked-exchange MAC. Inputs (X1',Y1') and (X2',Y2'); user 1's output is
// (X1,Y1,X2'',Y2''), user 2's is (X2,Y2,X1'',Y1''), the adversary sees
// (Z,X1'',Y1'',X2'',Y2''), with X'' = X + X' and Y'' = Y + Y' (mod alphabet).
// Composite symbol encodings are row-major over the listed components.
inline Channel induced_virtual_mac(const Channel& ch, const std::vector<double>& px1,
                                   const std::vector<double>& px2,
                                   uint64_t budget = 50000000) {
    if (int(px1.size()) != ch.x1 || int(px2.size()) != ch.x2)
        throw AlphabetMismatch("induced_virtual_mac: input pmf sizes");
    int nx1 = ch.x1, nx2 = ch.x2, ny1 = ch.y1, ny2 = ch.y2, nz = ch.z;
    uint64_t size = uint64_t(nx1) * ny1 * nx2 * ny2;  // per input pair
    size *= uint64_t(nx1) * ny1 * nx2 * ny2 * (uint64_t(nz) * nx1 * ny1 * nx2 * ny2);
    if (size > budget) throw BudgetExceeded("induced_virtual_mac: tensor too large");

    Channel mac(nx1 * ny1, nx2 * ny2, nx1 * ny1 * nx2 * ny2, nx2 * ny2 * nx1 * ny1,
                nz * nx1 * ny1 * nx2 * ny2);
    for (int x1p = 0; x1p < nx1; ++x1p)
        for (int y1p = 0; y1p < ny1; ++y1p)
            for (int x2p = 0; x2p < nx2; ++x2p)
                for (int y2p = 0; y2p < ny2; ++y2p)
                    for (int x1 = 0; x1 < nx1; ++x1)
                        for (int x2 = 0; x2 < nx2; ++x2) {
                            double w0 = px1[size_t(x1)] * px2[size_t(x2)];
                            if (w0 == 0.0) continue;
                            for (int y1 = 0; y1 < ny1; ++y1)
                                for (int y2 = 0; y2 < ny2; ++y2)
                                    for (int z = 0; z < nz; ++z) {
                                        double w = w0 * ch.at(x1, x2, y1, y2, z);
                                        if (w == 0.0) continue;
                                        int x1pp = (x1 + x1p) % nx1, y1pp = (y1 + y1p) % ny1;
                                        int x2pp = (x2 + x2p) % nx2, y2pp = (y2 + y2p) % ny2;
                                        int u1 = ((x1 * ny1 + y1) * nx2 + x2pp) * ny2 + y2pp;
                                        int u2 = ((x2 * ny2 + y2) * nx1 + x1pp) * ny1 + y1pp;
                                        int ze = (((z * nx1 + x1pp) * ny1 + y1pp) * nx2 + x2pp) *
                                                     ny2 + y2pp;
                                        mac.at(x1p * ny1 + y1p, x2p * ny2 + y2p, u1, u2, ze) += w;
                                    }
                        }
    return mac;
}

// Joint laws needed for the correlation-advantage identity, built directly so
// larger alphabets stay cheap. V1 is uniform on Y1 with X1' = 0 and Y1' = V1;
// (X2',Y2') is uniform; V2 is a constant.
//   A: (V1, X2p, Y2p, X2, Y2, X1pp, Y1pp)   B: (V1, Z, X1pp, Y1pp, X2pp, Y2pp)
struct Theorem2Joints {
    JointPmf a, b;
};

inline Theorem2Joints theorem2_joints(const Channel& ch, const std::vector<double>& px1,
                                      const std::vector<double>& px2) {
    if (int(px1.size()) != ch.x1 || int(px2.size()) != ch.x2)
        throw AlphabetMismatch("theorem2_joints: input pmf sizes");
    int nx1 = ch.x1, nx2 = ch.x2, ny1 = ch.y1, ny2 = ch.y2, nz = ch.z;
    Theorem2Joints out{
        JointPmf({"V1", "X2p", "Y2p", "X2", "Y2", "X1pp", "Y1pp"},
                 {ny1, nx2, ny2, nx2, ny2, nx1, ny1}),
        JointPmf({"V1", "Z", "X1pp", "Y1pp", "X2pp", "Y2pp"}, {ny1, nz, nx1, ny1, nx2, ny2})};
    double wv = 1.0 / (double(ny1) * nx2 * ny2);  // V1 and (X2',Y2') uniform
    for (int v1 = 0; v1 < ny1; ++v1)
        for (int x2p = 0; x2p < nx2; ++x2p)
            for (int y2p = 0; y2p < ny2; ++y2p)
                for (int x1 = 0; x1 < nx1; ++x1)
                    for (int x2 = 0; x2 < nx2; ++x2) {
                        double w0 = wv * px1[size_t(x1)] * px2[size_t(x2)];
                        if (w0 == 0.0) continue;
                        for (int y1 = 0; y1 < ny1; ++y1)
                            for (int y2 = 0; y2 < ny2; ++y2)
                                for (int z = 0; z < nz; ++z) {
                                    double w = w0 * ch.at(x1, x2, y1, y2, z);
                                    if (w == 0.0) continue;
                                    int x1pp = x1;  // X1' = 0
                                    int y1pp = (y1 + v1) % ny1;
                                    int x2pp = (x2 + x2p) % nx2;
                                    int y2pp = (y2 + y2p) % ny2;
                                    std::array<int, 7> ia{v1, x2p, y2p, x2, y2, x1pp, y1pp};
                                    out.a.tensor().at(ia) += w;
                                    std::array<int, 6> ib{v1, z, x1pp, y1pp, x2pp, y2pp};
                                    out.b.tensor().at(ib) += w;
                                }
                    }
    return out;
}

// Left-hand side of the advantage identity, evaluated on the virtual MAC:
// I(V1; user-2 output | X2',Y2') - I(V1,V2; adversary output), with V2 trivial.
inline double virtual_mac_difference(const Channel& ch, const std::vector<double>& px1,
                                     const std::vector<double>& px2) {
    Theorem2Joints j = theorem2_joints(ch, px1, px2);
    double lhs = conditional_mutual_information(j.a, {"V1"}, {"X2", "Y2", "X1pp", "Y1pp"},
                                                {"X2p", "Y2p"});
    double rhs = mutual_information(j.b, {"V1"}, {"Z", "X1pp", "Y1pp", "X2pp", "Y2pp"});
    return lhs - rhs;
}

// ---- Two-stage conversion demo ----------------------------------------------

enum class ConveyanceMode { IdealPublic, Repetition };

struct TwoStageReport {
    uint64_t trials = 0;
    double end_to_end_error = 0.0;
    double ci95_halfwidth = 1.0;
    double stage1_error = 0.0;            // decode error with ideal conveyance
    double conveyance_symbol_error = 0.0; // per-symbol residual of Phi2
    int n1 = 0;
    int n2 = 0;  // channel uses spent conveying the masked values
    double overhead = 0.0;  // n2 / n1
    uint64_t seed = 0;
};

// One-directional demo (user 1 -> user 2) of the virtual protocol over n1
// real channel uses followed by conveyance of the masked pairs (X1'',Y1'').
// Phi2 is either the ideal public channel or a k-fold repetition code over
// the real channel with the peer pinned to symbol 0.
inline TwoStageReport simulate_two_stage(const Channel& ch, const std::vector<double>& px1,
                                         const std::vector<double>& px2, int n1, int messages,
                                         ConveyanceMode mode, int rep_k, uint64_t trials,
                                         uint64_t seed) {
    if (int(px1.size()) != ch.x1 || int(px2.size()) != ch.x2)
        throw AlphabetMismatch("simulate_two_stage: input pmf sizes");
    if (mode == ConveyanceMode::Repetition && (ch.y1 > ch.x1))
        throw AlphabetMismatch("simulate_two_stage: repetition conveyance needs |Y1| <= |X1|");
    if (n1 < 1 || messages < 1 || rep_k < 1) throw Error("simulate_two_stage: bad parameters");

    Rng coderng(derive_seed(seed, 0x2057a6e));
    std::vector<std::vector<int>> code(static_cast<size_t>(messages),
                                       std::vector<int>(static_cast<size_t>(n1)));
    for (auto& w : code)
        for (int t = 0; t < n1; ++t) w[size_t(t)] = int(coderng.below(uint64_t(ch.y1)));

    // P(y1,y2 | x1,x2) and x2=0 repetition tables.
    auto py1y2 = [&](int a, int b, int c, int dd) {
        double s = 0.0;
        for (int e = 0; e < ch.z; ++e) s += ch.at(a, b, c, dd, e);
        return s;
    };

    Rng rng(derive_seed(seed, 0x2057a6f));
    uint64_t e2e_errors = 0, stage1_errors = 0, conv_symbol_errors = 0, conv_symbols = 0;
    const size_t nn = static_cast<size_t>(n1);
    std::vector<int> x1(nn), x2(nn), y1(nn), y2(nn);
    std::vector<int> x1pp(nn), y1pp(nn), rx1(nn), ry1(nn);
    detail::SimTables tab(ch, uniform_identity_distribution(ch));

    auto convey_symbol = [&](int value) {  // user 1 repeats value, user 2 pinned to 0
        if (mode == ConveyanceMode::IdealPublic) return value;
        std::vector<double> ll(size_t(ch.x1), 0.0);
        for (int k = 0; k < rep_k; ++k) {
            int yy1, yy2, zz;
            tab.sample_outputs(value, 0, rng, yy1, yy2, zz);
            for (int cand = 0; cand < ch.x1; ++cand) {
                double pr = ch.py2(cand, 0, yy2);
                ll[size_t(cand)] += pr > 0 ? std::log(pr) : -1e30;
            }
        }
        int best = 0;
        for (int cand = 1; cand < ch.x1; ++cand)
            if (ll[size_t(cand)] > ll[size_t(best)]) best = cand;
        ++conv_symbols;
        if (best != value) ++conv_symbol_errors;
        return best;
    };

    for (uint64_t it = 0; it < trials; ++it) {
        int m = int(rng.below(uint64_t(messages)));
        for (int t = 0; t < n1; ++t) {
            x1[size_t(t)] = rng.sample_pmf(px1);
            x2[size_t(t)] = rng.sample_pmf(px2);
            int zz;
            tab.sample_outputs(x1[size_t(t)], x2[size_t(t)], rng, y1[size_t(t)], y2[size_t(t)], zz);
            x1pp[size_t(t)] = x1[size_t(t)];  // X1' = 0
            y1pp[size_t(t)] = (y1[size_t(t)] + code[size_t(m)][size_t(t)]) % ch.y1;
        }
        auto decode = [&](const std::vector<int>& gx, const std::vector<int>& gy) {
            int best = 0;
            double best_ll = -std::numeric_limits<double>::infinity();
            for (int cand = 0; cand < messages; ++cand) {
                double ll = 0.0;
                for (int t = 0; t < n1; ++t) {
                    int y1_hat = ((gy[size_t(t)] - code[size_t(cand)][size_t(t)]) % ch.y1 + ch.y1) % ch.y1;
                    double pr = py1y2(gx[size_t(t)], x2[size_t(t)], y1_hat, y2[size_t(t)]);
                    ll += pr > 0 ? std::log(pr) : -1e30;
                }
                if (ll > best_ll) {
                    best_ll = ll;
                    best = cand;
                }
            }
            return best;
        };
        // Stage-1-only decode (ideal conveyance) for composition checks.
        if (decode(x1pp, y1pp) != m) ++stage1_errors;
        for (int t = 0; t < n1; ++t) {
            rx1[size_t(t)] = convey_symbol(x1pp[size_t(t)]);
            ry1[size_t(t)] = convey_symbol(y1pp[size_t(t)]);
        }
        if (decode(rx1, ry1) != m) ++e2e_errors;
    }

    TwoStageReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.n1 = n1;
    rep.n2 = mode == ConveyanceMode::IdealPublic ? 0 : 2 * n1 * rep_k;
    rep.overhead = double(rep.n2) / double(n1);
    rep.end_to_end_error = trials ? double(e2e_errors) / double(trials) : 0.0;
    rep.ci95_halfwidth = wilson_halfwidth(e2e_errors, trials);
    rep.stage1_error = trials ? double(stage1_errors) / double(trials) : 0.0;
    rep.conveyance_symbol_error =
        conv_symbols ? double(conv_symbol_errors) / double(conv_symbols) : 0.0;
    return rep;
}

}  // namespace twwc
