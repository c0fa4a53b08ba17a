#pragma once

// Desk-scale execution of the non-adaptive code and the t-round key-exchange
// code: Monte Carlo decoding error and exact leakage by enumeration.

#include <array>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "twwc/codebook.hpp"
#include "twwc/exponents.hpp"

namespace twwc {

struct SimulationReport {
    uint64_t trials = 0;
    double error_estimate = 0.0;
    double ci95_halfwidth = 1.0;
    std::optional<double> exact_leakage_nats;
    std::optional<BoundReport> bound_comparison;
    uint64_t seed = 0;
    double effective_rate_1 = 0.0;  // nats/use, t-round accounting for adaptive runs
    double effective_rate_2 = 0.0;
};

namespace detail {

// Decoding likelihood tables. The receiver knows its own input sequence and
// marginalizes over the peer's prefix randomness:
//   W1[v2][x1][y1] = sum_x2 P(x2|v2) P(y1|x1,x2)   (user 1 decoding user 2)
//   W2[v1][x2][y2] = sum_x1 P(x1|v1) P(y2|x1,x2)
struct SimTables {
    int nx1, nx2, ny1, ny2, nz;
    NdArray w1, w2;        // log-likelihood factors
    NdArray out_cdf;       // flattened (y1,y2,z) sampling cdf per (x1,x2)
    NdArray pz;            // P(z|v1,v2)

    SimTables(const Channel& ch, const InputDistribution& d)
        : nx1(ch.x1), nx2(ch.x2), ny1(ch.y1), ny2(ch.y2), nz(ch.z),
          w1({d.v2(), ch.x1, ch.y1}), w2({d.v1(), ch.x2, ch.y2}),
          out_cdf({ch.x1, ch.x2, ch.y1 * ch.y2 * ch.z}), pz(z_given_v(ch, d)) {
        for (int v2 = 0; v2 < d.v2(); ++v2)
            for (int a = 0; a < ch.x1; ++a)
                for (int c = 0; c < ch.y1; ++c) {
                    double acc = 0.0;
                    for (int b = 0; b < ch.x2; ++b) acc += d.pX2givenV2[v2][b] * ch.py1(a, b, c);
                    std::array<int, 3> idx{v2, a, c};
                    w1.at(idx) = acc > 0.0 ? std::log(acc)
                                           : -std::numeric_limits<double>::infinity();
                }
        for (int v1 = 0; v1 < d.v1(); ++v1)
            for (int b = 0; b < ch.x2; ++b)
                for (int dd = 0; dd < ch.y2; ++dd) {
                    double acc = 0.0;
                    for (int a = 0; a < ch.x1; ++a) acc += d.pX1givenV1[v1][a] * ch.py2(a, b, dd);
                    std::array<int, 3> idx{v1, b, dd};
                    w2.at(idx) = acc > 0.0 ? std::log(acc)
                                           : -std::numeric_limits<double>::infinity();
                }
        for (int a = 0; a < ch.x1; ++a)
            for (int b = 0; b < ch.x2; ++b) {
                double acc = 0.0;
                for (int c = 0; c < ch.y1; ++c)
                    for (int dd = 0; dd < ch.y2; ++dd)
                        for (int e = 0; e < ch.z; ++e) {
                            acc += ch.at(a, b, c, dd, e);
                            std::array<int, 3> idx{a, b, (c * ch.y2 + dd) * ch.z + e};
                            out_cdf.at(idx) = acc;
                        }
            }
    }

    double logw1(int v2, int x1, int y1) const {
        std::array<int, 3> idx{v2, x1, y1};
        return w1.at(idx);
    }
    double logw2(int v1, int x2, int y2) const {
        std::array<int, 3> idx{v1, x2, y2};
        return w2.at(idx);
    }
    double pz_at(int v1, int v2, int e) const {
        std::array<int, 3> idx{v1, v2, e};
        return pz.at(idx);
    }

    void sample_outputs(int x1, int x2, Rng& rng, int& y1, int& y2, int& z) const {
        double u = rng.unit();
        int flat = ny1 * ny2 * nz - 1;
        for (int k = 0; k < ny1 * ny2 * nz; ++k) {
            std::array<int, 3> idx{x1, x2, k};
            if (u < out_cdf.at(idx)) {
                flat = k;
                break;
            }
        }
        z = flat % nz;
        y2 = (flat / nz) % ny2;
        y1 = flat / (nz * ny2);
    }
};

// ML over all candidate codewords; ties break to the smallest index.
template <class LogW>
inline int ml_decode(const std::vector<std::vector<int>>& words, const std::vector<int>& x_self,
                     const std::vector<int>& y_self, LogW&& logw) {
    int best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < int(words.size()); ++j) {
        double ll = 0.0;
        const auto& w = words[size_t(j)];
        for (size_t t = 0; t < w.size(); ++t) ll += logw(w[t], x_self[t], y_self[t]);
        if (ll > best_ll) {
            best_ll = ll;
            best = j;
        }
    }
    return best;
}

}  // namespace detail

// One codebook use: sample indices, transmit, ML-decode both directions.
// Error event: either user misses the peer's full (m,l) index pair.
inline SimulationReport simulate_nonadaptive(const Channel& ch, const InputDistribution& d,
                                             const Codebook& cb, uint64_t trials, uint64_t seed,
                                             int workers = 1) {
    detail::SimTables tab(ch, d);
    const CodeParams& p = cb.params;
    auto run_block = [&](uint64_t count, uint64_t stream) {
        Rng rng(derive_seed(seed, stream));
        uint64_t errors = 0;
        std::vector<int> x1(p.n), x2(p.n), y1(p.n), y2(p.n);
        for (uint64_t it = 0; it < count; ++it) {
            int j1 = int(rng.below(uint64_t(p.M1) * p.L1));
            int j2 = int(rng.below(uint64_t(p.M2) * p.L2));
            const auto& v1 = cb.words1[size_t(j1)];
            const auto& v2 = cb.words2[size_t(j2)];
            for (int t = 0; t < p.n; ++t) {
                x1[t] = rng.sample_pmf(d.pX1givenV1[size_t(v1[size_t(t)])]);
                x2[t] = rng.sample_pmf(d.pX2givenV2[size_t(v2[size_t(t)])]);
                int zz;
                tab.sample_outputs(x1[t], x2[t], rng, y1[t], y2[t], zz);
            }
            int hat2 = detail::ml_decode(cb.words2, x1, y1,
                                         [&](int v, int a, int c) { return tab.logw1(v, a, c); });
            int hat1 = detail::ml_decode(cb.words1, x2, y2,
                                         [&](int v, int b, int dd) { return tab.logw2(v, b, dd); });
            if (hat1 != j1 || hat2 != j2) ++errors;
        }
        return errors;
    };

    uint64_t errors = 0;
    if (workers <= 1) {
        errors = run_block(trials, 0);
    } else {
        std::vector<uint64_t> parts(size_t(workers), trials / uint64_t(workers));
        parts[0] += trials % uint64_t(workers);
        std::vector<uint64_t> results(size_t(workers), 0);
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] { results[size_t(w)] = run_block(parts[size_t(w)], uint64_t(w)); });
        for (auto& th : pool) th.join();
        for (uint64_t e : results) errors += e;
    }

    SimulationReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.error_estimate = trials ? double(errors) / double(trials) : 0.0;
    rep.ci95_halfwidth = wilson_halfwidth(errors, trials);
    return rep;
}

// Secret-part selector for exact leakage: any subset of the four index
// components (m1, l1, m2, l2).
struct SecretParts {
    bool m1 = false, l1 = false, m2 = false, l2 = false;
    static SecretParts both_messages() { return {true, false, true, false}; }
    static SecretParts message1() { return {true, false, false, false}; }
    static SecretParts message2() { return {false, false, true, false}; }
};

// Exact I(secret; Z^n | codebook) in nats: enumerate all index tuples and all
// z-sequences, marginalizing the non-secret components uniformly.
inline double exact_leakage(const Channel& ch, const InputDistribution& d, const Codebook& cb,
                            SecretParts secret, uint64_t budget = 10000000) {
    const CodeParams& p = cb.params;
    NdArray pz = z_given_v(ch, d);
    uint64_t nzn = 1;
    for (int t = 0; t < p.n; ++t) {
        nzn *= uint64_t(ch.z);
        if (nzn > budget) throw BudgetExceeded("exact_leakage: |Z|^n too large");
    }
    uint64_t tuples = uint64_t(p.M1) * p.L1 * p.M2 * p.L2;
    if (nzn * tuples > budget)
        throw BudgetExceeded("exact_leakage: enumeration exceeds budget");

    uint64_t ns = 1;
    if (secret.m1) ns *= uint64_t(p.M1);
    if (secret.l1) ns *= uint64_t(p.L1);
    if (secret.m2) ns *= uint64_t(p.M2);
    if (secret.l2) ns *= uint64_t(p.L2);
    if (ns == 1) return 0.0;

    std::vector<double> cond(size_t(ns) * nzn, 0.0);  // P(z^n | s), uniform weights folded later
    std::vector<int> zs(size_t(p.n), 0);
    for (int m1 = 0; m1 < p.M1; ++m1)
        for (int l1 = 0; l1 < p.L1; ++l1)
            for (int m2 = 0; m2 < p.M2; ++m2)
                for (int l2 = 0; l2 < p.L2; ++l2) {
                    const auto& v1 = cb.words1[size_t(m1) * p.L1 + l1];
                    const auto& v2 = cb.words2[size_t(m2) * p.L2 + l2];
                    uint64_t s = 0;
                    if (secret.m1) s = s * uint64_t(p.M1) + uint64_t(m1);
                    if (secret.l1) s = s * uint64_t(p.L1) + uint64_t(l1);
                    if (secret.m2) s = s * uint64_t(p.M2) + uint64_t(m2);
                    if (secret.l2) s = s * uint64_t(p.L2) + uint64_t(l2);
                    std::fill(zs.begin(), zs.end(), 0);
                    for (uint64_t zi = 0; zi < nzn; ++zi) {
                        double prob = 1.0;
                        for (int t = 0; t < p.n; ++t) {
                            std::array<int, 3> idx{v1[size_t(t)], v2[size_t(t)], zs[size_t(t)]};
                            prob *= pz.at(idx);
                        }
                        cond[size_t(s) * nzn + zi] += prob;
                        for (int t = p.n - 1; t >= 0; --t) {
                            if (++zs[size_t(t)] < ch.z) break;
                            zs[size_t(t)] = 0;
                        }
                    }
                }
    // Normalize per class: each class collects tuples/ns tuples.
    double per_class = double(tuples) / double(ns);
    for (double& v : cond) v /= per_class;

    // I = sum_s sum_z P(s) P(z|s) log( P(z|s) / P(z) ), secret uniform.
    std::vector<double> pzn(nzn, 0.0);
    for (uint64_t s = 0; s < ns; ++s)
        for (uint64_t zi = 0; zi < nzn; ++zi) pzn[zi] += cond[size_t(s) * nzn + zi] / double(ns);
    double mi = 0.0;
    for (uint64_t s = 0; s < ns; ++s)
        for (uint64_t zi = 0; zi < nzn; ++zi) {
            double pzs = cond[size_t(s) * nzn + zi];
            if (pzs > 0.0 && pzn[zi] > 0.0) mi += (pzs / double(ns)) * std::log(pzs / pzn[zi]);
        }
    return mi;
}

// ---- Adaptive (key-exchange) sessions --------------------------------------

// Integer message-space sizes per round: secret, key, encrypted, open parts.
// The codebook must satisfy M_i = Ms_i*Mk_i and L_i = Me_i*Mo_i. One-time-pad
// compatibility requires Me_i <= Mk_{i+1}.
struct AdaptiveSession {
    int t = 2;
    int Ms1 = 1, Mk1 = 1, Me1 = 1, Mo1 = 1;
    int Ms2 = 1, Mk2 = 1, Me2 = 1, Mo2 = 1;

    void validate(const CodeParams& p) const {
        if (t < 1) throw Error("AdaptiveSession: t must be >= 1");
        for (int v : {Ms1, Mk1, Me1, Mo1, Ms2, Mk2, Me2, Mo2})
            if (v < 1) throw SplitInfeasible("AdaptiveSession: sizes must be >= 1");
        if (Me1 > Mk2 || Me2 > Mk1)
            throw SplitInfeasible("AdaptiveSession: one-time-pad needs Me_i <= Mk_{i+1}");
        if (p.M1 != Ms1 * Mk1 || p.L1 != Me1 * Mo1 || p.M2 != Ms2 * Mk2 || p.L2 != Me2 * Mo2)
            throw SplitInfeasible("AdaptiveSession: codebook sizes do not match the split");
    }
    // Per-user rate accounting: (R_is + (t-1) R_i) / t with R_i = R_is + R_ie.
    double effective_rate(int user, int n) const {
        double Rs = std::log(double(user == 0 ? Ms1 : Ms2)) / n;
        double Re = std::log(double(user == 0 ? Me1 : Me2)) / n;
        return (Rs + (t - 1) * (Rs + Re)) / t;
    }
};

// Runs the real protocol: round-1 main message fixed to (0,0); fresh key and
// open parts each round; the encrypted slot is one-time-padded with the key
// the *encoder decoded* in the previous round while the receiver decrypts
// with its own generated key. A session errs if any round misses a composite
// index or a decrypted message part.
inline SimulationReport run_adaptive_session(const Channel& ch, const InputDistribution& d,
                                             const Codebook& cb, const AdaptiveSession& sess,
                                             uint64_t trials, uint64_t seed) {
    sess.validate(cb.params);
    detail::SimTables tab(ch, d);
    const CodeParams& p = cb.params;
    Rng rng(derive_seed(seed, 0xada571f3));
    uint64_t errors = 0;

    const int Ms[2] = {sess.Ms1, sess.Ms2}, Mk[2] = {sess.Mk1, sess.Mk2};
    const int Me[2] = {sess.Me1, sess.Me2}, Mo[2] = {sess.Mo1, sess.Mo2};
    const int L[2] = {p.L1, p.L2};

    std::vector<int> x[2], y[2];
    for (int u = 0; u < 2; ++u) {
        x[u].resize(size_t(p.n));
        y[u].resize(size_t(p.n));
    }

    for (uint64_t it = 0; it < trials; ++it) {
        bool err = false;
        int own_key_prev[2] = {0, 0};   // true key generated last round
        int est_peer_key[2] = {0, 0};   // decoded estimate of the peer's key
        for (int r = 0; r < sess.t; ++r) {
            int ms[2], me[2], mk[2], mo[2], j[2];
            for (int u = 0; u < 2; ++u) {
                ms[u] = r == 0 ? 0 : int(rng.below(uint64_t(Ms[u])));
                me[u] = r == 0 ? 0 : int(rng.below(uint64_t(Me[u])));
                mk[u] = int(rng.below(uint64_t(Mk[u])));
                mo[u] = int(rng.below(uint64_t(Mo[u])));
                int enc = r == 0 ? 0 : (me[u] + est_peer_key[u]) % Me[u];
                int mt = ms[u] * Mk[u] + mk[u];
                int lt = enc * Mo[u] + mo[u];
                j[u] = mt * L[u] + lt;
            }
            for (int tt = 0; tt < p.n; ++tt) {
                int v1s = cb.words1[size_t(j[0])][size_t(tt)];
                int v2s = cb.words2[size_t(j[1])][size_t(tt)];
                x[0][size_t(tt)] = rng.sample_pmf(d.pX1givenV1[size_t(v1s)]);
                x[1][size_t(tt)] = rng.sample_pmf(d.pX2givenV2[size_t(v2s)]);
                int zz;
                tab.sample_outputs(x[0][size_t(tt)], x[1][size_t(tt)], rng, y[0][size_t(tt)],
                                   y[1][size_t(tt)], zz);
            }
            // User 1 decodes user 2 and vice versa.
            int hat_at1 = detail::ml_decode(cb.words2, x[0], y[0],
                                            [&](int v, int a, int c) { return tab.logw1(v, a, c); });
            int hat_at2 = detail::ml_decode(cb.words1, x[1], y[1],
                                            [&](int v, int b, int dd) { return tab.logw2(v, b, dd); });
            int hat[2] = {hat_at2, hat_at1};  // hat[u] = decoded index of user u's word
            for (int u = 0; u < 2; ++u) {
                if (hat[u] != j[u]) err = true;
                int lt = hat[u] % L[u];
                int mt = hat[u] / L[u];
                int mk_hat = mt % Mk[u];
                int enc_hat = lt / Mo[u];
                if (r >= 1) {
                    int peer = 1 - u;
                    int me_hat = (enc_hat - own_key_prev[peer] % Me[u] + Me[u]) % Me[u];
                    if (me_hat != me[u]) err = true;
                }
                est_peer_key[1 - u] = mk_hat;  // receiver's estimate of user u's key
            }
            own_key_prev[0] = mk[0];
            own_key_prev[1] = mk[1];
        }
        if (err) ++errors;
    }

    SimulationReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.error_estimate = trials ? double(errors) / double(trials) : 0.0;
    rep.ci95_halfwidth = wilson_halfwidth(errors, trials);
    rep.effective_rate_1 = sess.effective_rate(0, p.n);
    rep.effective_rate_2 = sess.effective_rate(1, p.n);
    return rep;
}

struct AdaptiveLeakageReport {
    double joint_exact = 0.0;  // I(M1,M2; Z-transcript)
    double ind1_exact = 0.0;   // I(M1; Z-transcript)
    double ind2_exact = 0.0;
    double round1_term = 0.0;  // I(composite secrets of round r; Z^n[r])
    double round2_term = 0.0;
    double per_round_sum = 0.0;
};

// Exact two-round leakage under the analyzed transcript law: the round-2
// encryption key equals the peer's round-1 key part (decoding errors affect
// reliability, not the eavesdropper's distribution). Messages are the
// round-2 pairs (m_s, m_e); round 1 carries the fixed message (0,0).
inline AdaptiveLeakageReport adaptive_exact_leakage(const Channel& ch, const InputDistribution& d,
                                                    const Codebook& cb, const AdaptiveSession& sess,
                                                    uint64_t budget = 10000000) {
    sess.validate(cb.params);
    if (sess.t != 2) throw Error("adaptive_exact_leakage: exact enumeration requires t = 2");
    const CodeParams& p = cb.params;
    NdArray pz = z_given_v(ch, d);
    uint64_t nzn = 1;
    for (int t = 0; t < p.n; ++t) nzn *= uint64_t(ch.z);

    const uint64_t nm = uint64_t(sess.Ms1) * sess.Me1 * sess.Ms2 * sess.Me2;
    const uint64_t nk = uint64_t(sess.Mk1) * sess.Mk2;
    const uint64_t nr2 = nk * uint64_t(sess.Mo1) * sess.Mo2;
    if (nm * nk * nzn + nm * nzn * nzn > budget)
        throw BudgetExceeded("adaptive_exact_leakage: enumeration exceeds budget");

    auto pz_seq = [&](int j1, int j2, uint64_t zi) {
        const auto& v1 = cb.words1[size_t(j1)];
        const auto& v2 = cb.words2[size_t(j2)];
        double prob = 1.0;
        uint64_t rem = zi;
        for (int t = p.n - 1; t >= 0; --t) {
            int zt = int(rem % uint64_t(ch.z));
            rem /= uint64_t(ch.z);
            std::array<int, 3> idx{v1[size_t(t)], v2[size_t(t)], zt};
            prob *= pz.at(idx);
        }
        return prob;
    };

    // Round-1 law per key pair, opens averaged out: A[k1][k2][z1].
    std::vector<double> A(nk * nzn, 0.0);
    for (int k1 = 0; k1 < sess.Mk1; ++k1)
        for (int k2 = 0; k2 < sess.Mk2; ++k2) {
            for (int o1 = 0; o1 < sess.Mo1; ++o1)
                for (int o2 = 0; o2 < sess.Mo2; ++o2) {
                    int j1 = (0 * sess.Mk1 + k1) * p.L1 + (0 * sess.Mo1 + o1);
                    int j2 = (0 * sess.Mk2 + k2) * p.L2 + (0 * sess.Mo2 + o2);
                    for (uint64_t zi = 0; zi < nzn; ++zi)
                        A[(uint64_t(k1) * sess.Mk2 + k2) * nzn + zi] += pz_seq(j1, j2, zi);
                }
            for (uint64_t zi = 0; zi < nzn; ++zi)
                A[(uint64_t(k1) * sess.Mk2 + k2) * nzn + zi] /= double(sess.Mo1) * sess.Mo2;
        }

    // P(z1, z2 | m) for every round-2 message tuple.
    std::vector<double> cond(nm * nzn * nzn, 0.0);
    uint64_t mi_idx = 0;
    for (int ms1 = 0; ms1 < sess.Ms1; ++ms1)
        for (int me1 = 0; me1 < sess.Me1; ++me1)
            for (int ms2 = 0; ms2 < sess.Ms2; ++ms2)
                for (int me2 = 0; me2 < sess.Me2; ++me2, ++mi_idx) {
                    for (int k1 = 0; k1 < sess.Mk1; ++k1)
                        for (int k2 = 0; k2 < sess.Mk2; ++k2) {
                            // Round-2 law given the round-1 keys, fresh parts averaged.
                            std::vector<double> B(nzn, 0.0);
                            for (int k1b = 0; k1b < sess.Mk1; ++k1b)
                                for (int k2b = 0; k2b < sess.Mk2; ++k2b)
                                    for (int o1 = 0; o1 < sess.Mo1; ++o1)
                                        for (int o2 = 0; o2 < sess.Mo2; ++o2) {
                                            int enc1 = (me1 + k2) % sess.Me1;
                                            int enc2 = (me2 + k1) % sess.Me2;
                                            int j1 = (ms1 * sess.Mk1 + k1b) * p.L1 +
                                                     (enc1 * sess.Mo1 + o1);
                                            int j2 = (ms2 * sess.Mk2 + k2b) * p.L2 +
                                                     (enc2 * sess.Mo2 + o2);
                                            for (uint64_t zi = 0; zi < nzn; ++zi)
                                                B[zi] += pz_seq(j1, j2, zi);
                                        }
                            double wB = double(nr2);
                            const double* Ak = &A[(uint64_t(k1) * sess.Mk2 + k2) * nzn];
                            for (uint64_t z1 = 0; z1 < nzn; ++z1)
                                for (uint64_t z2 = 0; z2 < nzn; ++z2)
                                    cond[(mi_idx * nzn + z1) * nzn + z2] +=
                                        Ak[z1] * B[z2] / (wB * double(nk));
                        }
                }

    auto mi_of = [&](auto&& class_of, uint64_t nclasses) {
        std::vector<double> pc(nclasses * nzn * nzn, 0.0);
        uint64_t idx = 0;
        for (int ms1 = 0; ms1 < sess.Ms1; ++ms1)
            for (int me1 = 0; me1 < sess.Me1; ++me1)
                for (int ms2 = 0; ms2 < sess.Ms2; ++ms2)
                    for (int me2 = 0; me2 < sess.Me2; ++me2, ++idx) {
                        uint64_t c = class_of(ms1, me1, ms2, me2);
                        for (uint64_t zz = 0; zz < nzn * nzn; ++zz)
                            pc[c * nzn * nzn + zz] += cond[idx * nzn * nzn + zz];
                    }
        double per = double(nm) / double(nclasses);
        std::vector<double> pall(nzn * nzn, 0.0);
        for (uint64_t c = 0; c < nclasses; ++c)
            for (uint64_t zz = 0; zz < nzn * nzn; ++zz) {
                pc[c * nzn * nzn + zz] /= per;
                pall[zz] += pc[c * nzn * nzn + zz] / double(nclasses);
            }
        double mi = 0.0;
        for (uint64_t c = 0; c < nclasses; ++c)
            for (uint64_t zz = 0; zz < nzn * nzn; ++zz) {
                double v = pc[c * nzn * nzn + zz];
                if (v > 0.0 && pall[zz] > 0.0) mi += (v / double(nclasses)) * std::log(v / pall[zz]);
            }
        return mi;
    };

    AdaptiveLeakageReport rep;
    rep.joint_exact = mi_of(
        [&](int ms1, int me1, int ms2, int me2) {
            return uint64_t(((ms1 * sess.Me1 + me1) * sess.Ms2 + ms2) * sess.Me2 + me2);
        },
        nm);
    rep.ind1_exact = mi_of(
        [&](int ms1, int me1, int, int) { return uint64_t(ms1 * sess.Me1 + me1); },
        uint64_t(sess.Ms1) * sess.Me1);
    rep.ind2_exact = mi_of(
        [&](int, int, int ms2, int me2) { return uint64_t(ms2 * sess.Me2 + me2); },
        uint64_t(sess.Ms2) * sess.Me2);

    // Round-1 decomposition term: I(K1,K2; Z^n[1]) with the actual round-1
    // index law (main message fixed at (0,0)).
    {
        std::vector<double> pall(nzn, 0.0);
        for (uint64_t k = 0; k < nk; ++k)
            for (uint64_t zi = 0; zi < nzn; ++zi) pall[zi] += A[k * nzn + zi] / double(nk);
        double mi = 0.0;
        for (uint64_t k = 0; k < nk; ++k)
            for (uint64_t zi = 0; zi < nzn; ++zi) {
                double v = A[k * nzn + zi];
                if (v > 0.0 && pall[zi] > 0.0) mi += (v / double(nk)) * std::log(v / pall[zi]);
            }
        rep.round1_term = mi;
    }
    // Round-2 term: all composite indices uniform, so it is the non-adaptive
    // exact leakage of the secret composites (m, k parts jointly).
    rep.round2_term = exact_leakage(ch, d, cb, SecretParts::both_messages(), budget);
    rep.per_round_sum = rep.round1_term + rep.round2_term;
    return rep;
}

// Perfect-secrecy sanity quantity: exact I(M; M + K mod q) for uniform
// independent M, K.
inline double otp_leakage(int q) {
    std::vector<double> joint(size_t(q) * q, 0.0);
    for (int m = 0; m < q; ++m)
        for (int k = 0; k < q; ++k) joint[size_t(m) * q + (m + k) % q] += 1.0 / (double(q) * q);
    std::vector<double> pm(size_t(q), 0.0), pcdist(size_t(q), 0.0);
    for (int m = 0; m < q; ++m)
        for (int c = 0; c < q; ++c) {
            pm[size_t(m)] += joint[size_t(m) * q + c];
            pcdist[size_t(c)] += joint[size_t(m) * q + c];
        }
    double mi = 0.0;
    for (int m = 0; m < q; ++m)
        for (int c = 0; c < q; ++c) {
            double v = joint[size_t(m) * q + c];
            if (v > 0.0) mi += v * std::log(v / (pm[size_t(m)] * pcdist[size_t(c)]));
        }
    return mi;
}

}  // namespace twwc
