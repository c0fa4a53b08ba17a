#pragma once

#include <array>
#include <string>
#include <vector>

#include "twwc/pmf.hpp"

namespace twwc {

// Discrete memoryless two-way wiretap channel P(y1,y2,z | x1,x2).
// Tensor layout: p[x1][x2][y1][y2][z], row-stochastic per (x1,x2).
struct Channel {
    int x1 = 0, x2 = 0, y1 = 0, y2 = 0, z = 0;
    NdArray p;

    Channel() = default;
    Channel(int x1_, int x2_, int y1_, int y2_, int z_)
        : x1(x1_), x2(x2_), y1(y1_), y2(y2_), z(z_), p({x1_, x2_, y1_, y2_, z_}) {}

    double& at(int a, int b, int c, int d, int e) {
        std::array<int, 5> idx{a, b, c, d, e};
        return p.at(idx);
    }
    double at(int a, int b, int c, int d, int e) const {
        std::array<int, 5> idx{a, b, c, d, e};
        return p.at(idx);
    }

    void validate(double row_tol = 1e-9) const {
        if (p.dims() != std::vector<int>{x1, x2, y1, y2, z})
            throw DimensionError("Channel: tensor dims do not match declared alphabets");
        for (size_t i = 0; i < p.size(); ++i)
            if (p[i] < 0.0) throw StochasticityError("Channel: negative entry");
        for (int a = 0; a < x1; ++a)
            for (int b = 0; b < x2; ++b) {
                double s = 0.0;
                for (int c = 0; c < y1; ++c)
                    for (int d = 0; d < y2; ++d)
                        for (int e = 0; e < z; ++e) s += at(a, b, c, d, e);
                if (std::fabs(s - 1.0) > row_tol)
                    throw StochasticityError("Channel: row (" + std::to_string(a) + "," +
                                             std::to_string(b) + ") sums to " + fmt_double(s));
            }
    }

    // Output marginals given the input pair.
    double py1(int a, int b, int c) const {
        double s = 0.0;
        for (int d = 0; d < y2; ++d)
            for (int e = 0; e < z; ++e) s += at(a, b, c, d, e);
        return s;
    }
    double py2(int a, int b, int d) const {
        double s = 0.0;
        for (int c = 0; c < y1; ++c)
            for (int e = 0; e < z; ++e) s += at(a, b, c, d, e);
        return s;
    }
    double pz(int a, int b, int e) const {
        double s = 0.0;
        for (int c = 0; c < y1; ++c)
            for (int d = 0; d < y2; ++d) s += at(a, b, c, d, e);
        return s;
    }
};

// Product-form auxiliary/input law: the set Q of Eq.-style factorized inputs.
// pX1givenV1 is |V1| x |X1| (rows stochastic), likewise for user 2.
struct InputDistribution {
    std::vector<double> pV1;
    std::vector<std::vector<double>> pX1givenV1;
    std::vector<double> pV2;
    std::vector<std::vector<double>> pX2givenV2;

    int v1() const { return int(pV1.size()); }
    int v2() const { return int(pV2.size()); }
    int x1() const { return pX1givenV1.empty() ? 0 : int(pX1givenV1[0].size()); }
    int x2() const { return pX2givenV2.empty() ? 0 : int(pX2givenV2[0].size()); }

    void validate(double tol = 1e-12) const {
        auto check_pmf = [&](const std::vector<double>& q, const char* what) {
            double s = 0.0;
            for (double v : q) {
                if (v < 0.0) throw StochasticityError(std::string(what) + ": negative entry");
                s += v;
            }
            if (std::fabs(s - 1.0) > tol)
                throw StochasticityError(std::string(what) + " sums to " + fmt_double(s));
        };
        check_pmf(pV1, "pV1");
        check_pmf(pV2, "pV2");
        if (pX1givenV1.size() != pV1.size() || pX2givenV2.size() != pV2.size())
            throw DimensionError("InputDistribution: row count mismatch");
        for (const auto& row : pX1givenV1) {
            if (row.size() != pX1givenV1[0].size()) throw DimensionError("pX1givenV1 ragged");
            check_pmf(row, "pX1givenV1 row");
        }
        for (const auto& row : pX2givenV2) {
            if (row.size() != pX2givenV2[0].size()) throw DimensionError("pX2givenV2 ragged");
            check_pmf(row, "pX2givenV2 row");
        }
    }
};

// V_i = X_i with probability one.
inline InputDistribution identity_distribution(const Channel& ch, const std::vector<double>& px1,
                                               const std::vector<double>& px2) {
    InputDistribution d;
    d.pV1 = px1;
    d.pV2 = px2;
    d.pX1givenV1.assign(ch.x1, std::vector<double>(ch.x1, 0.0));
    d.pX2givenV2.assign(ch.x2, std::vector<double>(ch.x2, 0.0));
    for (int i = 0; i < ch.x1; ++i) d.pX1givenV1[i][i] = 1.0;
    for (int i = 0; i < ch.x2; ++i) d.pX2givenV2[i][i] = 1.0;
    return d;
}

inline InputDistribution uniform_identity_distribution(const Channel& ch) {
    return identity_distribution(ch, std::vector<double>(ch.x1, 1.0 / ch.x1),
                                 std::vector<double>(ch.x2, 1.0 / ch.x2));
}

// Effective channel P(y1,y2,z | v1,v2) = sum_{x1,x2} P(x1|v1) P(x2|v2) P(y1,y2,z|x1,x2).
// The plain form: inputs become V1,V2 and the sampled X_i is marginalized out.
// Decoders that need X_i as side information work from joint_pmf() below, which
// keeps every coordinate recoverable.
inline Channel prefix_channel(const Channel& ch, const InputDistribution& d) {
    if (d.x1() != ch.x1 || d.x2() != ch.x2)
        throw DimensionError("prefix_channel: distribution does not match channel inputs");
    Channel out(d.v1(), d.v2(), ch.y1, ch.y2, ch.z);
    for (int v1 = 0; v1 < d.v1(); ++v1)
        for (int v2 = 0; v2 < d.v2(); ++v2)
            for (int a = 0; a < ch.x1; ++a) {
                double w1 = d.pX1givenV1[v1][a];
                if (w1 == 0.0) continue;
                for (int b = 0; b < ch.x2; ++b) {
                    double w = w1 * d.pX2givenV2[v2][b];
                    if (w == 0.0) continue;
                    for (int c = 0; c < ch.y1; ++c)
                        for (int dd = 0; dd < ch.y2; ++dd)
                            for (int e = 0; e < ch.z; ++e)
                                out.at(v1, v2, c, dd, e) += w * ch.at(a, b, c, dd, e);
                }
            }
    return out;
}

// Augmented form: user i's output record is (x_i, y_i), so (X_i,Y_i) joint
// statistics stay recoverable from the prefixed channel itself.
// Output symbol encoding: user 1 record = x1 * |Y1| + y1, user 2 likewise.
inline Channel prefix_channel_augmented(const Channel& ch, const InputDistribution& d) {
    if (d.x1() != ch.x1 || d.x2() != ch.x2)
        throw DimensionError("prefix_channel_augmented: distribution does not match channel inputs");
    Channel out(d.v1(), d.v2(), ch.x1 * ch.y1, ch.x2 * ch.y2, ch.z);
    for (int v1 = 0; v1 < d.v1(); ++v1)
        for (int v2 = 0; v2 < d.v2(); ++v2)
            for (int a = 0; a < ch.x1; ++a) {
                double w1 = d.pX1givenV1[v1][a];
                if (w1 == 0.0) continue;
                for (int b = 0; b < ch.x2; ++b) {
                    double w = w1 * d.pX2givenV2[v2][b];
                    if (w == 0.0) continue;
                    for (int c = 0; c < ch.y1; ++c)
                        for (int dd = 0; dd < ch.y2; ++dd)
                            for (int e = 0; e < ch.z; ++e)
                                out.at(v1, v2, a * ch.y1 + c, b * ch.y2 + dd, e) +=
                                    w * ch.at(a, b, c, dd, e);
                }
            }
    return out;
}

// Conditionally independent MAC: p(y1,y2,z|x1,x2) factorizes into the three
// output marginals for every input pair. Factors are the marginals of ch itself.
inline bool is_conditionally_independent(const Channel& ch, double tol = 1e-9) {
    for (int a = 0; a < ch.x1; ++a)
        for (int b = 0; b < ch.x2; ++b)
            for (int c = 0; c < ch.y1; ++c)
                for (int d = 0; d < ch.y2; ++d)
                    for (int e = 0; e < ch.z; ++e) {
                        double lhs = ch.at(a, b, c, d, e);
                        double rhs = ch.py1(a, b, c) * ch.py2(a, b, d) * ch.pz(a, b, e);
                        if (std::fabs(lhs - rhs) > tol) return false;
                    }
    return true;
}

// Joint law of (V1,V2,X1,X2,Y1,Y2,Z) under d followed by one channel use.
inline JointPmf joint_pmf(const Channel& ch, const InputDistribution& d) {
    if (d.x1() != ch.x1 || d.x2() != ch.x2)
        throw DimensionError("joint_pmf: distribution does not match channel inputs");
    JointPmf out({"V1", "V2", "X1", "X2", "Y1", "Y2", "Z"},
                 {d.v1(), d.v2(), ch.x1, ch.x2, ch.y1, ch.y2, ch.z});
    std::array<int, 7> idx{};
    for (int v1 = 0; v1 < d.v1(); ++v1)
        for (int v2 = 0; v2 < d.v2(); ++v2) {
            double wv = d.pV1[v1] * d.pV2[v2];
            if (wv == 0.0) continue;
            for (int a = 0; a < ch.x1; ++a)
                for (int b = 0; b < ch.x2; ++b) {
                    double w = wv * d.pX1givenV1[v1][a] * d.pX2givenV2[v2][b];
                    if (w == 0.0) continue;
                    for (int c = 0; c < ch.y1; ++c)
                        for (int dd = 0; dd < ch.y2; ++dd)
                            for (int e = 0; e < ch.z; ++e) {
                                idx = {v1, v2, a, b, c, dd, e};
                                out.tensor().at(idx) += w * ch.at(a, b, c, dd, e);
                            }
                }
        }
    return out;
}

// Eavesdropper symbol law given the auxiliary pair: P(z | v1, v2).
inline NdArray z_given_v(const Channel& ch, const InputDistribution& d) {
    NdArray out({d.v1(), d.v2(), ch.z});
    for (int v1 = 0; v1 < d.v1(); ++v1)
        for (int v2 = 0; v2 < d.v2(); ++v2)
            for (int a = 0; a < ch.x1; ++a)
                for (int b = 0; b < ch.x2; ++b) {
                    double w = d.pX1givenV1[v1][a] * d.pX2givenV2[v2][b];
                    if (w == 0.0) continue;
                    for (int e = 0; e < ch.z; ++e) {
                        std::array<int, 3> idx{v1, v2, e};
                        out.at(idx) += w * ch.pz(a, b, e);
                    }
                }
    return out;
}

}  // namespace twwc
