#pragma once

#include <cstdint>
#include <vector>

#include "twwc/channel.hpp"

namespace twwc {

struct CodeParams {
    int n = 1;
    int M1 = 1, L1 = 1, M2 = 1, L2 = 1;
    uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw Error("CodeParams: n must be >= 1");
        if (M1 < 1 || L1 < 1 || M2 < 1 || L2 < 1)
            throw Error("CodeParams: table sizes must be >= 1");
    }
};

// Random codebooks: codeword (m,l) of user i is i.i.d. P_{V_i} per symbol.
// Index layout: word[i][m * L_i + l][t].
struct Codebook {
    CodeParams params;
    int v1 = 1, v2 = 1;  // auxiliary alphabet sizes
    std::vector<std::vector<int>> words1;
    std::vector<std::vector<int>> words2;

    const std::vector<int>& word(int user, int j) const {
        return user == 0 ? words1[size_t(j)] : words2[size_t(j)];
    }
    int count(int user) const {
        return user == 0 ? params.M1 * params.L1 : params.M2 * params.L2;
    }
};

inline Codebook build_code(const Channel& ch, const InputDistribution& d, const CodeParams& p) {
    (void)ch;
    p.validate();
    d.validate();
    Codebook cb;
    cb.params = p;
    cb.v1 = d.v1();
    cb.v2 = d.v2();
    Rng rng(derive_seed(p.seed, 0xc0deb00c));
    cb.words1.assign(size_t(p.M1) * p.L1, std::vector<int>(p.n));
    for (auto& w : cb.words1)
        for (int t = 0; t < p.n; ++t) w[size_t(t)] = rng.sample_pmf(d.pV1);
    cb.words2.assign(size_t(p.M2) * p.L2, std::vector<int>(p.n));
    for (auto& w : cb.words2)
        for (int t = 0; t < p.n; ++t) w[size_t(t)] = rng.sample_pmf(d.pV2);
    return cb;
}

}  // namespace twwc
