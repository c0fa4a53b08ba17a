#pragma once

// Bundled inequality systems for the two rate-region derivations: the
// joint-secrecy system (appendix-a) and the individual-secrecy system with
// the min-term sum constraint (appendix-b), together with the expected
// projections onto (R1, R2).

#include <set>

#include "twwc/fm_elim.hpp"

namespace twwc::fm {

inline const char* kJointSystemText = R"(// Joint-secrecy rate constraints; project onto (R1, R2).
R1 = R1s + R1e
R2 = R2s + R2e
R2s + R2k + R2o + R2e < I(Y1;V2|X1)
R1s + R1k + R1o + R1e < I(Y2;V1|X2)
R1e <= R2k
R2e <= R1k
R1o + R1e > I(Z;V1)
R2o + R2e > I(Z;V2)
R1o + R1e + R2o + R2e > I(Z;V1,V2)
#nonneg R1s, R1k, R1e, R1o, R2s, R2k, R2e, R2o
#assume I(Z;V1,V2) >= I(Z;V1) + I(Z;V2)
#assume I(Z;V1) >= 0
#assume I(Z;V2) >= 0
#assume I(Z;V1,V2) >= 0
#assume I(Y2;V1|X2) >= 0
#assume I(Y1;V2|X1) >= 0
#eliminate R1o, R2o, R1k, R2k, R1s, R2s, R1e, R2e
)";

inline const char* kJointExpectedText = R"(R1 < I(Y2;V1|X2)
R2 < I(Y1;V2|X1)
R1 + R2 < I(Y2;V1|X2) + I(Y1;V2|X1) - I(Z;V1,V2)
)";

inline const char* kIndividualSystemText = R"(// Individual-secrecy rate constraints; the sum constraint carries min(R1s,R2s).
R1 = R1s + R1e
R2 = R2s + R2e
R2s + R2k + R2o + R2e < I(Y1;V2|X1)
R1s + R1k + R1o + R1e < I(Y2;V1|X2)
R1e <= R2k
R2e <= R1k
R1o + R1e > I(Z;V1)
R2o + R2e > I(Z;V2)
R1o + R1e + R2o + R2e + min(R1s, R2s) > I(Z;V1,V2)
#nonneg R1s, R1k, R1e, R1o, R2s, R2k, R2e, R2o
#assume I(Z;V1,V2) >= I(Z;V1) + I(Z;V2)
#assume I(Z;V1) >= 0
#assume I(Z;V2) >= 0
#assume I(Z;V1,V2) >= 0
#assume I(Y2;V1|X2) >= 0
#assume I(Y1;V2|X1) >= 0
#eliminate R1o, R2o, R1k, R2k, R1e, R2e, R1s, R2s
)";

// The individual region: per-user bounds, the max{R1,R2} bound, and the three
// surviving expansions of the min+min sum constraint (the fourth expansion,
// R1+R2 < 2(A+B-C12), is implied by the two max-bound rows).
inline const char* kIndividualExpectedText = R"(R1 < I(Y2;V1|X2)
R2 < I(Y1;V2|X1)
R1 < I(Y1;V2|X1) + I(Y2;V1|X2) - I(Z;V1,V2)
R2 < I(Y1;V2|X1) + I(Y2;V1|X2) - I(Z;V1,V2)
R1 + R2 < I(Y1;V2|X1) + I(Y2;V1|X2) - I(Z;V1) - I(Z;V2)
R1 + R2 < I(Y1;V2|X1) + 2 I(Y2;V1|X2) - I(Z;V1,V2) - I(Z;V1)
R1 + R2 < 2 I(Y1;V2|X1) + I(Y2;V1|X2) - I(Z;V1,V2) - I(Z;V2)
)";

inline std::multiset<std::string> canonical_key_set(const std::vector<Inequality>& v) {
    std::multiset<std::string> out;
    for (const auto& q : v) out.insert(canonical_key(q));
    return out;
}

struct FixtureOutcome {
    PipelineResult result;
    bool matches = false;
    std::vector<std::string> expected_missing;  // keys expected but not produced
    std::vector<std::string> unexpected;        // rendered extras
};

inline FixtureOutcome run_fixture(const std::string& name) {
    const char* sys_text = nullptr;
    const char* expect_text = nullptr;
    if (name == "appendix-a") {
        sys_text = kJointSystemText;
        expect_text = kJointExpectedText;
    } else if (name == "appendix-b") {
        sys_text = kIndividualSystemText;
        expect_text = kIndividualExpectedText;
    } else {
        throw Error("unknown fixture: " + name + " (expected appendix-a or appendix-b)");
    }
    SymbolicSystem sys = parse_system(sys_text);
    SymbolicSystem expect = parse_system(expect_text);
    FixtureOutcome out;
    out.result = run_pipeline(sys);
    auto got = canonical_key_set(out.result.projected.ineqs);
    auto want = canonical_key_set(expect.ineqs);
    out.matches = got == want;
    if (!out.matches) {
        for (const auto& k : want)
            if (!got.count(k)) out.expected_missing.push_back(k);
        for (const auto& q : out.result.projected.ineqs)
            if (!want.count(canonical_key(q))) out.unexpected.push_back(to_string(q));
    }
    return out;
}

}  // namespace twwc::fm
