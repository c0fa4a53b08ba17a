#include <catch2/catch_amalgamated.hpp>

#include "twwc/info_measures.hpp"

using namespace twwc;

namespace {

JointPmf random_joint(Rng& rng, std::vector<std::string> names, std::vector<int> sizes) {
    JointPmf p(std::move(names), std::move(sizes));
    double s = 0.0;
    for (size_t i = 0; i < p.tensor().size(); ++i) {
        p.tensor()[i] = -std::log(std::max(rng.unit(), 0x1.0p-53));
        s += p.tensor()[i];
    }
    for (size_t i = 0; i < p.tensor().size(); ++i) p.tensor()[i] /= s;
    return p;
}

// Independent long-double oracle for D_{1+s}(P_AB || P_A x P_B).
long double renyi_up_oracle(const JointPmf& p, double s) {
    int na = p.sizes()[0], nb = p.sizes()[1];
    std::vector<long double> pa(size_t(na), 0.0L), pb(size_t(nb), 0.0L);
    auto at = [&](int i, int j) {
        std::array<int, 2> idx{i, j};
        return (long double)p.tensor().at(idx);
    };
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            pa[size_t(i)] += at(i, j);
            pb[size_t(j)] += at(i, j);
        }
    long double acc = 0.0L;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            long double pij = at(i, j);
            if (pij <= 0.0L) continue;
            acc += powl(pij, 1.0L + (long double)s) *
                   powl(pa[size_t(i)] * pb[size_t(j)], -(long double)s);
        }
    return logl(acc) / (long double)s;
}

JointPmf bsc_joint(double flip) {
    // X uniform binary, Z = X xor Bern(flip); axes (Z, X).
    JointPmf p({"Z", "X"}, {2, 2});
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
            std::array<int, 2> idx{z, x};
            p.tensor().at(idx) = 0.5 * (z == x ? 1 - flip : flip);
        }
    return p;
}

}  // namespace

TEST_CASE("uniform binary entropy is ln 2") {
    JointPmf p({"X"}, {2});
    p.tensor()[0] = p.tensor()[1] = 0.5;
    REQUIRE(shannon_quantities(p, "H(X)") == Catch::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("BSC(0.1) mutual information") {
    JointPmf p = bsc_joint(0.1);
    double expect = std::log(2.0) - binary_entropy_nats(0.1);  // 0.368064...
    REQUIRE(shannon_quantities(p, "I(Z;X)") == Catch::Approx(expect).margin(1e-12));
    REQUIRE(expect == Catch::Approx(0.368064).margin(5e-7));
}

TEST_CASE("independent coordinates give zero information") {
    JointPmf p({"Z", "X"}, {2, 3});
    for (int z = 0; z < 2; ++z)
        for (int x = 0; x < 3; ++x) {
            std::array<int, 2> idx{z, x};
            p.tensor().at(idx) = (z == 0 ? 0.3 : 0.7) * (x == 0 ? 0.5 : x == 1 ? 0.2 : 0.3);
        }
    REQUIRE(shannon_quantities(p, "I(Z;X)") == Catch::Approx(0.0).margin(1e-12));
    for (double s : {0.1, 0.5, 1.0})
        REQUIRE(renyi_mi_up(p, {"Z"}, {"X"}, RenyiOrderOffset(s)) ==
                Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("renyi up-measure matches an independent long-double oracle") {
    Rng rng(101);
    for (int rep = 0; rep < 5; ++rep) {
        JointPmf p = random_joint(rng, {"Z", "X"}, {3, 3});
        for (double s : {0.25, 0.5, 1.0}) {
            double got = renyi_mi_up(p, {"Z"}, {"X"}, RenyiOrderOffset(s));
            REQUIRE(got == Catch::Approx(double(renyi_up_oracle(p, s))).margin(1e-11));
        }
    }
    JointPmf p = bsc_joint(0.1);
    REQUIRE(renyi_mi_up(p, {"Z"}, {"X"}, RenyiOrderOffset(1.0)) ==
            Catch::Approx(double(renyi_up_oracle(p, 1.0))).margin(1e-12));
}

TEST_CASE("up-measure is nondecreasing in s") {
    Rng rng(103);
    for (int rep = 0; rep < 5; ++rep) {
        JointPmf p = random_joint(rng, {"Z", "X"}, {3, 3});
        double prev = -1.0;
        for (int k = 1; k <= 20; ++k) {
            double s = 0.05 * k;
            double v = renyi_mi_up(p, {"Z"}, {"X"}, RenyiOrderOffset(s));
            REQUIRE(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("small-s limits recover the Shannon quantities") {
    Rng rng(105);
    for (int rep = 0; rep < 5; ++rep) {
        JointPmf p = random_joint(rng, {"Z", "X", "Y"}, {3, 2, 3});
        double shannon_up = mutual_information(p, {"Z"}, {"X"});
        double up = renyi_mi_up(p, {"Z"}, {"X"}, RenyiOrderOffset(1e-4));
        REQUIRE(std::fabs(up - shannon_up) <= 1e-3);
        double shannon_down = conditional_mutual_information(p, {"Z"}, {"X"}, {"Y"});
        double down = cond_renyi_mi_down(p, {"Z"}, {"X"}, {"Y"}, RenyiOrderOffset(1e-4));
        REQUIRE(std::fabs(down - shannon_down) <= 1e-3);
    }
}

TEST_CASE("down-measure vanishes under conditional independence") {
    // Z = Y xor noise, X independent of everything.
    JointPmf p({"Z", "X", "Y"}, {2, 2, 2});
    for (int z = 0; z < 2; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                std::array<int, 3> idx{z, x, y};
                p.tensor().at(idx) = 0.5 * 0.5 * (z == y ? 0.8 : 0.2);
            }
    for (double s : {0.1, 0.5, 1.0})
        REQUIRE(cond_renyi_mi_down(p, {"Z"}, {"X"}, {"Y"}, RenyiOrderOffset(s)) ==
                Catch::Approx(0.0).margin(1e-12));
    // And strictly positive once Z depends on X given Y.
    Rng rng(107);
    JointPmf q = random_joint(rng, {"Z", "X", "Y"}, {2, 2, 2});
    REQUIRE(cond_renyi_mi_down(q, {"Z"}, {"X"}, {"Y"}, RenyiOrderOffset(0.5)) > 0.0);
}

TEST_CASE("independent conditioning reduces to the pair form") {
    // Build P(z|x,y) with X independent of Y; check the simplified identity
    // I_down(Z;X|Y) = I_down(ZY;X) to 1e-12.
    Rng rng(109);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> px = {0.3, 0.7}, py = {0.4, 0.6};
        JointPmf p({"Z", "X", "Y"}, {3, 2, 2});
        std::vector<double> cz(3);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                double s = 0.0;
                for (auto& v : cz) {
                    v = -std::log(std::max(rng.unit(), 0x1.0p-53));
                    s += v;
                }
                for (int z = 0; z < 3; ++z) {
                    std::array<int, 3> idx{z, x, y};
                    p.tensor().at(idx) = px[size_t(x)] * py[size_t(y)] * cz[size_t(z)] / s;
                }
            }
        for (double s : {0.2, 0.7, 1.0}) {
            double cond = cond_renyi_mi_down(p, {"Z"}, {"X"}, {"Y"}, RenyiOrderOffset(s));
            double pair = renyi_mi_down(p, {"Z", "Y"}, {"X"}, RenyiOrderOffset(s));
            REQUIRE(cond == Catch::Approx(pair).margin(1e-12));
        }
    }
}

TEST_CASE("minimizer tends to the true conditional as s -> 0") {
    Rng rng(111);
    JointPmf p = random_joint(rng, {"Z", "X", "Y"}, {3, 2, 2});
    JointPmf q = minimizer_q(p, {"Z"}, {"X"}, {"Y"}, RenyiOrderOffset(1e-5),
                             MinimizerMode::Conditional);
    // Compare Q*(z|y) with P(z|y).
    double l1 = 0.0;
    JointPmf zy = p.marginal({"Z", "Y"});
    JointPmf ym = p.marginal({"Y"});
    for (int y = 0; y < 2; ++y) {
        double py = ym.tensor()[size_t(y)];
        double qy = 0.0;
        for (int z = 0; z < 3; ++z) {
            std::array<int, 2> idx{z, y};
            qy += q.tensor().at(idx);
        }
        for (int z = 0; z < 3; ++z) {
            std::array<int, 2> qidx{z, y};
            std::array<int, 2> pidx{z, y};
            l1 += std::fabs(q.tensor().at(qidx) / qy - zy.tensor().at(pidx) / py);
        }
    }
    REQUIRE(l1 <= 1e-3);
}

TEST_CASE("minimizer beats 200 random alternatives") {
    Rng rng(113);
    JointPmf p = random_joint(rng, {"Z", "X", "Y"}, {2, 2, 2});
    RenyiOrderOffset s(0.6);
    JointPmf qstar = minimizer_q(p, {"Z"}, {"X"}, {"Y"}, s, MinimizerMode::Conditional);
    double at_star = down_objective_conditional(p, {"Z"}, {"X"}, {"Y"}, s, qstar);
    REQUIRE(at_star == Catch::Approx(cond_renyi_mi_down(p, {"Z"}, {"X"}, {"Y"}, s)).margin(1e-10));
    for (int rep = 0; rep < 200; ++rep) {
        JointPmf alt = random_joint(rng, {"Z*", "Y*"}, {2, 2});
        double v = down_objective_conditional(p, {"Z"}, {"X"}, {"Y"}, s, alt);
        REQUIRE(at_star <= v + 1e-9);
    }
}

TEST_CASE("joint-mode minimizer reproduces the pair objective when X is independent of Y") {
    Rng rng(115);
    std::vector<double> px = {0.25, 0.75};
    JointPmf p({"Z", "X", "Y"}, {2, 2, 2});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double c = 0.2 + 0.6 * rng.unit();
            for (int z = 0; z < 2; ++z) {
                std::array<int, 3> idx{z, x, y};
                p.tensor().at(idx) = px[size_t(x)] * 0.5 * (z == 0 ? c : 1 - c);
            }
        }
    RenyiOrderOffset s(0.4);
    JointPmf qstar = minimizer_q(p, {"Z"}, {"X"}, {"Y"}, s, MinimizerMode::Joint);
    double at_star = down_objective_joint(p, {"Z"}, {"X"}, {"Y"}, s, qstar);
    REQUIRE(at_star ==
            Catch::Approx(cond_renyi_mi_down(p, {"Z"}, {"X"}, {"Y"}, s)).margin(1e-10));
}

TEST_CASE("deterministic channel minimizer matches direct normalization") {
    // Z = f(X) with f(0)=f(1)=0, f(2)=1; X independent of (trivial) Y.
    std::vector<double> px = {0.2, 0.3, 0.5};
    JointPmf p({"Z", "X", "Y"}, {2, 3, 1});
    for (int x = 0; x < 3; ++x) {
        int z = x == 2 ? 1 : 0;
        std::array<int, 3> idx{z, x, 0};
        p.tensor().at(idx) = px[size_t(x)];
    }
    RenyiOrderOffset s(0.5);
    JointPmf q = minimizer_q(p, {"Z"}, {"X"}, {"Y"}, s, MinimizerMode::Conditional);
    // Q*(z|y) proportional to sum_{x: f(x)=z} P(x) (the tilt is 1 on a
    // deterministic channel), so Q* = (0.5, 0.5).
    std::array<int, 2> i0{0, 0}, i1{1, 0};
    REQUIRE(q.tensor().at(i0) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(q.tensor().at(i1) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("query language errors") {
    JointPmf p({"Z", "X"}, {2, 2});
    p.tensor()[0] = 1.0;
    REQUIRE_THROWS_AS(shannon_quantities(p, "I(Z;W)"), UnknownCoordinate);
    REQUIRE_THROWS_AS(shannon_quantities(p, "I(Z;X"), ParseError);
    REQUIRE_THROWS_AS(shannon_quantities(p, "Q(Z)"), ParseError);
    REQUIRE_THROWS_AS(shannon_quantities(p, ""), ParseError);
}

TEST_CASE("order offset domain") {
    REQUIRE_THROWS_AS(RenyiOrderOffset(0.0), Error);
    REQUIRE_THROWS_AS(RenyiOrderOffset(1.5), Error);
    REQUIRE_NOTHROW(RenyiOrderOffset(1.0));
}
