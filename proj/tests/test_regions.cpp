#include <catch2/catch_amalgamated.hpp>

#include "twwc/additive.hpp"
#include "twwc/regions.hpp"

using namespace twwc;

namespace {

Channel random_channel(Rng& rng, int x1, int x2, int y1, int y2, int z) {
    Channel ch(x1, x2, y1, y2, z);
    for (int a = 0; a < x1; ++a)
        for (int b = 0; b < x2; ++b) {
            double s = 0.0;
            std::vector<double> row(size_t(y1) * y2 * z);
            for (auto& v : row) {
                v = -std::log(std::max(rng.unit(), 0x1.0p-53));
                s += v;
            }
            size_t k = 0;
            for (int c = 0; c < y1; ++c)
                for (int d = 0; d < y2; ++d)
                    for (int e = 0; e < z; ++e) ch.at(a, b, c, d, e) = row[k++] / s;
        }
    return ch;
}

bool region_subset(const RateRegion& inner, const RateRegion& outer, double tol = 1e-9) {
    for (const auto& v : inner.vertices)
        if (!contains(outer, v, tol)) return false;
    return true;
}

MeasureBundle bundle_of(double a, double b, double c1, double c2, double c12) {
    MeasureBundle m;
    m.i_y2v1_x2 = a;
    m.i_y1v2_x1 = b;
    m.i_z_v1 = c1;
    m.i_z_v2 = c2;
    m.i_z_v1v2 = c12;
    return m;
}

double halfspace_bound(const RateRegion& r, double a1, double a2) {
    for (const auto& h : r.halfspaces)
        if (h.a1 == a1 && h.a2 == a2) return h.b;
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

TEST_CASE("degenerate eavesdropper gives the rectangle") {
    Channel ch(2, 2, 2, 2, 1);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) ch.at(a, b, b, a, 0) = 1.0;
    ch.validate();
    MeasureBundle m = measure_bundle(ch, uniform_identity_distribution(ch));
    REQUIRE(m.i_z_v1 == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(m.i_z_v2 == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(m.i_z_v1v2 == Catch::Approx(0.0).margin(1e-12));
    RateRegion r = region_from_measures(m, SecrecyKind::Joint, CodingKind::Adaptive);
    double ln2 = std::log(2.0);
    REQUIRE(contains(r, {ln2 - 1e-12, ln2 - 1e-12}));  // sum constraint slack
    REQUIRE_FALSE(contains(r, {ln2 + 1e-6, 0.0}));
}

TEST_CASE("bundle substitution reproduces the inequality sets") {
    MeasureBundle m = bundle_of(1.0, 1.0, 0.2, 0.3, 0.6);
    RateRegion rn = region_from_measures(m, SecrecyKind::Joint, CodingKind::NonAdaptive);
    REQUIRE(halfspace_bound(rn, 1, 0) == Catch::Approx(0.8).margin(1e-12));
    REQUIRE(halfspace_bound(rn, 0, 1) == Catch::Approx(0.7).margin(1e-12));
    REQUIRE(halfspace_bound(rn, 1, 1) == Catch::Approx(1.4).margin(1e-12));

    RateRegion ra = region_from_measures(m, SecrecyKind::Joint, CodingKind::Adaptive);
    REQUIRE(halfspace_bound(ra, 1, 0) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(halfspace_bound(ra, 0, 1) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(halfspace_bound(ra, 1, 1) == Catch::Approx(1.4).margin(1e-12));
    REQUIRE(region_subset(rn, ra));
    // Strict containment: the adaptive region reaches past the non-adaptive R1 cap.
    REQUIRE(contains(ra, {0.9, 0.0}));
    REQUIRE_FALSE(contains(rn, {0.9, 0.0}));

    // Individual-adaptive sum bound uses min{.}+min{.}.
    RateRegion ri = region_from_measures(m, SecrecyKind::Individual, CodingKind::Adaptive);
    REQUIRE(halfspace_bound(ri, 1, 1) == Catch::Approx(0.8 + 0.7).margin(1e-12));
}

TEST_CASE("clamping flags negative bounds") {
    MeasureBundle m = bundle_of(0.2, 0.2, 0.5, 0.0, 0.5);  // A - C1 < 0
    RateRegion r = region_from_measures(m, SecrecyKind::Joint, CodingKind::NonAdaptive);
    REQUIRE(r.clamped);
    REQUIRE(halfspace_bound(r, 1, 0) == 0.0);
}

TEST_CASE("containments hold on random channel/distribution pairs") {
    Rng rng(2024);
    int checked = 0;
    while (checked < 60) {
        Channel ch = random_channel(rng, 2, 2, 2, 2, 2);
        InputDistribution d = random_product_distribution(ch, 2, 2, rng);
        MeasureBundle m = measure_bundle(ch, d);
        RateRegion jn = region_from_measures(m, SecrecyKind::Joint, CodingKind::NonAdaptive);
        RateRegion ja = region_from_measures(m, SecrecyKind::Joint, CodingKind::Adaptive);
        RateRegion in = region_from_measures(m, SecrecyKind::Individual, CodingKind::NonAdaptive);
        RateRegion ia = region_from_measures(m, SecrecyKind::Individual, CodingKind::Adaptive);
        REQUIRE(region_subset(jn, ja));
        REQUIRE(region_subset(in, ia));
        REQUIRE(region_subset(ja, ia));
        ++checked;
    }
}

TEST_CASE("regions are convex and downward closed") {
    Rng rng(31);
    Channel ch = random_channel(rng, 2, 2, 2, 2, 2);
    InputDistribution d = random_product_distribution(ch, 2, 2, rng);
    for (auto kind : {SecrecyKind::Joint, SecrecyKind::Individual}) {
        RateRegion r = region_from_measures(measure_bundle(ch, d), kind, CodingKind::Adaptive);
        for (const auto& v : r.vertices) {
            REQUIRE(contains(r, v, 1e-9));
            REQUIRE(contains(r, {v.R1 * 0.5, v.R2 * 0.5}, 1e-9));  // downward closure
            REQUIRE(contains(r, {v.R1, 0.0}, 1e-9));
        }
        // Midpoints of vertex pairs stay inside (convexity).
        for (size_t i = 0; i < r.vertices.size(); ++i)
            for (size_t j = i + 1; j < r.vertices.size(); ++j)
                REQUIRE(contains(r,
                                 {(r.vertices[i].R1 + r.vertices[j].R1) / 2,
                                  (r.vertices[i].R2 + r.vertices[j].R2) / 2},
                                 1e-9));
    }
}

TEST_CASE("membership basics") {
    RateRegion r = region_from_measures(bundle_of(1.0, 0.8, 0.1, 0.1, 0.3),
                                        SecrecyKind::Joint, CodingKind::Adaptive);
    REQUIRE(contains(r, {0.0, 0.0}));
    for (const auto& v : r.vertices) {
        REQUIRE(contains(r, v, 1e-9));
        if (v.R1 + v.R2 > 0.1)
            REQUIRE_FALSE(contains(r, {v.R1 * 1.01, v.R2 * 1.01}, 1e-9));
    }
}

TEST_CASE("additive channel bundle matches the closed forms") {
    AdditiveSpec spec;
    spec.q = 2;
    spec.n1_pmf = {0.9, 0.1};
    spec.n2_pmf = {0.8, 0.2};
    spec.n3_pmf = {0.7, 0.3};
    Channel ch = build_additive(spec);
    MeasureBundle m = measure_bundle(ch, uniform_identity_distribution(ch));
    double ln2 = std::log(2.0);
    REQUIRE(m.i_y1v2_x1 == Catch::Approx(ln2 - binary_entropy_nats(0.1)).margin(1e-12));
    REQUIRE(m.i_y2v1_x2 == Catch::Approx(ln2 - binary_entropy_nats(0.2)).margin(1e-12));
    REQUIRE(m.i_z_v1 == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(m.i_z_v2 == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(m.i_z_v1v2 == Catch::Approx(ln2 - binary_entropy_nats(0.3)).margin(1e-12));
}

TEST_CASE("user relabeling swaps the bundle") {
    Rng rng(37);
    Channel ch = random_channel(rng, 2, 2, 2, 2, 2);
    InputDistribution d = uniform_identity_distribution(ch);
    Channel swapped(2, 2, 2, 2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int dd = 0; dd < 2; ++dd)
                    for (int e = 0; e < 2; ++e) swapped.at(b, a, dd, c, e) = ch.at(a, b, c, dd, e);
    MeasureBundle m = measure_bundle(ch, d);
    MeasureBundle ms = measure_bundle(swapped, d);
    REQUIRE(ms.i_y2v1_x2 == Catch::Approx(m.i_y1v2_x1).margin(1e-12));
    REQUIRE(ms.i_y1v2_x1 == Catch::Approx(m.i_y2v1_x2).margin(1e-12));
    REQUIRE(ms.i_z_v1 == Catch::Approx(m.i_z_v2).margin(1e-12));
    REQUIRE(ms.i_z_v2 == Catch::Approx(m.i_z_v1).margin(1e-12));
    REQUIRE(ms.i_z_v1v2 == Catch::Approx(m.i_z_v1v2).margin(1e-12));
}

TEST_CASE("search is reproducible and monotone across coding") {
    Channel ch(2, 2, 2, 2, 1);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) ch.at(a, b, b, a, 0) = 1.0;
    ch.validate();
    SearchOptions opt;
    opt.samples = 60;
    opt.refine_steps = 10;
    opt.seed = 5;
    RateRegion r1 = search_union(ch, SecrecyKind::Joint, CodingKind::Adaptive, opt);
    RateRegion r2 = search_union(ch, SecrecyKind::Joint, CodingKind::Adaptive, opt);
    REQUIRE(r1.vertices.size() == r2.vertices.size());
    for (size_t i = 0; i < r1.vertices.size(); ++i) {
        REQUIRE(r1.vertices[i].R1 == r2.vertices[i].R1);  // bit-for-bit
        REQUIRE(r1.vertices[i].R2 == r2.vertices[i].R2);
    }
    RateRegion rn = search_union(ch, SecrecyKind::Joint, CodingKind::NonAdaptive, opt);
    REQUIRE(region_subset(rn, r1, 1e-9));
}

TEST_CASE("noiseless channel search approaches the ln2 x ln2 rectangle") {
    Channel ch(2, 2, 2, 2, 1);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) ch.at(a, b, b, a, 0) = 1.0;
    ch.validate();
    SearchOptions opt;
    opt.samples = 150;
    opt.refine_steps = 40;
    opt.seed = 9;
    RateRegion r = search_union(ch, SecrecyKind::Joint, CodingKind::Adaptive, opt);
    double ln2 = std::log(2.0);
    REQUIRE(contains(r, {ln2 * 0.98, ln2 * 0.98}, 1e-9));
}

TEST_CASE("search budget cap") {
    Channel ch(2, 2, 2, 2, 1);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) ch.at(a, b, b, a, 0) = 1.0;
    ch.validate();
    SearchOptions opt;
    opt.samples = 1000;
    opt.sample_cap = 10;
    REQUIRE_THROWS_AS(search_union(ch, SecrecyKind::Joint, CodingKind::Adaptive, opt),
                      BudgetExceeded);
}
