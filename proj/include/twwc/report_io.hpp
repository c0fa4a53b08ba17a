#pragma once

// JSON / CSV emission for reports and regions. All numeric output is in nats
// and carries the seed it was produced under; doubles are rendered with
// shortest exact decimals so reruns are byte-identical.

#include "twwc/additive.hpp"
#include "twwc/channel_io.hpp"
#include "twwc/exponents.hpp"
#include "twwc/protocol.hpp"
#include "twwc/regions.hpp"

namespace twwc {

inline json bound_report_to_json(const BoundReport& r) {
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({{"label", t.label}, {"rate", t.rate}});
    return json{{"units", "nats"},
                {"n", r.n},
                {"t", r.t},
                {"s_used", r.s_used},
                {"error_bound", r.error_bound},
                {"error_bound_ind", r.error_bound_ind},
                {"joint_leak_bound", r.joint_leak_bound},
                {"ind_leak_bound_1", r.ind_leak_bound_1},
                {"ind_leak_bound_2", r.ind_leak_bound_2},
                {"terms", terms}};
}

inline std::string bound_report_csv_header() {
    return "n,t,s_used,error_bound,error_bound_ind,joint_leak_bound,ind_leak_bound_1,ind_leak_bound_2";
}

inline std::string bound_report_csv_row(const BoundReport& r) {
    return std::to_string(r.n) + "," + std::to_string(r.t) + "," + fmt_double(r.s_used) + "," +
           fmt_double(r.error_bound) + "," + fmt_double(r.error_bound_ind) + "," +
           fmt_double(r.joint_leak_bound) + "," + fmt_double(r.ind_leak_bound_1) + "," +
           fmt_double(r.ind_leak_bound_2);
}

inline json simulation_report_to_json(const SimulationReport& r) {
    json j{{"units", "nats"},
           {"seed", r.seed},
           {"trials", r.trials},
           {"error_estimate", r.error_estimate},
           {"ci95_halfwidth", r.ci95_halfwidth}};
    if (r.exact_leakage_nats) j["exact_leakage_nats"] = *r.exact_leakage_nats;
    if (r.bound_comparison) j["bound_comparison"] = bound_report_to_json(*r.bound_comparison);
    if (r.effective_rate_1 > 0 || r.effective_rate_2 > 0) {
        j["effective_rate_1"] = r.effective_rate_1;
        j["effective_rate_2"] = r.effective_rate_2;
    }
    return j;
}

inline json region_to_json(const RateRegion& r, uint64_t seed, bool bits = false) {
    double f = bits ? 1.0 / std::log(2.0) : 1.0;
    json hs = json::array();
    for (const auto& h : r.halfspaces)
        hs.push_back({{"a1", h.a1}, {"a2", h.a2}, {"b", h.b * f}});
    json vs = json::array();
    for (const auto& v : r.vertices) vs.push_back({v.R1 * f, v.R2 * f});
    return json{{"units", bits ? "bits" : "nats"},
                {"seed", seed},
                {"clamped", r.clamped},
                {"halfspaces", hs},
                {"vertices", vs}};
}

inline std::string region_vertices_csv(const RateRegion& r, bool bits = false) {
    double f = bits ? 1.0 / std::log(2.0) : 1.0;
    std::string out = "R1,R2\n";
    for (const auto& v : r.vertices)
        out += fmt_double(v.R1 * f) + "," + fmt_double(v.R2 * f) + "\n";
    return out;
}

inline json measure_bundle_to_json(const MeasureBundle& m) {
    return json{{"units", "nats"},
                {"I(Y2;V1|X2)", m.i_y2v1_x2},
                {"I(Y1;V2|X1)", m.i_y1v2_x1},
                {"I(Z;V1)", m.i_z_v1},
                {"I(Z;V2)", m.i_z_v2},
                {"I(V1,V2;Z)", m.i_z_v1v2}};
}

inline json advantage_to_json(const AdvantageReport& a) {
    return json{{"units", "nats"},
                {"adv1", a.adv1},
                {"adv2", a.adv2},
                {"conditionally_independent", a.conditionally_independent}};
}

inline json closed_form_to_json(const ClosedFormReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"name", e.name}, {"closed", e.closed}, {"generic", e.generic}});
    return json{{"units", "nats"},
                {"entries", entries},
                {"adv1_closed", r.adv1_closed},
                {"adv1_generic", r.adv1_generic},
                {"adv2_closed", r.adv2_closed},
                {"adv2_generic", r.adv2_generic},
                {"max_abs_gap", r.max_abs_gap()}};
}

inline json two_stage_to_json(const TwoStageReport& r) {
    return json{{"units", "nats"},       {"seed", r.seed},
                {"trials", r.trials},    {"end_to_end_error", r.end_to_end_error},
                {"ci95_halfwidth", r.ci95_halfwidth}, {"stage1_error", r.stage1_error},
                {"conveyance_symbol_error", r.conveyance_symbol_error},
                {"n1", r.n1},            {"n2", r.n2},
                {"overhead", r.overhead}};
}

inline json adaptive_leakage_to_json(const AdaptiveLeakageReport& r) {
    return json{{"units", "nats"},
                {"joint_exact", r.joint_exact},
                {"ind1_exact", r.ind1_exact},
                {"ind2_exact", r.ind2_exact},
                {"round1_term", r.round1_term},
                {"round2_term", r.round2_term},
                {"per_round_sum", r.per_round_sum}};
}

inline json additive_spec_to_json(const AdditiveSpec& s) {
    return json{{"q", s.q},
                {"a", {s.a1, s.a2, s.a3}},
                {"b", {s.b1, s.b2, s.b3}},
                {"n1", s.n1_pmf},
                {"n2", s.n2_pmf},
                {"n3", s.n3_pmf}};
}

inline AdditiveSpec additive_spec_from_json(const json& j) {
    AdditiveSpec s;
    for (const char* k : {"q", "a", "b", "n1", "n2", "n3"})
        if (!j.contains(k)) throw ParseError(std::string("additive spec: missing field ") + k);
    s.q = j.at("q").get<int>();
    auto a = j.at("a").get<std::vector<int>>();
    auto b = j.at("b").get<std::vector<int>>();
    if (a.size() != 3 || b.size() != 3)
        throw DimensionError("additive spec: a and b must have three entries");
    s.a1 = a[0]; s.a2 = a[1]; s.a3 = a[2];
    s.b1 = b[0]; s.b2 = b[1]; s.b3 = b[2];
    s.n1_pmf = j.at("n1").get<std::vector<double>>();
    s.n2_pmf = j.at("n2").get<std::vector<double>>();
    s.n3_pmf = j.at("n3").get<std::vector<double>>();
    s.validate();
    return s;
}

inline AdditiveSpec load_additive_spec_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open additive spec file: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("additive spec: ") + e.what());
    }
    return additive_spec_from_json(j);
}

}  // namespace twwc
