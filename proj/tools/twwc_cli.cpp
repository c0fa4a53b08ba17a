// Command-line front end: channel ingestion, information measures, exponent
// sweeps, rate regions, Fourier-Motzkin runs, protocol simulation, and the
// additive-channel toolbox. Machine-readable output by default; all
// quantities in nats unless --bits is given where supported.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "twwc/fm_fixtures.hpp"
#include "twwc/report_io.hpp"

using namespace twwc;

namespace {

struct OutputSink {
    std::string path;  // empty: stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (text.empty() || text.back() != '\n') std::cout << "\n";
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw Error("cannot open output file: " + path);
            f << text;
        }
    }
};

std::vector<double> parse_s_grid(const std::string& spec) {
    if (spec.empty()) return default_s_grid();
    double start, stop, step;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':')
        throw Error("--s-grid expects start:stop:step");
    std::vector<double> g;
    for (double s = start; s <= stop + 1e-12; s += step) g.push_back(s);
    if (g.empty()) throw EmptyGrid("--s-grid produced no points");
    return g;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

InputDistribution dist_or_uniform(const Channel& ch, const std::string& path) {
    if (path.empty()) return uniform_identity_distribution(ch);
    return load_dist_file(path);
}

int run_measures(const std::string& channel_path, const std::string& dist_path,
                 const std::string& query, bool bundle, double s_val, const OutputSink& out) {
    Channel ch = load_channel_file(channel_path);
    InputDistribution d = dist_or_uniform(ch, dist_path);
    JointPmf j = joint_pmf(ch, d);
    json rep{{"units", "nats"}};
    if (!query.empty()) rep["query"] = {{"expr", query}, {"value", shannon_quantities(j, query)}};
    if (bundle) rep["bundle"] = measure_bundle_to_json(measure_bundle(ch, d));
    if (s_val > 0.0) {
        RenyiOrderOffset s(s_val);
        SingleLetterRenyi q = single_letter_renyi(j, s);
        rep["renyi"] = {{"s", s_val},
                        {"I_down(Y2;V1|X2)", q.i_down_y2_v1_x2},
                        {"I_down(Y1;V2|X1)", q.i_down_y1_v2_x1},
                        {"I_up(Z;V1)", q.i_up_z_v1},
                        {"I_up(Z;V2)", q.i_up_z_v2},
                        {"I_up(Z;V1,V2)", q.i_up_z_v1v2}};
    }
    out.write(rep.dump(2) + "\n");
    return 0;
}

int run_exponents(const std::string& channel_path, const std::string& dist_path,
                  const std::vector<double>& rates, const std::vector<double>& split_vals, int t,
                  const std::string& n_list, const std::string& s_grid_spec,
                  const std::string& format, bool curve, const OutputSink& out) {
    Channel ch = load_channel_file(channel_path);
    InputDistribution d = dist_or_uniform(ch, dist_path);
    std::vector<int> ns = parse_int_list(n_list);
    std::vector<double> grid = parse_s_grid(s_grid_spec);

    const bool adaptive = !split_vals.empty();
    RateSplit split;
    NonAdaptiveRates nar;
    if (adaptive) {
        if (split_vals.size() != 8)
            throw Error("--split expects R1s,R1k,R1e,R1o,R2s,R2k,R2e,R2o");
        split = RateSplit{split_vals[0], split_vals[1], split_vals[2], split_vals[3],
                          split_vals[4], split_vals[5], split_vals[6], split_vals[7]};
    } else {
        if (rates.size() != 4) throw Error("--rates expects R1,R2,R1r,R2r");
        nar = NonAdaptiveRates{rates[0], rates[1], rates[2], rates[3]};
    }

    auto bound_at = [&](int n, double s) {
        RenyiOrderOffset so(s);
        return adaptive ? adaptive_bounds(ch, d, split, n, t, so)
                        : nonadaptive_bounds(ch, d, nar, n, so);
    };

    json rows = json::array();
    std::string csv = bound_report_csv_header() + "\n";
    for (int n : ns) {
        auto [s_best, val] = optimize_order(
            [&](double s) {
                BoundReport b = bound_at(n, s);
                return b.error_bound + b.joint_leak_bound;
            },
            grid);
        (void)val;
        BoundReport best = bound_at(n, s_best);
        rows.push_back(bound_report_to_json(best));
        csv += bound_report_csv_row(best) + "\n";
        if (curve) {
            for (double s : grid) {
                BoundReport b = bound_at(n, s);
                csv += bound_report_csv_row(b) + "\n";
                rows.push_back(bound_report_to_json(b));
            }
        }
    }
    if (format == "csv")
        out.write(csv);
    else
        out.write(json{{"units", "nats"}, {"rows", rows}}.dump(2) + "\n");
    return 0;
}

int run_region(const std::string& channel_path, const std::string& dist_path,
               const std::string& kind, const std::string& coding, int search, uint64_t seed,
               int v1, int v2, bool bits, const std::string& format, const OutputSink& out) {
    Channel ch = load_channel_file(channel_path);
    SecrecyKind sec = kind == "individual" ? SecrecyKind::Individual : SecrecyKind::Joint;
    CodingKind cod = coding == "nonadaptive" ? CodingKind::NonAdaptive : CodingKind::Adaptive;
    RateRegion reg;
    if (search > 0) {
        SearchOptions opt;
        opt.samples = search;
        opt.seed = seed;
        opt.v1_size = v1;
        opt.v2_size = v2;
        reg = search_union(ch, sec, cod, opt);
    } else {
        InputDistribution d = dist_or_uniform(ch, dist_path);
        reg = region_from_measures(measure_bundle(ch, d), sec, cod);
    }
    if (format == "csv")
        out.write(region_vertices_csv(reg, bits));
    else
        out.write(region_to_json(reg, seed, bits).dump(2) + "\n");
    return 0;
}

int run_fm(const std::string& input_path, const std::string& fixture, int verify, uint64_t seed,
           const OutputSink& out) {
    std::ostringstream os;
    int exit_code = 0;
    if (!fixture.empty()) {
        fm::FixtureOutcome oc = fm::run_fixture(fixture);
        os << "fixture: " << fixture << "\n";
        for (const auto& line : oc.result.trace) os << "# " << line << "\n";
        os << "projected system:\n" << fm::to_string(oc.result.projected.ineqs);
        if (!oc.result.conditions.empty())
            os << "side conditions:\n" << fm::to_string(oc.result.conditions);
        os << (oc.matches ? "MATCH\n" : "MISMATCH\n");
        if (!oc.matches) {
            for (const auto& e : oc.unexpected) os << "unexpected: " << e << "\n";
            exit_code = 2;
        }
    } else {
        std::ifstream f(input_path);
        if (!f) throw Error("cannot open inequality file: " + input_path);
        std::stringstream ss;
        ss << f.rdbuf();
        fm::SymbolicSystem sys = fm::parse_system(ss.str());
        fm::PipelineResult res = fm::run_pipeline(sys);
        for (const auto& line : res.trace) os << "# " << line << "\n";
        os << "projected system:\n" << fm::to_string(res.projected.ineqs);
        if (!res.conditions.empty()) os << "side conditions:\n" << fm::to_string(res.conditions);
    }
    if (verify > 0) {
        // Stepwise random-instantiation soundness of every elimination step.
        fm::SymbolicSystem sys;
        if (!fixture.empty())
            sys = fm::parse_system(fixture == "appendix-a" ? fm::kJointSystemText
                                                           : fm::kIndividualSystemText);
        else {
            std::ifstream f(input_path);
            std::stringstream ss;
            ss << f.rdbuf();
            sys = fm::parse_system(ss.str());
        }
        auto cases = fm::expand_minmax(sys, true);
        fm::SymbolicSystem cur = cases.front();
        for (const auto& v : cur.nonneg) {
            fm::Inequality q;
            q.base.add_var(v, Rational(1));
            cur.ineqs.push_back(q);
        }
        Rng rng(derive_seed(seed, 0xf31a));
        uint64_t checked = 0, failed = 0;
        const std::vector<std::string> order = cur.eliminate_order;
        for (const auto& var : order) {
            fm::SymbolicSystem next = fm::eliminate(cur, var);
            for (int i = 0; i < verify; ++i) {
                fm::Assignment vars, syms;
                auto rnd = [&] {
                    return Rational(int64_t(rng.below(41)) - 20, int64_t(rng.below(4)) + 1);
                };
                for (const auto& q : cur.ineqs) {
                    for (const auto& [n, c] : q.base.vars)
                        if (n != var && !vars.count(n)) vars[n] = rnd();
                    for (const auto& [n, c] : q.base.syms)
                        if (!syms.count(n)) syms[n] = rnd();
                }
                ++checked;
                if (!fm::check_elimination_step(cur, next, var, vars, syms)) ++failed;
            }
            cur = next;
        }
        os << "verify: " << checked << " instantiations, " << failed << " failures\n";
        if (failed) exit_code = 2;
    }
    out.write(os.str());
    return exit_code;
}

int run_simulate(const std::string& mode, const std::string& channel_path,
                 const std::string& dist_path, int n, uint64_t code_seed, uint64_t seed,
                 uint64_t trials, int workers, const std::vector<int>& sizes, int t,
                 const std::string& leak_secret, bool exact_leak, bool compare_bounds,
                 uint64_t budget, const std::string& s_grid_spec, const OutputSink& out) {
    Channel ch = load_channel_file(channel_path);
    InputDistribution d = dist_or_uniform(ch, dist_path);
    std::vector<double> grid = parse_s_grid(s_grid_spec);
    json rep{{"units", "nats"}, {"seed", seed}, {"code_seed", code_seed}};

    if (mode == "nonadaptive") {
        if (sizes.size() != 4) throw Error("--sizes expects M1,L1,M2,L2 for nonadaptive mode");
        CodeParams p;
        p.n = n;
        p.M1 = sizes[0]; p.L1 = sizes[1]; p.M2 = sizes[2]; p.L2 = sizes[3];
        p.seed = code_seed;
        Codebook cb = build_code(ch, d, p);
        SimulationReport r = simulate_nonadaptive(ch, d, cb, trials, seed, workers);
        if (!leak_secret.empty()) {
            SecretParts sp;
            sp.m1 = leak_secret.find("m1") != std::string::npos;
            sp.l1 = leak_secret.find("l1") != std::string::npos;
            sp.m2 = leak_secret.find("m2") != std::string::npos;
            sp.l2 = leak_secret.find("l2") != std::string::npos;
            r.exact_leakage_nats = exact_leakage(ch, d, cb, sp, budget);
        }
        if (compare_bounds) {
            NonAdaptiveRates rates{std::log(double(p.M1)) / n, std::log(double(p.M2)) / n,
                                   std::log(double(p.L1)) / n, std::log(double(p.L2)) / n};
            auto [s_best, v] = optimize_order(
                [&](double s) {
                    BoundReport b = nonadaptive_bounds(ch, d, rates, n, RenyiOrderOffset(s));
                    return b.error_bound + b.joint_leak_bound;
                },
                grid);
            (void)v;
            r.bound_comparison = nonadaptive_bounds(ch, d, rates, n, RenyiOrderOffset(s_best));
        }
        rep.update(simulation_report_to_json(r));
    } else if (mode == "adaptive") {
        if (sizes.size() != 8)
            throw Error("--sizes expects Ms1,Mk1,Me1,Mo1,Ms2,Mk2,Me2,Mo2 for adaptive mode");
        AdaptiveSession sess;
        sess.t = t;
        sess.Ms1 = sizes[0]; sess.Mk1 = sizes[1]; sess.Me1 = sizes[2]; sess.Mo1 = sizes[3];
        sess.Ms2 = sizes[4]; sess.Mk2 = sizes[5]; sess.Me2 = sizes[6]; sess.Mo2 = sizes[7];
        CodeParams p;
        p.n = n;
        p.M1 = sess.Ms1 * sess.Mk1; p.L1 = sess.Me1 * sess.Mo1;
        p.M2 = sess.Ms2 * sess.Mk2; p.L2 = sess.Me2 * sess.Mo2;
        p.seed = code_seed;
        Codebook cb = build_code(ch, d, p);
        SimulationReport r = run_adaptive_session(ch, d, cb, sess, trials, seed);
        rep.update(simulation_report_to_json(r));
        if (exact_leak) rep["exact"] = adaptive_leakage_to_json(adaptive_exact_leakage(ch, d, cb, sess, budget));
    } else {
        throw Error("--mode must be nonadaptive or adaptive");
    }
    out.write(rep.dump(2) + "\n");
    return 0;
}

int run_additive(const std::string& spec_path, bool closed_forms, bool advantage,
                 bool emit_channel, bool virtual_mac, bool two_stage, int n1, int messages,
                 const std::string& convey_mode, int rep_k, uint64_t trials, uint64_t seed,
                 const OutputSink& out) {
    AdditiveSpec spec = load_additive_spec_file(spec_path);
    Channel ch = build_additive(spec);
    json rep{{"units", "nats"}, {"seed", seed}, {"q", spec.q}};
    std::vector<double> ux1(size_t(ch.x1), 1.0 / ch.x1), ux2(size_t(ch.x2), 1.0 / ch.x2);
    if (emit_channel) {
        out.write(save_channel(ch));
        return 0;
    }
    if (closed_forms) rep["closed_forms"] = closed_form_to_json(closed_form_report(spec));
    if (advantage) {
        rep["advantage"] = advantage_to_json(secrecy_advantage(ch, ux1, ux2));
        rep["virtual_mac_difference"] = virtual_mac_difference(ch, ux1, ux2);
    }
    if (virtual_mac) {
        Channel mac = induced_virtual_mac(ch, ux1, ux2);
        rep["virtual_mac"] = channel_to_json(mac);
    }
    if (two_stage) {
        ConveyanceMode m = convey_mode == "repetition" ? ConveyanceMode::Repetition
                                                       : ConveyanceMode::IdealPublic;
        rep["two_stage"] = two_stage_to_json(
            simulate_two_stage(ch, ux1, ux2, n1, messages, m, rep_k, trials, seed));
    }
    out.write(rep.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-way wiretap channel toolbox"};
    app.require_subcommand(1);

    std::string channel_path, dist_path, out_path, format = "json";
    uint64_t seed = 20240801;  // documented default seed
    uint64_t trials = 10000, budget = 10000000;
    int workers = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--channel", channel_path, "channel document (JSON)");
        sub->add_option("--dist", dist_path, "input distribution document (JSON)");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--trials", trials, "Monte Carlo trials");
        sub->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", out_path, "output path (default stdout)");
        sub->add_option("--workers", workers, "worker threads (default 1)");
        sub->add_option("--budget", budget, "enumeration budget");
    };

    // measures
    auto* m = app.add_subcommand("measures", "information measures of a channel + distribution");
    std::string query;
    bool bundle = false;
    double s_val = 0.0;
    add_common(m);
    m->add_option("--query", query, "Shannon expression, e.g. \"I(Z;V1)\"");
    m->add_flag("--bundle", bundle, "emit the five region measures");
    m->add_option("--s", s_val, "also emit the Renyi quantities at this order offset");

    // exponents
    auto* e = app.add_subcommand("exponents", "finite-n bound sweeps");
    std::vector<double> rates, split_vals;
    std::string n_list = "4,8,16", s_grid_spec;
    int t_rounds = 1;
    bool curve = false;
    add_common(e);
    e->add_option("--rates", rates, "R1,R2,R1r,R2r (nats/use)")->delimiter(',');
    e->add_option("--split", split_vals, "R1s,R1k,R1e,R1o,R2s,R2k,R2e,R2o")->delimiter(',');
    e->add_option("--t", t_rounds, "adaptive rounds");
    e->add_option("--n-list", n_list, "blocklengths");
    e->add_option("--s-grid", s_grid_spec, "start:stop:step");
    e->add_flag("--curve", curve, "emit the full s-curve per n");

    // region
    auto* r = app.add_subcommand("region", "achievable-rate regions");
    std::string kind = "joint", coding = "adaptive";
    int search = 0, v1 = 0, v2 = 0;
    bool bits = false;
    add_common(r);
    r->add_option("--kind", kind)->check(CLI::IsMember({"joint", "individual"}));
    r->add_option("--coding", coding)->check(CLI::IsMember({"adaptive", "nonadaptive"}));
    r->add_option("--search", search, "random-restart count for the union search");
    r->add_option("--v1", v1, "auxiliary alphabet size for user 1");
    r->add_option("--v2", v2, "auxiliary alphabet size for user 2");
    r->add_flag("--bits", bits, "emit bits instead of nats");

    // fm
    auto* f = app.add_subcommand("fm", "Fourier-Motzkin runs and fixtures");
    std::string fm_input, fixture;
    int verify = 0;
    add_common(f);
    f->add_option("--input", fm_input, "inequality file");
    f->add_option("--fixture", fixture)->check(CLI::IsMember({"appendix-a", "appendix-b"}));
    f->add_option("--verify", verify, "random instantiations per elimination step");

    // simulate
    auto* s = app.add_subcommand("simulate", "protocol Monte Carlo and exact leakage");
    std::string mode = "nonadaptive", leak_secret;
    std::vector<int> sizes;
    int n = 4, t_sim = 2;
    uint64_t code_seed = 1;
    bool exact_leak = false, compare_bounds = false;
    add_common(s);
    s->add_option("--mode", mode)->check(CLI::IsMember({"nonadaptive", "adaptive"}));
    s->add_option("--n", n, "blocklength per round");
    s->add_option("--t", t_sim, "adaptive rounds");
    s->add_option("--sizes", sizes, "index space sizes")->delimiter(',');
    s->add_option("--code-seed", code_seed, "codebook seed");
    s->add_option("--leakage", leak_secret, "exact leakage secret parts, e.g. m1m2");
    s->add_flag("--exact-leakage", exact_leak, "adaptive t=2 exact leakage");
    s->add_flag("--compare-bounds", compare_bounds, "attach the finite-n bounds");
    std::string sim_s_grid;
    s->add_option("--s-grid", sim_s_grid, "start:stop:step");

    // additive
    auto* a = app.add_subcommand("additive", "additive F_q channel toolbox");
    std::string spec_path, convey_mode = "ideal";
    bool closed_forms = false, advantage = false, emit_channel = false, virtual_mac = false,
         two_stage = false;
    int n1 = 8, messages = 4, rep_k = 3;
    add_common(a);
    a->add_option("--spec", spec_path, "additive spec (JSON)")->required();
    a->add_flag("--closed-forms", closed_forms, "closed forms vs generic evaluation");
    a->add_flag("--advantage", advantage, "secrecy advantages and the virtual-MAC difference");
    a->add_flag("--emit-channel", emit_channel, "write the built channel document");
    a->add_flag("--virtual-mac", virtual_mac, "emit the induced virtual MAC");
    a->add_flag("--two-stage", two_stage, "run the two-stage conversion demo");
    a->add_option("--n1", n1, "stage-1 channel uses");
    a->add_option("--messages", messages, "stage-1 message count");
    a->add_option("--convey", convey_mode)->check(CLI::IsMember({"ideal", "repetition"}));
    a->add_option("--rep-k", rep_k, "repetition factor for conveyance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage errors are validation errors
    }

    OutputSink out{out_path};
    try {
        if (m->parsed()) return run_measures(channel_path, dist_path, query, bundle, s_val, out);
        if (e->parsed())
            return run_exponents(channel_path, dist_path, rates, split_vals, t_rounds, n_list,
                                 s_grid_spec, format, curve, out);
        if (r->parsed())
            return run_region(channel_path, dist_path, kind, coding, search, seed, v1, v2, bits,
                              format, out);
        if (f->parsed()) return run_fm(fm_input, fixture, verify, seed, out);
        if (s->parsed())
            return run_simulate(mode, channel_path, dist_path, n, code_seed, seed, trials, workers,
                                sizes, t_sim, leak_secret, exact_leak, compare_bounds, budget,
                                sim_s_grid, out);
        if (a->parsed())
            return run_additive(spec_path, closed_forms, advantage, emit_channel, virtual_mac,
                                two_stage, n1, messages, convey_mode, rep_k, trials, seed, out);
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
