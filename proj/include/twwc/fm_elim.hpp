#pragma once

// Fourier-Motzkin elimination, min/max expansion, and assumption-driven
// redundancy pruning for the symbolic systems in fm.hpp.

#include <array>
#include <functional>
#include <optional>

#include "twwc/fm.hpp"

namespace twwc::fm {

// base + min(args) >= 0 is the conjunction over args; base + max(args) >= 0 is
// a disjunction and produces one case system per argument. Conjunctive-only
// callers reject the disjunctive direction.
inline std::vector<SymbolicSystem> expand_minmax(const SymbolicSystem& sys,
                                                 bool conjunctive_only = true) {
    std::vector<SymbolicSystem> cases(1);
    cases[0] = sys;
    cases[0].ineqs.clear();
    for (const auto& q : sys.ineqs) {
        if (!q.has_minmax()) {
            for (auto& cs : cases) cs.ineqs.push_back(q);
            continue;
        }
        if (q.mm == MinMaxKind::Min) {
            for (auto& cs : cases)
                for (const auto& a : q.mm_args) {
                    Inequality e;
                    e.base = q.base + a;
                    e.strict = q.strict;
                    cs.ineqs.push_back(std::move(e));
                }
        } else {
            if (conjunctive_only)
                throw UnsupportedMinMaxDirection(
                    "expand_minmax: max on the lower-bound side needs a case split");
            std::vector<SymbolicSystem> next;
            for (const auto& cs : cases)
                for (const auto& a : q.mm_args) {
                    SymbolicSystem branch = cs;
                    Inequality e;
                    e.base = q.base + a;
                    e.strict = q.strict;
                    branch.ineqs.push_back(std::move(e));
                    next.push_back(std::move(branch));
                }
            cases = std::move(next);
        }
    }
    for (auto& cs : cases) dedupe(cs.ineqs);
    return cases;
}

// Standard FM step: pair every lower bound on var with every upper bound.
// The combined inequality is strict iff either parent is strict. Inequalities
// not mentioning var pass through; eliminating an absent var is the identity.
inline SymbolicSystem eliminate(const SymbolicSystem& sys, const std::string& var) {
    for (const auto& q : sys.ineqs)
        if (q.has_minmax()) throw Error("eliminate: expand min/max terms first");
    SymbolicSystem out = sys;
    out.ineqs.clear();
    std::vector<const Inequality*> lowers, uppers;
    for (const auto& q : sys.ineqs) {
        Rational c = q.base.var_coef(var);
        if (c.is_zero())
            out.ineqs.push_back(q);
        else if (c.is_positive())
            lowers.push_back(&q);
        else
            uppers.push_back(&q);
    }
    for (const auto* lo : lowers)
        for (const auto* up : uppers) {
            Rational cl = lo->base.var_coef(var);
            Rational cu = up->base.var_coef(var);
            Inequality e;
            e.base = lo->base.scaled(-cu) + up->base.scaled(cl);
            e.strict = lo->strict || up->strict;
            out.ineqs.push_back(std::move(e));
        }
    dedupe(out.ineqs);
    return out;
}

namespace detail {

// Exact solve of sum_j lambda_j * col_j = target over the rationals by
// Gaussian elimination; free unknowns are pinned to zero.
inline std::optional<std::vector<Rational>> solve_exact(
    std::vector<std::vector<Rational>> cols, std::vector<Rational> target) {
    size_t rows = target.size(), ncol = cols.size();
    std::vector<size_t> pivot_col(rows, SIZE_MAX);
    size_t r = 0;
    for (size_t c = 0; c < ncol && r < rows; ++c) {
        size_t pr = SIZE_MAX;
        for (size_t i = r; i < rows; ++i)
            if (!cols[c][i].is_zero()) {
                pr = i;
                break;
            }
        if (pr == SIZE_MAX) continue;
        for (size_t cc = 0; cc < ncol; ++cc) std::swap(cols[cc][pr], cols[cc][r]);
        std::swap(target[pr], target[r]);
        Rational piv = cols[c][r];
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || cols[c][i].is_zero()) continue;
            Rational f = cols[c][i] / piv;
            for (size_t cc = c; cc < ncol; ++cc) cols[cc][i] -= cols[cc][r] * f;
            target[i] -= target[r] * f;
        }
        pivot_col[r] = c;
        ++r;
    }
    std::vector<Rational> lambda(ncol, Rational(0));
    for (size_t i = 0; i < r; ++i) lambda[pivot_col[i]] = target[i] / cols[pivot_col[i]][i];
    // Consistency: rows past rank must have zero residual.
    for (size_t i = r; i < rows; ++i)
        if (!target[i].is_zero()) return std::nullopt;
    return lambda;
}

}  // namespace detail

// Farkas-style certificate: target is redundant if its coefficient vector is a
// nonnegative rational combination of at most max_support pool members with
// leftover constant >= 0. Sound but deliberately incomplete (small supports
// suffice for the systems at hand); strictness is ignored, matching the
// closure convention used for the final regions.
inline bool certify_redundant(const Inequality& target, const std::vector<Inequality>& pool,
                              int max_support = 4) {
    std::vector<std::string> dims_v, dims_s;
    auto note = [&](const Inequality& q) {
        for (const auto& [n, c] : q.base.vars)
            if (std::find(dims_v.begin(), dims_v.end(), n) == dims_v.end()) dims_v.push_back(n);
        for (const auto& [n, c] : q.base.syms)
            if (std::find(dims_s.begin(), dims_s.end(), n) == dims_s.end()) dims_s.push_back(n);
    };
    note(target);
    for (const auto& q : pool) note(q);
    size_t rows = dims_v.size() + dims_s.size();
    auto vec_of = [&](const Inequality& q) {
        std::vector<Rational> v(rows, Rational(0));
        for (size_t i = 0; i < dims_v.size(); ++i) v[i] = q.base.var_coef(dims_v[i]);
        for (size_t i = 0; i < dims_s.size(); ++i) {
            auto it = q.base.syms.find(dims_s[i]);
            if (it != q.base.syms.end()) v[dims_v.size() + i] = it->second;
        }
        return v;
    };
    std::vector<Rational> tvec = vec_of(target);

    size_t np = pool.size();
    std::vector<size_t> subset;
    std::function<bool(size_t)> rec = [&](size_t start) -> bool {
        if (!subset.empty()) {
            std::vector<std::vector<Rational>> cols;
            std::vector<Rational> consts;
            for (size_t j : subset) {
                cols.push_back(vec_of(pool[j]));
                consts.push_back(pool[j].base.constant);
            }
            auto lam = detail::solve_exact(cols, tvec);
            if (lam) {
                bool ok = true;
                Rational used(0);
                for (size_t k = 0; k < lam->size(); ++k) {
                    if ((*lam)[k].is_negative()) {
                        ok = false;
                        break;
                    }
                    used += (*lam)[k] * consts[k];
                }
                if (ok && !(target.base.constant - used).is_negative()) return true;
            }
        }
        if (int(subset.size()) == max_support) return false;
        for (size_t j = start; j < np; ++j) {
            subset.push_back(j);
            if (rec(j + 1)) return true;
            subset.pop_back();
        }
        return false;
    };
    return rec(0);
}

namespace detail {

// Support-1 special case: identical coefficient direction, larger constant.
// Cheap pre-filter before the subset search.
inline void drop_dominated(std::vector<Inequality>& v) {
    std::vector<Inequality> out;
    for (const auto& q : v) {
        Inequality dir = q;
        dir.base.constant = Rational(0);
        std::string key = canonical_key(dir);
        bool replaced = false, dominated = false;
        for (auto& e : out) {
            Inequality edir = e;
            edir.base.constant = Rational(0);
            if (canonical_key(edir) != key) continue;
            // Same direction up to positive scale; compare constants per unit.
            Rational qs, es;
            auto first_coef = [](const Inequality& x) {
                if (!x.base.vars.empty()) return x.base.vars.begin()->second;
                if (!x.base.syms.empty()) return x.base.syms.begin()->second;
                return Rational(1);
            };
            Rational fq = first_coef(q), fe = first_coef(e);
            if (fq.is_zero() || fe.is_zero()) continue;
            qs = q.base.constant / fq;
            es = e.base.constant / fe;
            bool same_sign = fq.is_positive() == fe.is_positive();
            if (!same_sign) continue;
            if (qs < es) {
                e = q;  // q is tighter
                replaced = true;
            } else {
                dominated = true;
            }
            break;
        }
        if (!replaced && !dominated) out.push_back(q);
    }
    v = std::move(out);
    sort_canonical(v);
}

}  // namespace detail

// Removes inequalities certified redundant from the surviving set plus
// assumptions plus ambient nonnegativity of the listed variables. Support
// sizes escalate so the cheap certificates run first; inability to certify
// leaves the inequality in place.
inline SymbolicSystem prune_redundant(const SymbolicSystem& sys,
                                      const std::vector<std::string>& ambient_nonneg = {},
                                      int max_support = 4) {
    SymbolicSystem out = sys;
    dedupe(out.ineqs);
    detail::drop_dominated(out.ineqs);
    std::vector<Inequality> extra = sys.assumptions;
    for (const auto& v : ambient_nonneg) {
        Inequality q;
        q.base.add_var(v, Rational(1));
        extra.push_back(std::move(q));
    }
    for (int support = 1; support <= max_support; ++support) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < out.ineqs.size(); ++i) {
                std::vector<Inequality> pool;
                for (size_t j = 0; j < out.ineqs.size(); ++j)
                    if (j != i) pool.push_back(out.ineqs[j]);
                pool.insert(pool.end(), extra.begin(), extra.end());
                if (certify_redundant(out.ineqs[i], pool, support)) {
                    out.ineqs.erase(out.ineqs.begin() + long(i));
                    changed = true;
                    break;
                }
            }
        }
    }
    return out;
}

// ---- Full pipeline ---------------------------------------------------------

struct PipelineResult {
    SymbolicSystem projected;            // surviving rate-variable inequalities
    std::vector<Inequality> conditions;  // pure-symbol side conditions from the elimination
    std::vector<std::string> trace;      // one line per elimination step
};

// parse -> expand (conjunctive) -> add #nonneg bounds -> eliminate in order ->
// split off symbol-only conditions -> drop ambient bounds of the surviving
// variables -> prune with assumptions.
inline PipelineResult run_pipeline(const SymbolicSystem& input, bool prune = true) {
    auto cases = expand_minmax(input, true);
    SymbolicSystem sys = cases.front();
    for (const auto& v : sys.nonneg) {
        Inequality q;
        q.base.add_var(v, Rational(1));
        sys.ineqs.push_back(std::move(q));
    }
    dedupe(sys.ineqs);

    PipelineResult res;
    const std::vector<std::string> order = sys.eliminate_order;
    for (const auto& var : order) {
        sys = eliminate(sys, var);
        size_t raw = sys.ineqs.size();
        // Intermediate pruning keeps FM from piling up implied rows; removing
        // an implied inequality never changes the projection.
        sys = prune_redundant(sys, {}, 3);
        res.trace.push_back("eliminated " + var + ": " + std::to_string(raw) + " -> " +
                            std::to_string(sys.ineqs.size()) + " inequalities");
    }

    // Surviving variables: whatever is still referenced.
    std::vector<std::string> remaining;
    for (const auto& q : sys.ineqs)
        for (const auto& [n, c] : q.base.vars)
            if (std::find(remaining.begin(), remaining.end(), n) == remaining.end())
                remaining.push_back(n);
    std::sort(remaining.begin(), remaining.end(), var_less);

    SymbolicSystem rate;
    rate.assumptions = sys.assumptions;
    for (const auto& q : sys.ineqs) {
        if (q.pure_symbolic()) {
            res.conditions.push_back(q);
            continue;
        }
        // Ambient quadrant bound "v >= 0"?
        if (q.base.syms.empty() && q.base.constant.is_zero() && q.base.vars.size() == 1 &&
            q.base.vars.begin()->second.is_positive())
            continue;
        rate.ineqs.push_back(q);
    }
    dedupe(res.conditions);
    // Conditions implied by the declared assumptions are dropped.
    if (prune) {
        std::vector<Inequality> kept;
        for (size_t i = 0; i < res.conditions.size(); ++i) {
            std::vector<Inequality> pool = rate.assumptions;
            for (size_t j = 0; j < res.conditions.size(); ++j)
                if (j != i) pool.push_back(res.conditions[j]);
            if (!certify_redundant(res.conditions[i], pool)) kept.push_back(res.conditions[i]);
        }
        res.conditions = std::move(kept);
        rate = prune_redundant(rate, remaining);
    } else {
        dedupe(rate.ineqs);
    }
    res.projected = std::move(rate);
    return res;
}

// ---- Random-instantiation checks -------------------------------------------

using Assignment = std::map<std::string, Rational>;

inline Rational eval_form(const LinearForm& f, const Assignment& vars, const Assignment& syms) {
    Rational acc = f.constant;
    for (const auto& [n, c] : f.vars) {
        auto it = vars.find(n);
        if (it == vars.end()) throw Error("eval_form: unassigned variable " + n);
        acc += c * it->second;
    }
    for (const auto& [n, c] : f.syms) {
        auto it = syms.find(n);
        if (it == syms.end()) throw Error("eval_form: unassigned symbol " + n);
        acc += c * it->second;
    }
    return acc;
}

inline bool holds(const Inequality& q, const Assignment& vars, const Assignment& syms) {
    Rational v = eval_form(q.base, vars, syms);
    if (q.has_minmax()) {
        Rational best = eval_form(q.mm_args[0], vars, syms);
        for (size_t i = 1; i < q.mm_args.size(); ++i) {
            Rational a = eval_form(q.mm_args[i], vars, syms);
            if (q.mm == MinMaxKind::Min ? a < best : a > best) best = a;
        }
        v += best;
    }
    return q.strict ? v.is_positive() : !v.is_negative();
}

inline bool system_feasible_at(const std::vector<Inequality>& ineqs, const Assignment& vars,
                               const Assignment& syms) {
    for (const auto& q : ineqs)
        if (!holds(q, vars, syms)) return false;
    return true;
}

// Soundness of one elimination step at a random point: the post-system holds
// at the assigned point iff the 1-D interval for the eliminated variable in
// the pre-system is nonempty.
inline bool check_elimination_step(const SymbolicSystem& pre, const SymbolicSystem& post,
                                   const std::string& var, const Assignment& vars,
                                   const Assignment& syms) {
    bool post_ok = system_feasible_at(post.ineqs, vars, syms);

    bool lo_set = false, hi_set = false, lo_strict = false, hi_strict = false;
    Rational lo, hi;
    bool fixed_violated = false;
    for (const auto& q : pre.ineqs) {
        Rational c = q.base.var_coef(var);
        LinearForm rest = q.base;
        rest.vars.erase(var);
        Rational rv = eval_form(rest, vars, syms);
        if (c.is_zero()) {
            if (!(q.strict ? rv.is_positive() : !rv.is_negative())) fixed_violated = true;
        } else if (c.is_positive()) {
            Rational bound = -rv / c;  // var >= bound
            if (!lo_set || bound > lo) {
                lo = bound;
                lo_strict = q.strict;
                lo_set = true;
            } else if (bound == lo) {
                lo_strict = lo_strict || q.strict;
            }
        } else {
            Rational bound = -rv / c;  // var <= bound
            if (!hi_set || bound < hi) {
                hi = bound;
                hi_strict = q.strict;
                hi_set = true;
            } else if (bound == hi) {
                hi_strict = hi_strict || q.strict;
            }
        }
    }
    bool pre_ok = !fixed_violated;
    if (pre_ok && lo_set && hi_set) {
        if (lo > hi) pre_ok = false;
        else if (lo == hi && (lo_strict || hi_strict)) pre_ok = false;
    }
    return post_ok == pre_ok;
}

}  // namespace twwc::fm
