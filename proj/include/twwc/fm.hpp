#pragma once

// Symbolic linear inequalities over rate variables and opaque information-
// measure constants, with exact rational arithmetic. Input language is
// line-oriented:
//
//   term (+|-) term ... (<|<=|=|>|>=) term ...
//
// where a term is an optional rational coefficient followed by a rate
// identifier, a quoted or I(...)-style symbol atom, min(a,b), max(a,b), or a
// bare rational literal. Directives: #assume, #eliminate, #nonneg.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "twwc/common.hpp"
#include "twwc/rational.hpp"

namespace twwc::fm {

struct LinearForm {
    std::map<std::string, Rational> vars;  // rate variables
    std::map<std::string, Rational> syms;  // opaque symbol atoms
    Rational constant;

    void add_var(const std::string& n, const Rational& c) {
        auto it = vars.emplace(n, Rational(0)).first;
        it->second += c;
        if (it->second.is_zero()) vars.erase(it);
    }
    void add_sym(const std::string& n, const Rational& c) {
        auto it = syms.emplace(n, Rational(0)).first;
        it->second += c;
        if (it->second.is_zero()) syms.erase(it);
    }
    LinearForm& operator+=(const LinearForm& o) {
        for (const auto& [n, c] : o.vars) add_var(n, c);
        for (const auto& [n, c] : o.syms) add_sym(n, c);
        constant += o.constant;
        return *this;
    }
    friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
    LinearForm scaled(const Rational& f) const {
        LinearForm out;
        if (f.is_zero()) return out;
        for (const auto& [n, c] : vars) out.vars.emplace(n, c * f);
        for (const auto& [n, c] : syms) out.syms.emplace(n, c * f);
        out.constant = constant * f;
        return out;
    }
    LinearForm negated() const { return scaled(Rational(-1)); }
    bool empty() const { return vars.empty() && syms.empty() && constant.is_zero(); }
    Rational var_coef(const std::string& n) const {
        auto it = vars.find(n);
        return it == vars.end() ? Rational(0) : it->second;
    }
    bool operator==(const LinearForm& o) const {
        return vars == o.vars && syms == o.syms && constant == o.constant;
    }
};

enum class MinMaxKind { None, Min, Max };

// Normalized inequality: base [+ min/max(args)] >= 0, optionally strict.
// Equalities are split into two inequalities at parse time.
struct Inequality {
    LinearForm base;
    MinMaxKind mm = MinMaxKind::None;
    std::vector<LinearForm> mm_args;
    bool strict = false;

    bool has_minmax() const { return mm != MinMaxKind::None; }
    bool pure_symbolic() const { return base.vars.empty() && !has_minmax(); }
};

struct SymbolicSystem {
    std::vector<Inequality> ineqs;
    std::vector<Inequality> assumptions;       // symbol atoms only, no rate vars
    std::vector<std::string> eliminate_order;  // from #eliminate
    std::vector<std::string> nonneg;           // from #nonneg
};

// ---- Canonical form ------------------------------------------------------

// Rate-variable ordering: R1 < R2 < everything else lexicographic.
inline bool var_less(const std::string& a, const std::string& b) {
    auto rank = [](const std::string& v) { return v == "R1" ? 0 : v == "R2" ? 1 : 2; };
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
}

// Integer-scaled coprime coefficient key (strictness excluded: the final
// regions pass between open constraints and their closures).
inline std::string canonical_key(const Inequality& q) {
    long long lcm = 1;
    auto fold = [&](const Rational& r) {
        long long d = r.den();
        long long g = std::gcd(lcm, d);
        lcm = lcm / g * d;
    };
    for (const auto& [n, c] : q.base.vars) fold(c);
    for (const auto& [n, c] : q.base.syms) fold(c);
    fold(q.base.constant);
    long long gcd = 0;
    auto gfold = [&](const Rational& r) {
        long long v = r.num() * (lcm / r.den());
        gcd = std::gcd(gcd, v < 0 ? -v : v);
    };
    for (const auto& [n, c] : q.base.vars) gfold(c);
    for (const auto& [n, c] : q.base.syms) gfold(c);
    gfold(q.base.constant);
    if (gcd == 0) gcd = 1;
    std::ostringstream os;
    std::vector<std::pair<std::string, Rational>> vs(q.base.vars.begin(), q.base.vars.end());
    std::sort(vs.begin(), vs.end(),
              [](const auto& a, const auto& b) { return var_less(a.first, b.first); });
    for (const auto& [n, c] : vs) os << n << ":" << c.num() * (lcm / c.den()) / gcd << ";";
    os << "|";
    for (const auto& [n, c] : q.base.syms) os << n << ":" << c.num() * (lcm / c.den()) / gcd << ";";
    os << "|" << q.base.constant.num() * (lcm / q.base.constant.den()) / gcd;
    if (q.has_minmax()) {
        os << "|" << (q.mm == MinMaxKind::Min ? "min" : "max");
        std::vector<std::string> keys;
        for (const auto& a : q.mm_args) {
            Inequality tmp;
            tmp.base = a;
            keys.push_back(canonical_key(tmp));
        }
        std::sort(keys.begin(), keys.end());
        for (const auto& k : keys) os << "{" << k << "}";
    }
    return os.str();
}

inline void sort_canonical(std::vector<Inequality>& v) {
    std::sort(v.begin(), v.end(), [](const Inequality& a, const Inequality& b) {
        return canonical_key(a) < canonical_key(b);
    });
}

// Merge duplicates (strictness OR: the strict member is the binding one) and
// drop tautologies with no variables and no symbols.
inline void dedupe(std::vector<Inequality>& v) {
    std::vector<Inequality> out;
    for (auto& q : v) {
        if (q.base.vars.empty() && q.base.syms.empty() && !q.has_minmax()) {
            bool holds = q.strict ? q.base.constant.is_positive() : !q.base.constant.is_negative();
            if (holds) continue;  // tautology
        }
        bool merged = false;
        std::string key = canonical_key(q);
        for (auto& e : out)
            if (canonical_key(e) == key) {
                e.strict = e.strict || q.strict;
                merged = true;
                break;
            }
        if (!merged) out.push_back(std::move(q));
    }
    v = std::move(out);
    sort_canonical(v);
}

// ---- Printing -------------------------------------------------------------

inline std::string form_to_string(const LinearForm& f, bool lead_zero = true) {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& name, const Rational& c) {
        Rational a = c.is_negative() ? -c : c;
        if (first) {
            if (c.is_negative()) os << "-";
        } else {
            os << (c.is_negative() ? " - " : " + ");
        }
        if (!(a == Rational(1)) || name.empty()) os << a.str() << (name.empty() ? "" : " ");
        os << name;
        first = false;
    };
    std::vector<std::pair<std::string, Rational>> vs(f.vars.begin(), f.vars.end());
    std::sort(vs.begin(), vs.end(),
              [](const auto& a, const auto& b) { return var_less(a.first, b.first); });
    for (const auto& [n, c] : vs) emit(n, c);
    for (const auto& [n, c] : f.syms) emit(n, c);
    if (!f.constant.is_zero() || (first && lead_zero)) emit("", f.constant);
    return os.str();
}

// Renders base + mm >= 0 in the conventional layout: rate terms on the left,
// symbolic bound on the right ("R1 + R2 < A + B - C").
inline std::string to_string(const Inequality& q) {
    LinearForm lhs;  // negated variable part
    for (const auto& [n, c] : q.base.vars) lhs.vars.emplace(n, -c);
    LinearForm rhs;
    rhs.syms = q.base.syms;
    rhs.constant = q.base.constant;
    std::ostringstream os;
    std::string mmtxt;
    if (q.has_minmax()) {
        std::ostringstream ms;
        ms << (q.mm == MinMaxKind::Min ? "min(" : "max(");
        for (size_t i = 0; i < q.mm_args.size(); ++i)
            ms << (i ? ", " : "") << form_to_string(q.mm_args[i]);
        ms << ")";
        mmtxt = ms.str();
    }
    os << form_to_string(lhs);
    os << (q.strict ? " < " : " <= ");
    os << form_to_string(rhs);
    if (!mmtxt.empty()) os << " + " << mmtxt;
    return os.str();
}

inline std::string to_string(const std::vector<Inequality>& v) {
    std::ostringstream os;
    for (const auto& q : v) os << to_string(q) << "\n";
    return os.str();
}

// ---- Parser ----------------------------------------------------------------

namespace detail {

struct LineParser {
    const std::string& s;
    size_t pos = 0;
    int line;
    explicit LineParser(const std::string& text, int ln) : s(text), line(ln) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(pos + 1) +
                         ": " + msg);
    }
    void skip() {
        while (pos < s.size() && std::isspace(uint8_t(s[pos]))) ++pos;
    }
    bool done() {
        skip();
        return pos >= s.size();
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat_word(const std::string& w) {
        skip();
        if (s.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }

    Rational rational_literal() {
        skip();
        size_t j = pos;
        while (j < s.size() && std::isdigit(uint8_t(s[j]))) ++j;
        if (j == pos) fail("expected number");
        long long num = std::stoll(s.substr(pos, j - pos));
        pos = j;
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            size_t k = pos;
            while (k < s.size() && std::isdigit(uint8_t(s[k]))) ++k;
            if (k == pos) fail("expected denominator");
            long long den = std::stoll(s.substr(pos, k - pos));
            pos = k;
            return Rational(num, den);
        }
        return Rational(num);
    }

    std::string identifier() {
        skip();
        size_t j = pos;
        while (j < s.size() && (std::isalnum(uint8_t(s[j])) || s[j] == '_')) ++j;
        if (j == pos) fail("expected identifier");
        std::string out = s.substr(pos, j - pos);
        pos = j;
        return out;
    }

    // Symbol atom: I(...) with balanced parens, or a double-quoted string.
    // Whitespace inside is dropped so "I(Z;V1, V2)" and "I(Z;V1,V2)" coincide.
    std::string symbol_atom_from(size_t start) {
        size_t j = start;
        int depth = 0;
        for (; j < s.size(); ++j) {
            if (s[j] == '(') ++depth;
            if (s[j] == ')') {
                --depth;
                if (depth == 0) break;
            }
        }
        if (depth != 0) fail("unbalanced parentheses in symbol atom");
        std::string raw = s.substr(start, j + 1 - start);
        pos = j + 1;
        std::string out;
        for (char c : raw)
            if (!std::isspace(uint8_t(c))) out.push_back(c);
        return out;
    }
};

}  // namespace detail

// Parses one linear expression (sum of signed terms) up to a relation symbol
// or end of line. mm receives at most one min/max term.
inline LinearForm parse_expr(detail::LineParser& lp, MinMaxKind* mm, std::vector<LinearForm>* args,
                             Rational* mm_coef) {
    LinearForm out;
    bool first = true;
    while (true) {
        lp.skip();
        if (lp.done()) break;
        char c = lp.peek();
        if (c == '<' || c == '>' || c == '=' || c == ',' || c == ')') break;
        Rational sign(1);
        if (lp.eat('+')) {
        } else if (lp.eat('-')) {
            sign = Rational(-1);
        } else if (!first) {
            lp.fail("expected '+' or '-' between terms");
        }
        lp.skip();
        Rational coef = sign;
        c = lp.peek();
        if (std::isdigit(uint8_t(c))) {
            coef = sign * lp.rational_literal();
            lp.eat('*');
            lp.skip();
            c = lp.peek();
            if (!(std::isalpha(uint8_t(c)) || c == '_' || c == '"')) {  // bare literal
                out.constant += coef;
                first = false;
                continue;
            }
        }
        if (c == '"') {
            ++lp.pos;
            size_t j = lp.s.find('"', lp.pos);
            if (j == std::string::npos) lp.fail("unterminated quoted symbol");
            std::string name = lp.s.substr(lp.pos, j - lp.pos);
            lp.pos = j + 1;
            out.add_sym(name, coef);
        } else {
            size_t id_start = lp.pos;
            std::string id = lp.identifier();
            lp.skip();
            if ((id == "min" || id == "max") && lp.peek() == '(') {
                if (!mm) lp.fail("min/max not allowed here");
                if (*mm != MinMaxKind::None) lp.fail("at most one min/max term per inequality");
                lp.eat('(');
                *mm = (id == "min") ? MinMaxKind::Min : MinMaxKind::Max;
                *mm_coef = coef;
                while (true) {
                    args->push_back(parse_expr(lp, nullptr, nullptr, nullptr));
                    if (lp.eat(',')) continue;
                    if (lp.eat(')')) break;
                    lp.fail("expected ',' or ')' in min/max");
                }
                if (args->size() < 2) lp.fail("min/max needs at least two arguments");
            } else if (lp.pos < lp.s.size() && lp.s[lp.pos] == '(') {
                // I(...)-style atom; re-scan from the identifier start
                lp.pos = id_start;
                std::string name = lp.symbol_atom_from(id_start);
                out.add_sym(name, coef);
            } else {
                out.add_var(id, coef);
            }
        }
        first = false;
    }
    return out;
}

// Parses "expr REL expr" into one (or, for '=', two) normalized inequalities.
inline std::vector<Inequality> parse_inequality_line(const std::string& text, int line_no) {
    detail::LineParser lp(text, line_no);
    MinMaxKind mm_l = MinMaxKind::None, mm_r = MinMaxKind::None;
    std::vector<LinearForm> args_l, args_r;
    Rational coef_l(1), coef_r(1);
    LinearForm lhs = parse_expr(lp, &mm_l, &args_l, &coef_l);

    int rel;  // -2: <  -1: <=  0: =  1: >=  2: >
    if (lp.eat_word("<=")) rel = -1;
    else if (lp.eat_word(">=")) rel = 1;
    else if (lp.eat_word("<")) rel = -2;
    else if (lp.eat_word(">")) rel = 2;
    else if (lp.eat_word("=")) rel = 0;
    else lp.fail("expected relation (<, <=, =, >=, >)");

    LinearForm rhs = parse_expr(lp, &mm_r, &args_r, &coef_r);
    if (!lp.done()) lp.fail("trailing input after inequality");
    if (mm_l != MinMaxKind::None && mm_r != MinMaxKind::None)
        lp.fail("at most one min/max term per inequality");

    // Everything to the left: diff = lhs - rhs (REL) 0.
    LinearForm diff = lhs + rhs.negated();
    MinMaxKind mm = mm_l;
    std::vector<LinearForm> args = args_l;
    Rational mcoef = coef_l;
    if (mm_r != MinMaxKind::None) {
        mm = mm_r;
        args = args_r;
        mcoef = -coef_r;
    }

    auto normalize = [&](bool flip, bool strict) {
        // flip: diff REL 0 becomes -diff >= 0.
        Inequality q;
        q.base = flip ? diff.negated() : diff;
        q.strict = strict;
        if (mm != MinMaxKind::None) {
            Rational c = flip ? -mcoef : mcoef;
            if (c.is_zero()) return q;
            // c*min(A,B) = min(cA,cB) for c>0, = max(cA,cB) for c<0.
            bool is_min = (mm == MinMaxKind::Min) == c.is_positive();
            q.mm = is_min ? MinMaxKind::Min : MinMaxKind::Max;
            for (const auto& a : args) q.mm_args.push_back(a.scaled(c));
        }
        return q;
    };

    std::vector<Inequality> out;
    switch (rel) {
        case -2: out.push_back(normalize(true, true)); break;
        case -1: out.push_back(normalize(true, false)); break;
        case 2: out.push_back(normalize(false, true)); break;
        case 1: out.push_back(normalize(false, false)); break;
        case 0:
            if (mm != MinMaxKind::None) lp.fail("min/max not supported in equalities");
            out.push_back(normalize(false, false));
            out.push_back(normalize(true, false));
            break;
    }
    return out;
}

inline SymbolicSystem parse_system(const std::string& text) {
    SymbolicSystem sys;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        size_t c = line.find("//");
        if (c != std::string::npos) line = line.substr(0, c);
        std::string trimmed = line;
        size_t b = trimmed.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        trimmed = trimmed.substr(b);
        if (trimmed[0] == '#') {
            std::istringstream ds(trimmed);
            std::string directive;
            ds >> directive;
            std::string rest;
            std::getline(ds, rest);
            if (directive == "#assume") {
                for (auto& q : parse_inequality_line(rest, line_no)) {
                    if (!q.base.vars.empty() || q.has_minmax())
                        throw ParseError("line " + std::to_string(line_no) +
                                         ": assumptions may reference symbol atoms only");
                    sys.assumptions.push_back(std::move(q));
                }
            } else if (directive == "#eliminate" || directive == "#nonneg") {
                auto& dst = directive == "#eliminate" ? sys.eliminate_order : sys.nonneg;
                std::string tok;
                std::istringstream vs(rest);
                while (std::getline(vs, tok, ',')) {
                    size_t s0 = tok.find_first_not_of(" \t");
                    size_t s1 = tok.find_last_not_of(" \t");
                    if (s0 == std::string::npos) continue;
                    std::string name = tok.substr(s0, s1 - s0 + 1);
                    if (std::find(dst.begin(), dst.end(), name) != dst.end())
                        throw DuplicateSymbol("line " + std::to_string(line_no) +
                                              ": duplicate variable " + name);
                    dst.push_back(name);
                }
            } else {
                continue;  // plain comment
            }
        } else {
            for (auto& q : parse_inequality_line(trimmed, line_no)) sys.ineqs.push_back(std::move(q));
        }
    }
    return sys;
}

}  // namespace twwc::fm
