#pragma once

#include <algorithm>
#include <cctype>
#include <limits>
#include <string>
#include <vector>

#include "twwc/pmf.hpp"

namespace twwc {

// Order offset s: the up-measure uses Renyi order 1+s in (1,2], the
// down-measure uses order 1/(1+s) in [1/2,1). Lemmas hold for s in (0,1].
struct RenyiOrderOffset {
    double s;
    explicit RenyiOrderOffset(double s_) : s(s_) {
        if (!(s > 0.0) || s > 1.0) throw Error("RenyiOrderOffset: s must be in (0,1]");
    }
};

namespace detail {

// Collapses a joint pmf into one dimension per axis group.
inline NdArray collapse(const JointPmf& p, const std::vector<std::vector<std::string>>& groups) {
    std::vector<std::vector<int>> axes(groups.size());
    std::vector<int> dims(groups.size(), 1);
    for (size_t g = 0; g < groups.size(); ++g) {
        for (const auto& name : groups[g]) {
            int a = p.axis(name);
            axes[g].push_back(a);
            dims[g] *= p.sizes()[a];
        }
    }
    NdArray out(dims);
    std::vector<int> gi(groups.size());
    p.tensor().for_each_index([&](std::span<const int> idx) {
        for (size_t g = 0; g < groups.size(); ++g) {
            int v = 0;
            for (int a : axes[g]) v = v * p.sizes()[size_t(a)] + idx[size_t(a)];
            gi[g] = v;
        }
        out.at(gi) += p.tensor().at(idx);
    });
    return out;
}

}  // namespace detail

// I^up_{1+s}(A;B) = D_{1+s}(P_AB || P_A x P_B), log-sum-exp stabilized.
inline double renyi_mi_up(const JointPmf& p, const std::vector<std::string>& a,
                          const std::vector<std::string>& b, RenyiOrderOffset s) {
    NdArray pab = detail::collapse(p, {a, b});
    int na = pab.dims()[0], nb = pab.dims()[1];
    std::vector<double> pa(na, 0.0), pb(nb, 0.0);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            std::array<int, 2> idx{i, j};
            pa[i] += pab.at(idx);
            pb[j] += pab.at(idx);
        }
    std::vector<double> expo;
    expo.reserve(size_t(na) * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            std::array<int, 2> idx{i, j};
            double pij = pab.at(idx);
            if (pij <= 0.0) continue;  // 0^(1+s) := 0
            if (pa[i] <= 0.0 || pb[j] <= 0.0)
                throw DegenerateSupport("renyi_mi_up: joint mass outside marginal support");
            expo.push_back((1.0 + s.s) * std::log(pij) - s.s * (std::log(pa[i]) + std::log(pb[j])));
        }
    if (expo.empty()) throw DegenerateSupport("renyi_mi_up: empty support");
    double m = *std::max_element(expo.begin(), expo.end());
    double acc = 0.0;
    for (double e : expo) acc += std::exp(e - m);
    return (m + std::log(acc)) / s.s;
}

// I^down_{1/(1+s)}(Z;X|Y) via the explicit tilted-sum form:
//   exp(-s I) = sum_y P(y) sum_z ( sum_x P(x|y) P(z|x,y)^{1/(1+s)} )^{1+s}.
// Zero-probability y are skipped (contribute 0 to the outer sum).
inline double cond_renyi_mi_down(const JointPmf& p, const std::vector<std::string>& zg,
                                 const std::vector<std::string>& xg,
                                 const std::vector<std::string>& yg, RenyiOrderOffset s) {
    NdArray t = detail::collapse(p, {zg, xg, yg});
    int nz = t.dims()[0], nx = t.dims()[1], ny = t.dims()[2];
    double inv = 1.0 / (1.0 + s.s);
    double total = 0.0;
    for (int y = 0; y < ny; ++y) {
        double py = 0.0;
        for (int z = 0; z < nz; ++z)
            for (int x = 0; x < nx; ++x) {
                std::array<int, 3> idx{z, x, y};
                py += t.at(idx);
            }
        if (py <= 0.0) continue;
        std::vector<double> pxy(nx, 0.0);
        for (int x = 0; x < nx; ++x)
            for (int z = 0; z < nz; ++z) {
                std::array<int, 3> idx{z, x, y};
                pxy[x] += t.at(idx);
            }
        double sum_z = 0.0;
        for (int z = 0; z < nz; ++z) {
            double inner = 0.0;
            for (int x = 0; x < nx; ++x) {
                if (pxy[x] <= 0.0) continue;
                std::array<int, 3> idx{z, x, y};
                double pz_xy = t.at(idx) / pxy[x];
                if (pz_xy <= 0.0) continue;
                inner += (pxy[x] / py) * std::pow(pz_xy, inv);
            }
            sum_z += std::pow(inner, 1.0 + s.s);
        }
        total += py * sum_z;
    }
    if (total <= 0.0) throw DegenerateSupport("cond_renyi_mi_down: empty support");
    return -std::log(total) / s.s;
}

// Unconditional down-measure I^down_{1/(1+s)}(Z;X); equals the conditional
// form with a singleton conditioning coordinate.
inline double renyi_mi_down(const JointPmf& p, const std::vector<std::string>& zg,
                            const std::vector<std::string>& xg, RenyiOrderOffset s) {
    NdArray t = detail::collapse(p, {zg, xg});
    int nz = t.dims()[0], nx = t.dims()[1];
    double inv = 1.0 / (1.0 + s.s);
    std::vector<double> px(nx, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int z = 0; z < nz; ++z) {
            std::array<int, 2> idx{z, x};
            px[x] += t.at(idx);
        }
    double total = 0.0;
    for (int z = 0; z < nz; ++z) {
        double inner = 0.0;
        for (int x = 0; x < nx; ++x) {
            if (px[x] <= 0.0) continue;
            std::array<int, 2> idx{z, x};
            double pz_x = t.at(idx) / px[x];
            if (pz_x <= 0.0) continue;
            inner += px[x] * std::pow(pz_x, inv);
        }
        total += std::pow(inner, 1.0 + s.s);
    }
    if (total <= 0.0) throw DegenerateSupport("renyi_mi_down: empty support");
    return -std::log(total) / s.s;
}

// Renyi relative entropy of order 1/(1+s) on flat vectors:
//   D_{1/(1+s)}(P||Q) = -((1+s)/s) log sum_x P^{1/(1+s)} Q^{s/(1+s)}.
inline double renyi_div_down(std::span<const double> p, std::span<const double> q, double s) {
    double a = 1.0 / (1.0 + s), b = s / (1.0 + s);
    double acc = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        acc += std::pow(p[i], a) * std::pow(q[i], b);
    }
    if (acc <= 0.0) return std::numeric_limits<double>::infinity();
    return -((1.0 + s) / s) * std::log(acc);
}

enum class MinimizerMode { Conditional, Joint };

// Closed-form minimizer of the down-measure objective:
//   Q*(z|y) proportional to ( sum_x P(x|y) P(z|x,y)^{1/(1+s)} )^{1+s}.
// The outer 1+s power follows from the stationarity condition of
// max_Q sum_z a_z Q_z^{s/(1+s)}; plugging Q* into the objective reproduces
// the tilted-sum value (sum_z a_z^{1+s})^{1/(1+s)} per conditioning symbol,
// hence cond_renyi_mi_down. Conditional mode returns Q*(z|y) P(y) as a joint
// over (Z*,Y*); joint mode returns Q*_{ZY} with the analogous tilt under P_X.
inline JointPmf minimizer_q(const JointPmf& p, const std::vector<std::string>& zg,
                            const std::vector<std::string>& xg, const std::vector<std::string>& yg,
                            RenyiOrderOffset s, MinimizerMode mode) {
    NdArray t = detail::collapse(p, {zg, xg, yg});
    int nz = t.dims()[0], nx = t.dims()[1], ny = t.dims()[2];
    double inv = 1.0 / (1.0 + s.s);
    JointPmf out({"Z*", "Y*"}, {nz, ny});
    if (mode == MinimizerMode::Conditional) {
        for (int y = 0; y < ny; ++y) {
            double py = 0.0;
            std::vector<double> pxy(nx, 0.0);
            for (int x = 0; x < nx; ++x)
                for (int z = 0; z < nz; ++z) {
                    std::array<int, 3> idx{z, x, y};
                    pxy[x] += t.at(idx);
                    py += t.at(idx);
                }
            if (py <= 0.0) continue;
            std::vector<double> tilted(nz, 0.0);
            double norm = 0.0;
            for (int z = 0; z < nz; ++z) {
                for (int x = 0; x < nx; ++x) {
                    if (pxy[x] <= 0.0) continue;
                    std::array<int, 3> idx{z, x, y};
                    double pz_xy = t.at(idx) / pxy[x];
                    if (pz_xy <= 0.0) continue;
                    tilted[z] += (pxy[x] / py) * std::pow(pz_xy, inv);
                }
                tilted[z] = std::pow(tilted[z], 1.0 + s.s);
                norm += tilted[z];
            }
            for (int z = 0; z < nz; ++z) {
                std::array<int, 2> idx{z, y};
                out.tensor().at(idx) = py * tilted[z] / norm;
            }
        }
    } else {
        // Q*_{ZY}(z,y) proportional to ( sum_x P(x) P(z,y|x)^{1/(1+s)} )^{1+s}
        std::vector<double> px(nx, 0.0);
        for (int x = 0; x < nx; ++x)
            for (int z = 0; z < nz; ++z)
                for (int y = 0; y < ny; ++y) {
                    std::array<int, 3> idx{z, x, y};
                    px[x] += t.at(idx);
                }
        double norm = 0.0;
        for (int z = 0; z < nz; ++z)
            for (int y = 0; y < ny; ++y) {
                double acc = 0.0;
                for (int x = 0; x < nx; ++x) {
                    if (px[x] <= 0.0) continue;
                    std::array<int, 3> idx{z, x, y};
                    double pzy_x = t.at(idx) / px[x];
                    if (pzy_x <= 0.0) continue;
                    acc += px[x] * std::pow(pzy_x, inv);
                }
                std::array<int, 2> idx{z, y};
                out.tensor().at(idx) = std::pow(acc, 1.0 + s.s);
                norm += out.tensor().at(idx);
            }
        for (size_t i = 0; i < out.tensor().size(); ++i) out.tensor()[i] /= norm;
    }
    return out;
}

// Objective behind the conditional down-measure definition, evaluated at an
// arbitrary conditional family Q(z|y) (passed as a joint over (Z*,Y*) whose
// Y-marginal is ignored):  -(1/s) log sum_y P(y) exp(-s D_{1/(1+s)}(P_{ZX|y} || Q_{.|y} x P_{X|y})).
inline double down_objective_conditional(const JointPmf& p, const std::vector<std::string>& zg,
                                         const std::vector<std::string>& xg,
                                         const std::vector<std::string>& yg, RenyiOrderOffset s,
                                         const JointPmf& q) {
    NdArray t = detail::collapse(p, {zg, xg, yg});
    int nz = t.dims()[0], nx = t.dims()[1], ny = t.dims()[2];
    if (q.sizes() != std::vector<int>{nz, ny}) throw DimensionError("down_objective: Q shape");
    std::vector<double> qy(ny, 0.0);
    for (int y = 0; y < ny; ++y)
        for (int z = 0; z < nz; ++z) {
            std::array<int, 2> idx{z, y};
            qy[y] += q.tensor().at(idx);
        }
    double total = 0.0;
    for (int y = 0; y < ny; ++y) {
        double py = 0.0;
        for (int z = 0; z < nz; ++z)
            for (int x = 0; x < nx; ++x) {
                std::array<int, 3> idx{z, x, y};
                py += t.at(idx);
            }
        if (py <= 0.0) continue;
        std::vector<double> pj(size_t(nz) * nx), qj(size_t(nz) * nx);
        for (int z = 0; z < nz; ++z)
            for (int x = 0; x < nx; ++x) {
                std::array<int, 3> idx{z, x, y};
                std::array<int, 2> qidx{z, y};
                double px_y = 0.0;
                for (int zz = 0; zz < nz; ++zz) {
                    std::array<int, 3> i2{zz, x, y};
                    px_y += t.at(i2);
                }
                pj[size_t(z) * nx + x] = t.at(idx) / py;
                qj[size_t(z) * nx + x] =
                    (qy[y] > 0.0 ? q.tensor().at(qidx) / qy[y] : 0.0) * (px_y / py);
            }
        double d = renyi_div_down(pj, qj, s.s);
        total += py * std::exp(-s.s * d);
    }
    return -std::log(total) / s.s;
}

// Objective behind the joint-minimizer form (valid route when X is
// independent of Y): D_{1/(1+s)}(P_{ZYX} || Q_{ZY} x P_X).
inline double down_objective_joint(const JointPmf& p, const std::vector<std::string>& zg,
                                   const std::vector<std::string>& xg,
                                   const std::vector<std::string>& yg, RenyiOrderOffset s,
                                   const JointPmf& q) {
    NdArray t = detail::collapse(p, {zg, xg, yg});
    int nz = t.dims()[0], nx = t.dims()[1], ny = t.dims()[2];
    if (q.sizes() != std::vector<int>{nz, ny}) throw DimensionError("down_objective: Q shape");
    std::vector<double> px(nx, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int z = 0; z < nz; ++z)
            for (int y = 0; y < ny; ++y) {
                std::array<int, 3> idx{z, x, y};
                px[x] += t.at(idx);
            }
    std::vector<double> pj, qj;
    pj.reserve(size_t(nz) * nx * ny);
    qj.reserve(pj.capacity());
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                std::array<int, 3> idx{z, x, y};
                std::array<int, 2> qidx{z, y};
                pj.push_back(t.at(idx));
                qj.push_back(q.tensor().at(qidx) * px[x]);
            }
    return renyi_div_down(pj, qj, s.s);
}

// ---- Shannon query language -------------------------------------------
// expr  := item (('+'|'-') item)*
// item  := number | 'H' '(' names ('|' names)? ')' | 'I' '(' names ';' names ('|' names)? ')'
// names := ident (',' ident)*
namespace detail {

struct QueryLexer {
    const std::string& s;
    size_t i = 0;
    explicit QueryLexer(const std::string& str) : s(str) {}
    void skip() {
        while (i < s.size() && std::isspace(uint8_t(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw ParseError("query: expected '" + std::string(1, c) + "' at position " +
                             std::to_string(i));
    }
    std::string ident() {
        skip();
        size_t j = i;
        while (j < s.size() && (std::isalnum(uint8_t(s[j])) || s[j] == '_')) ++j;
        if (j == i) throw ParseError("query: expected identifier at position " + std::to_string(i));
        std::string out = s.substr(i, j - i);
        i = j;
        return out;
    }
    std::vector<std::string> names() {
        std::vector<std::string> out{ident()};
        while (eat(',')) out.push_back(ident());
        return out;
    }
    bool done() {
        skip();
        return i >= s.size();
    }
};

}  // namespace detail

// Evaluates entropy / mutual-information expressions such as
// "H(X)", "H(Z|X1)", "I(Z;X1)", "I(Y2;V1|X2)", "I(Z;V1,V2) - I(Z;V1)".
inline double shannon_quantities(const JointPmf& p, const std::string& query) {
    detail::QueryLexer lex(query);
    double acc = 0.0;
    double sign = 1.0;
    bool first = true;
    while (true) {
        lex.skip();
        if (lex.done()) {
            if (first) throw ParseError("query: empty expression");
            break;
        }
        if (!first) {
            if (lex.eat('+'))
                sign = 1.0;
            else if (lex.eat('-'))
                sign = -1.0;
            else
                throw ParseError("query: expected '+' or '-' at position " + std::to_string(lex.i));
        }
        lex.skip();
        if (lex.i < lex.s.size() && (std::isdigit(uint8_t(lex.s[lex.i])) || lex.s[lex.i] == '.')) {
            size_t used = 0;
            double v = std::stod(lex.s.substr(lex.i), &used);
            lex.i += used;
            acc += sign * v;
        } else {
            std::string head = lex.ident();
            lex.expect('(');
            if (head == "H") {
                auto a = lex.names();
                if (lex.eat('|')) {
                    auto c = lex.names();
                    lex.expect(')');
                    acc += sign * (p.entropy(cat(a, c)) - p.entropy(c));
                } else {
                    lex.expect(')');
                    acc += sign * p.entropy(a);
                }
            } else if (head == "I") {
                auto a = lex.names();
                lex.expect(';');
                auto b = lex.names();
                if (lex.eat('|')) {
                    auto c = lex.names();
                    lex.expect(')');
                    acc += sign * conditional_mutual_information(p, a, b, c);
                } else {
                    lex.expect(')');
                    acc += sign * mutual_information(p, a, b);
                }
            } else {
                throw ParseError("query: unknown quantity '" + head + "'");
            }
        }
        first = false;
    }
    return acc;
}

}  // namespace twwc
