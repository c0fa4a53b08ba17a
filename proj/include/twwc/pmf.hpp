#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "twwc/common.hpp"

namespace twwc {

// Dense row-major array over a small multi-index.
class NdArray {
  public:
    NdArray() = default;
    explicit NdArray(std::vector<int> dims, double fill = 0.0)
        : dims_(std::move(dims)) {
        size_t n = 1;
        for (int d : dims_) {
            if (d < 1) throw DimensionError("NdArray: dimension must be >= 1");
            n *= size_t(d);
        }
        data_.assign(n, fill);
    }

    const std::vector<int>& dims() const { return dims_; }
    size_t size() const { return data_.size(); }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& operator[](size_t i) { return data_[i]; }
    double operator[](size_t i) const { return data_[i]; }

    size_t offset(std::span<const int> idx) const {
        size_t off = 0;
        for (size_t k = 0; k < dims_.size(); ++k) off = off * size_t(dims_[k]) + size_t(idx[k]);
        return off;
    }
    double& at(std::span<const int> idx) { return data_[offset(idx)]; }
    double at(std::span<const int> idx) const { return data_[offset(idx)]; }

    // Calls f(idx) for every multi-index in row-major order.
    template <class F>
    void for_each_index(F&& f) const {
        std::vector<int> idx(dims_.size(), 0);
        size_t n = size();
        for (size_t flat = 0; flat < n; ++flat) {
            f(std::span<const int>(idx));
            for (int k = int(dims_.size()) - 1; k >= 0; --k) {
                if (++idx[k] < dims_[k]) break;
                idx[k] = 0;
            }
        }
    }

    bool operator==(const NdArray& o) const { return dims_ == o.dims_ && data_ == o.data_; }

  private:
    std::vector<int> dims_;
    std::vector<double> data_;
};

// Joint pmf over up to a handful of named coordinates.
class JointPmf {
  public:
    JointPmf() = default;
    JointPmf(std::vector<std::string> names, std::vector<int> sizes)
        : names_(std::move(names)), p_(std::move(sizes)) {
        if (names_.size() != p_.dims().size())
            throw DimensionError("JointPmf: name/size count mismatch");
        for (size_t i = 0; i < names_.size(); ++i)
            for (size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j]) throw DuplicateSymbol("JointPmf: duplicate axis " + names_[i]);
    }

    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& sizes() const { return p_.dims(); }
    NdArray& tensor() { return p_; }
    const NdArray& tensor() const { return p_; }

    int axis(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return int(i);
        throw UnknownCoordinate("unknown coordinate: " + name);
    }

    void validate(double tol = 1e-12) const {
        double s = 0.0;
        for (size_t i = 0; i < p_.size(); ++i) {
            if (p_[i] < 0.0) throw StochasticityError("JointPmf: negative entry");
            s += p_[i];
        }
        if (std::fabs(s - 1.0) > tol) throw StochasticityError("JointPmf: total " + fmt_double(s));
    }

    JointPmf marginal(const std::vector<std::string>& keep) const {
        std::vector<int> axes;
        std::vector<int> sizes;
        for (const auto& n : keep) {
            int a = axis(n);
            axes.push_back(a);
            sizes.push_back(p_.dims()[a]);
        }
        JointPmf out(keep, sizes);
        std::vector<int> sub(keep.size());
        p_.for_each_index([&](std::span<const int> idx) {
            for (size_t k = 0; k < axes.size(); ++k) sub[k] = idx[size_t(axes[k])];
            out.p_.at(sub) += p_.at(idx);
        });
        return out;
    }

    // Entropy of a subset of coordinates (nats).
    double entropy(const std::vector<std::string>& coords) const {
        JointPmf m = marginal(coords);
        double h = 0.0;
        for (size_t i = 0; i < m.p_.size(); ++i) h -= xlogx(m.p_[i]);
        return h;
    }

    double entropy_all() const {
        double h = 0.0;
        for (size_t i = 0; i < p_.size(); ++i) h -= xlogx(p_[i]);
        return h;
    }

  private:
    std::vector<std::string> names_;
    NdArray p_;
};

inline std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// I(A;B) = H(A) + H(B) - H(A,B)
inline double mutual_information(const JointPmf& p, const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
    return p.entropy(a) + p.entropy(b) - p.entropy(cat(a, b));
}

// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
inline double conditional_mutual_information(const JointPmf& p, const std::vector<std::string>& a,
                                             const std::vector<std::string>& b,
                                             const std::vector<std::string>& c) {
    if (c.empty()) return mutual_information(p, a, b);
    return p.entropy(cat(a, c)) + p.entropy(cat(b, c)) - p.entropy(cat(cat(a, b), c)) - p.entropy(c);
}

}  // namespace twwc
