#pragma once

#include <cmath>
#include <cstdint>
#include <charconv>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twwc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct StochasticityError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct UnknownCoordinate : Error { using Error::Error; };
struct DegenerateSupport : Error { using Error::Error; };
struct SplitInfeasible : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct EmptyGrid : Error { using Error::Error; };
struct NonPrimeField : Error { using Error::Error; };
struct ZeroCoefficient : Error { using Error::Error; };
struct AlphabetMismatch : Error { using Error::Error; };
struct DuplicateSymbol : Error { using Error::Error; };
struct UnsupportedMinMaxDirection : Error { using Error::Error; };
struct RationalOverflow : Error { using Error::Error; };

// 0*log(0) := 0 throughout; all information quantities are in nats.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline double binary_entropy_nats(double p) {
    return -xlogx(p) - xlogx(1.0 - p);
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives a substream seed; used for per-worker RNG streams.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Deterministic RNG. Draw helpers are hand-rolled (std::*_distribution is
// implementation-defined and would break bit-for-bit reproducibility claims).
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    double unit() {  // uniform in [0,1), 53-bit
        return double(eng_() >> 11) * 0x1.0p-53;
    }

    uint64_t below(uint64_t n) {  // uniform in [0,n)
        if (n <= 1) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % n;
    }

    int sample_pmf(std::span<const double> p) {  // inverse CDF
        double u = unit();
        double acc = 0.0;
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            acc += p[i];
            if (u < acc) return int(i);
        }
        return int(p.size()) - 1;
    }

    double gaussian() {  // Box-Muller, deterministic
        double u1 = unit(), u2 = unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

  private:
    std::mt19937_64 eng_;
};

// Wilson 95% score interval halfwidth for k successes in n trials.
inline double wilson_halfwidth(uint64_t k, uint64_t n) {
    if (n == 0) return 1.0;
    const double z = 1.959963984540054;  // Phi^-1(0.975)
    double nn = double(n), ph = double(k) / nn;
    double denom = 1.0 + z * z / nn;
    double half = (z / denom) * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn));
    return half;
}

// Shortest exact decimal representation (round-trips through strtod).
inline std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace twwc
