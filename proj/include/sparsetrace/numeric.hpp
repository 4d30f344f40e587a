#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

namespace sparsetrace {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Cx = std::complex<double>;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline long to_long(const Int& v) { return v.convert_to<long>(); }

Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + tag * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random source. Raw mt19937_64 output is converted to doubles
// directly so that streams are identical across standard library
// implementations (std::uniform_real_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform modulus in [0.5, 1.5), uniform phase
    Cx annulus() {
        double m = 0.5 + unit();
        double p = 6.283185307179586476925286766559 * unit();
        return {m * std::cos(p), m * std::sin(p)};
    }

    Cx unit_circle() {
        double p = 6.283185307179586476925286766559 * unit();
        return {std::cos(p), std::sin(p)};
    }

    std::uint64_t raw() { return engine_(); }

    // Independent child stream; deterministic function of (seed, tag).
    Rng fork(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace sparsetrace
