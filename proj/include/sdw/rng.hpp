#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sdw {

// Seeded generator with hand-rolled transforms so that streams are
// bit-identical across platforms (std::normal_distribution is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform on (0,1], 53-bit resolution.
    double u01() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller; two uniforms per draw, no caching.
    double gaussian() {
        const double u1 = u01();
        const double u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Uniform on [-a, a].
    double uniform_sym(double a) { return a * (2.0 * u01() - 1.0); }

    // Laplace with scale b (variance 2 b^2), by inverse CDF.
    double laplace(double b) {
        const double u = u01() - 0.5;
        const double s = u < 0.0 ? -1.0 : 1.0;
        return -b * s * std::log1p(-2.0 * std::abs(u));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace sdw
