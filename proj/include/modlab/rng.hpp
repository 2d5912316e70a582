#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace modlab {

// Seeded random source for test ensembles. Gaussian variates are produced by
// an explicit Box-Muller step on top of mt19937_64 so that a given seed yields
// the same stream on every platform (std::normal_distribution does not
// guarantee that).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53-bit mantissa in [0, 1)
        return (engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    double gaussian() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 2.0 * M_PI * u2;
        spare_ = r * std::sin(phi);
        haveSpare_ = true;
        return r * std::cos(phi);
    }

    std::complex<double> complexGaussian() {
        return {gaussian(), gaussian()};
    }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
    bool haveSpare_ = false;
    double spare_ = 0.0;
};

} // namespace modlab
