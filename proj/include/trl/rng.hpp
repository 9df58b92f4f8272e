#pragma once

#include <cstdint>
#include <random>

namespace trl {

// Deterministic sampling layer. std::mt19937_64 pins the bit stream on every
// platform, but the std::*_distribution transforms do not, so draws are
// derived by hand: uniforms from the top 53 bits, normals by the Marsaglia
// polar method, gammas by Marsaglia-Tsang. Same seed, same stream, anywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive on both ends.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(span));
        if (k >= span) k = span - 1;
        return lo + static_cast<std::int64_t>(k);
    }

    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Gamma(shape) with unit scale; shape > 0.
    double gamma(double shape);

    // Gamma with the given mean and variance mean^2 / shape.
    double gamma_mean(double shape, double mean) { return gamma(shape) * (mean / shape); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace trl
