#include "qpol/rng.hpp"

#include <cmath>

namespace qpol {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on two fresh uniforms; guard against log(0).
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

long Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 1000.0) {
        const double x = mean + std::sqrt(mean) * normal();
        return x < 0.0 ? 0 : std::lround(x);
    }
    // inversion by product of uniforms
    const double limit = std::exp(-mean);
    long k = 0;
    double prod = uniform();
    while (prod > limit) {
        ++k;
        prod *= uniform();
    }
    return k;
}

uint64_t Rng::uniform_index(uint64_t n) {
    // modulo rejection to avoid bias
    const uint64_t threshold = (~uint64_t{0} - n + 1) % n;
    for (;;) {
        const uint64_t x = engine_();
        if (x >= threshold) return x % n;
    }
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
    return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace qpol
