#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace qpol {

// All randomness in the project flows through this wrapper so that runs are
// reproducible bit-for-bit from a single 64-bit seed. The engine is
// std::mt19937_64, whose output sequence is fixed by the C++ standard; the
// samplers below avoid std::*_distribution on purpose, because those are
// implementation-defined and would break cross-toolchain reproducibility.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; second variate of each pair is cached
    double normal();

    // real and imaginary parts i.i.d. N(0,1)
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    // Poisson sampling: multiplication-of-uniforms inversion for small means,
    // rounded normal approximation above mean 1000.
    long poisson(double mean);

    // uniform integer in [0, n)
    uint64_t uniform_index(uint64_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// SplitMix64 finalizer, used to derive independent sub-seeds from a master
// seed: sub_seed(master, k) feeds master + (k+1)*golden through the mix.
uint64_t splitmix64(uint64_t x);
uint64_t derive_seed(uint64_t master, uint64_t index);

}  // namespace qpol
