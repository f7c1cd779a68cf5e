#pragma once

#include "qpol/qmath.hpp"
#include "qpol/rng.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qpol {

// Analyzer settings. Circular handedness convention: R = (|H> - i|V>)/sqrt(2),
// L = (|H> + i|V>)/sqrt(2); flipping it conjugates reconstructed off-diagonals,
// so it is recorded in all emitted metadata.
enum class Pol { H, V, D, A, R, L };

char pol_char(Pol p);
Pol pol_from_char(char c);
std::vector<cd> pol_ket(Pol p);

struct Projector {
    std::string label;    // "D" for one photon, "DV" (reference then sample) for two
    std::vector<cd> ket;
    ComplexMatrix matrix;  // |ket><ket|
};

Projector make_projector(const std::string& label);

enum class PovmMode { Single6, TwoMinimal16, TwoFull36 };

struct PovmSet {
    PovmMode mode;
    std::vector<Projector> projectors;
    int dim() const { return mode == PovmMode::Single6 ? 2 : 4; }
};

// Single6: H,V,D,A,R,L. TwoFull36: nine basis pairs x four outcomes, complete
// basis per consecutive block of four. TwoMinimal16: the informationally
// complete 16-projector set whose first four entries (HH,HV,VV,VH) form a
// complete basis; its B matrix is checked invertible at construction.
PovmSet povm_set(PovmMode mode);

std::vector<double> born_probabilities(const DensityMatrix& rho, const PovmSet& povm);

enum class CountSource { Simulated, Ingested };
enum class CountingMode { Exact, Multinomial, Poisson };

struct CountRecord {
    std::vector<std::pair<std::string, double>> counts;  // real-valued in exact mode
    double total_per_basis = 0.0;                        // the design N
    CountSource source = CountSource::Simulated;
    std::uint64_t seed = 0;
};

CountRecord simulate_counts_exact(const DensityMatrix& rho, const PovmSet& povm, double n_total);

// Multinomial splits n_total over each complete basis (per-projector binomial
// where the set has no basis structure); Poisson draws each projector
// independently at mean n_total * p_i.
CountRecord simulate_counts(const DensityMatrix& rho, const PovmSet& povm, double n_total,
                            CountingMode mode, Rng& rng);

// Labels must match the POVM order exactly and counts must be non-negative.
void validate_counts(const CountRecord& counts, const PovmSet& povm);

// Raw inversion; the result is Hermitian unit-trace but may fail positivity
// on noisy data.
ComplexMatrix linear_inversion(const CountRecord& counts, const PovmSet& povm);

// Parameter vector of the triangular factor: 2^n real diagonal entries first,
// then real/imaginary pairs filling strictly-lower positions row-major.
struct CholeskyParams {
    std::vector<double> t;  // length 4^n
    int qubits() const;
};

DensityMatrix rho_from_cholesky(const CholeskyParams& params);
CholeskyParams cholesky_of(const ComplexMatrix& rho);  // inverse map, tolerant of rank deficiency

struct MleOptions {
    int restarts = 3;
    long max_evals = 100000;
    double improvement_tol = 1e-10;
    int stall_iters = 50;
    // objective below which further restarts are pointless
    double good_enough = 1e-9;
};

struct MleResult {
    DensityMatrix rho;
    double objective = 0.0;
    long iterations = 0;
    long evaluations = 0;
    bool converged = false;
};

// Gaussian negative log-likelihood over Cholesky parameters, minimized by
// Nelder-Mead seeded from the physicalized linear inversion plus random
// restarts. Always returns a physical state; `converged` reports whether the
// stall criterion was met within budget.
MleResult mle_reconstruct(const CountRecord& counts, const PovmSet& povm, double n_total,
                          const MleOptions& options, Rng& rng);

// Eigenvalue clamping + trace renormalization of a Hermitian matrix.
DensityMatrix physicalize(const ComplexMatrix& m);

}  // namespace qpol
