#include "qpol/tomography.hpp"

#include "qpol/errors.hpp"
#include "qpol/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qpol {

char pol_char(Pol p) {
    switch (p) {
        case Pol::H: return 'H';
        case Pol::V: return 'V';
        case Pol::D: return 'D';
        case Pol::A: return 'A';
        case Pol::R: return 'R';
        case Pol::L: return 'L';
    }
    throw std::logic_error("pol_char: unreachable");
}

Pol pol_from_char(char c) {
    switch (c) {
        case 'H': return Pol::H;
        case 'V': return Pol::V;
        case 'D': return Pol::D;
        case 'A': return Pol::A;
        case 'R': return Pol::R;
        case 'L': return Pol::L;
        default: break;
    }
    throw DataError(std::string("unknown polarization label '") + c + "'");
}

std::vector<cd> pol_ket(Pol p) {
    const double r = 1.0 / std::sqrt(2.0);
    const cd im{0.0, 1.0};
    switch (p) {
        case Pol::H: return {1.0, 0.0};
        case Pol::V: return {0.0, 1.0};
        case Pol::D: return {r, r};
        case Pol::A: return {r, -r};
        case Pol::R: return {r, -im * r};
        case Pol::L: return {r, im * r};
    }
    throw std::logic_error("pol_ket: unreachable");
}

Projector make_projector(const std::string& label) {
    if (label.size() != 1 && label.size() != 2)
        throw DataError("projector label must have 1 or 2 letters, got '" + label + "'");
    std::vector<cd> ket = pol_ket(pol_from_char(label[0]));
    if (label.size() == 2) {
        const std::vector<cd> s = pol_ket(pol_from_char(label[1]));
        std::vector<cd> prod(4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                prod[static_cast<size_t>(i * 2 + j)] =
                    ket[static_cast<size_t>(i)] * s[static_cast<size_t>(j)];
        ket = std::move(prod);
    }
    ComplexMatrix m = outer(ket, ket);
    return Projector{label, std::move(ket), std::move(m)};
}

namespace {

constexpr int kBasisOrder[3][2] = {{0, 1}, {2, 3}, {4, 5}};  // (H,V), (D,A), (R,L) as Pol values

const char* kMinimal16[16] = {"HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
                              "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};

// Gamma_j = (sigma_a (x) sigma_b)/2, j = 4a+b: orthonormal under the
// Hilbert-Schmidt inner product, so rho = sum_j Tr(Gamma_j rho) Gamma_j.
ComplexMatrix gamma_op(int j) {
    return kron(pauli(j / 4), pauli(j % 4)) * cd{0.5, 0.0};
}

// Row-major dense solve of a x = b with partial pivoting.
std::vector<double> solve_real(std::vector<double> a, std::vector<double> b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<size_t>(r) * n + col]) >
                std::abs(a[static_cast<size_t>(piv) * n + col]))
                piv = r;
        if (std::abs(a[static_cast<size_t>(piv) * n + col]) < 1e-12)
            throw std::runtime_error("solve_real: singular system");
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<size_t>(piv) * n + c], a[static_cast<size_t>(col) * n + c]);
            std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
        }
        const double d = a[static_cast<size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<size_t>(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<size_t>(r) * n + c] -= f * a[static_cast<size_t>(col) * n + c];
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[static_cast<size_t>(r)];
        for (int c = r + 1; c < n; ++c) acc -= a[static_cast<size_t>(r) * n + c] * x[static_cast<size_t>(c)];
        x[static_cast<size_t>(r)] = acc / a[static_cast<size_t>(r) * n + r];
    }
    return x;
}

// B_ij = <psi_i| Gamma_j |psi_i>, real since Gamma_j is Hermitian.
std::vector<double> b_matrix(const PovmSet& povm) {
    const int rows = static_cast<int>(povm.projectors.size());
    std::vector<double> b(static_cast<size_t>(rows) * 16);
    for (int j = 0; j < 16; ++j) {
        const ComplexMatrix g = gamma_op(j);
        for (int i = 0; i < rows; ++i)
            b[static_cast<size_t>(i) * 16 + j] = (povm.projectors[static_cast<size_t>(i)].matrix * g).trace().real();
    }
    return b;
}

}  // namespace

void validate_counts(const CountRecord& rec, const PovmSet& povm) {
    if (rec.counts.size() != povm.projectors.size())
        throw DataError("count record has " + std::to_string(rec.counts.size()) +
                        " entries, POVM expects " + std::to_string(povm.projectors.size()));
    for (size_t i = 0; i < rec.counts.size(); ++i) {
        if (rec.counts[i].first != povm.projectors[i].label)
            throw DataError("count entry " + std::to_string(i + 1) + " labeled '" +
                            rec.counts[i].first + "', POVM expects '" + povm.projectors[i].label +
                            "'");
        if (!(rec.counts[i].second >= 0.0))
            throw DataError("negative count for projector '" + rec.counts[i].first + "'");
    }
}

PovmSet povm_set(PovmMode mode) {
    PovmSet set{mode, {}};
    switch (mode) {
        case PovmMode::Single6:
            for (char c : {'H', 'V', 'D', 'A', 'R', 'L'}) set.projectors.push_back(make_projector(std::string(1, c)));
            break;
        case PovmMode::TwoMinimal16:
            for (const char* lbl : kMinimal16) set.projectors.push_back(make_projector(lbl));
            break;
        case PovmMode::TwoFull36:
            for (const auto& br : kBasisOrder) {
                for (const auto& bs : kBasisOrder) {
                    for (int er : {0, 1}) {
                        for (int es : {0, 1}) {
                            std::string lbl;
                            lbl += pol_char(static_cast<Pol>(br[er]));
                            lbl += pol_char(static_cast<Pol>(bs[es]));
                            set.projectors.push_back(make_projector(lbl));
                        }
                    }
                }
            }
            break;
    }
    if (mode == PovmMode::TwoMinimal16) {
        // fail loudly if the fixed set ever stops being informationally complete
        std::vector<double> probe(16, 0.0);
        probe[0] = 1.0;
        try {
            solve_real(b_matrix(set), probe, 16);
        } catch (const std::runtime_error&) {
            throw std::logic_error("povm_set: 16-projector B matrix is singular");
        }
    }
    return set;
}

std::vector<double> born_probabilities(const DensityMatrix& rho, const PovmSet& povm) {
    if (rho.dim() != povm.dim())
        throw std::invalid_argument("born_probabilities: state and POVM dimensions differ");
    std::vector<double> p;
    p.reserve(povm.projectors.size());
    for (const Projector& pr : povm.projectors) {
        // Tr(rho |k><k|) = <k| rho |k>
        const std::vector<cd> v = rho.matrix().apply(pr.ket);
        p.push_back(std::max(0.0, inner(pr.ket, v).real()));
    }
    return p;
}

CountRecord simulate_counts_exact(const DensityMatrix& rho, const PovmSet& povm, double n_total) {
    if (n_total < 1.0) throw std::invalid_argument("simulate_counts: total must be >= 1");
    const std::vector<double> p = born_probabilities(rho, povm);
    CountRecord rec;
    rec.total_per_basis = n_total;
    rec.source = CountSource::Simulated;
    for (size_t i = 0; i < p.size(); ++i)
        rec.counts.emplace_back(povm.projectors[i].label, n_total * p[i]);
    return rec;
}

namespace {

// One multinomial draw of `total` copies over probabilities p[first..first+k).
std::vector<long> multinomial_draw(const std::vector<double>& p, size_t first, size_t k,
                                   long total, Rng& rng) {
    std::vector<long> out(k, 0);
    double psum = 0.0;
    for (size_t i = 0; i < k; ++i) psum += p[first + i];
    if (psum <= 0.0) return out;
    for (long copy = 0; copy < total; ++copy) {
        double u = rng.uniform() * psum;
        size_t pick = k - 1;
        for (size_t i = 0; i < k; ++i) {
            u -= p[first + i];
            if (u <= 0.0) {
                pick = i;
                break;
            }
        }
        ++out[pick];
    }
    return out;
}

}  // namespace

CountRecord simulate_counts(const DensityMatrix& rho, const PovmSet& povm, double n_total,
                            CountingMode mode, Rng& rng) {
    if (mode == CountingMode::Exact) return simulate_counts_exact(rho, povm, n_total);
    if (n_total < 1.0) throw std::invalid_argument("simulate_counts: total must be >= 1");
    const std::vector<double> p = born_probabilities(rho, povm);
    const long total = std::lround(n_total);
    std::vector<double> counts(p.size(), 0.0);
    if (mode == CountingMode::Poisson) {
        for (size_t i = 0; i < p.size(); ++i)
            counts[i] = static_cast<double>(rng.poisson(n_total * p[i]));
    } else if (povm.mode == PovmMode::TwoMinimal16) {
        // no complete-basis partition: each setting measures its own batch
        for (size_t i = 0; i < p.size(); ++i) {
            long hits = 0;
            for (long c = 0; c < total; ++c)
                if (rng.uniform() < p[i]) ++hits;
            counts[i] = static_cast<double>(hits);
        }
    } else {
        const size_t basis = povm.mode == PovmMode::Single6 ? 2 : 4;
        for (size_t first = 0; first < p.size(); first += basis) {
            const std::vector<long> draw = multinomial_draw(p, first, basis, total, rng);
            for (size_t i = 0; i < basis; ++i) counts[first + i] = static_cast<double>(draw[i]);
        }
    }
    CountRecord rec;
    rec.total_per_basis = n_total;
    rec.source = CountSource::Simulated;
    for (size_t i = 0; i < counts.size(); ++i)
        rec.counts.emplace_back(povm.projectors[i].label, counts[i]);
    return rec;
}

ComplexMatrix linear_inversion(const CountRecord& rec, const PovmSet& povm) {
    validate_counts(rec, povm);
    auto count = [&](size_t i) { return rec.counts[i].second; };
    if (povm.mode == PovmMode::Single6) {
        double s[4] = {1.0, 0.0, 0.0, 0.0};
        // bases in povm order: (H,V) -> S3, (D,A) -> S1, (R,L) -> S2
        const int target[3] = {3, 1, 2};
        for (int b = 0; b < 3; ++b) {
            const size_t first = static_cast<size_t>(2 * b);
            const double tot = count(first) + count(first + 1);
            if (tot <= 0.0)
                throw DataError("basis " + povm.projectors[first].label + "/" +
                                povm.projectors[first + 1].label + " has zero total count");
            s[target[b]] = (count(first) - count(first + 1)) / tot;
        }
        ComplexMatrix rho(2, 2);
        for (int k = 0; k < 4; ++k) rho = rho + pauli(k) * cd{0.5 * s[k], 0.0};
        return rho;
    }
    std::vector<double> b = b_matrix(povm);
    const int rows = static_cast<int>(povm.projectors.size());
    std::vector<double> f(static_cast<size_t>(rows));
    if (povm.mode == PovmMode::TwoMinimal16) {
        if (rec.total_per_basis <= 0.0)
            throw DataError("count record needs a positive per-basis total");
        for (int i = 0; i < rows; ++i) f[static_cast<size_t>(i)] = count(static_cast<size_t>(i)) / rec.total_per_basis;
    } else {
        for (int first = 0; first < rows; first += 4) {
            double tot = 0.0;
            for (int i = 0; i < 4; ++i) tot += count(static_cast<size_t>(first + i));
            if (tot <= 0.0)
                throw DataError("basis block starting at '" +
                                povm.projectors[static_cast<size_t>(first)].label +
                                "' has zero total count");
            for (int i = 0; i < 4; ++i)
                f[static_cast<size_t>(first + i)] = count(static_cast<size_t>(first + i)) / tot;
        }
    }
    std::vector<double> r;
    if (povm.mode == PovmMode::TwoMinimal16) {
        r = solve_real(std::move(b), std::move(f), 16);
    } else {
        // least squares via normal equations
        std::vector<double> ata(16 * 16, 0.0), atf(16, 0.0);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < 16; ++j) {
                const double bij = b[static_cast<size_t>(i) * 16 + j];
                atf[static_cast<size_t>(j)] += bij * f[static_cast<size_t>(i)];
                for (int k = 0; k < 16; ++k)
                    ata[static_cast<size_t>(j) * 16 + k] += bij * b[static_cast<size_t>(i) * 16 + k];
            }
        }
        r = solve_real(std::move(ata), std::move(atf), 16);
    }
    ComplexMatrix rho(4, 4);
    for (int j = 0; j < 16; ++j) rho = rho + gamma_op(j) * cd{r[static_cast<size_t>(j)], 0.0};
    return rho;
}

int CholeskyParams::qubits() const {
    if (t.size() == 4) return 1;
    if (t.size() == 16) return 2;
    throw std::invalid_argument("CholeskyParams: length must be 4 or 16");
}

namespace {

ComplexMatrix t_from_params(const std::vector<double>& t, int d) {
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = t[static_cast<size_t>(i)];
    size_t k = static_cast<size_t>(d);
    for (int i = 1; i < d; ++i)
        for (int j = 0; j < i; ++j, k += 2) m(i, j) = cd{t[k], t[k + 1]};
    return m;
}

}  // namespace

DensityMatrix rho_from_cholesky(const CholeskyParams& params) {
    const int d = params.qubits() == 1 ? 2 : 4;
    const ComplexMatrix t = t_from_params(params.t, d);
    ComplexMatrix rho = t.adjoint() * t;
    const double tr = rho.trace().real();
    if (tr < 1e-150) throw std::invalid_argument("rho_from_cholesky: zero parameter vector");
    return DensityMatrix(rho * cd{1.0 / tr, 0.0});
}

CholeskyParams cholesky_of(const ComplexMatrix& rho) {
    if (!rho.is_square() || (rho.rows() != 2 && rho.rows() != 4))
        throw std::invalid_argument("cholesky_of: expected a 2x2 or 4x4 matrix");
    if (rho.hermiticity_defect() > 1e-8)
        throw std::invalid_argument("cholesky_of: matrix is not Hermitian");
    const int d = rho.rows();
    // reverse both indices so a standard lower Cholesky of the flipped matrix
    // yields the upper-times-lower factorization rho = T^dag T
    ComplexMatrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = rho(d - 1 - i, d - 1 - j);
    ComplexMatrix l(d, d);
    for (int j = 0; j < d; ++j) {
        cd s = a(j, j);
        for (int k = 0; k < j; ++k) s -= l(j, k) * std::conj(l(j, k));
        const double pivot = s.real();
        if (pivot <= 1e-14) continue;  // rank-deficient direction: leave column zero
        const double diag = std::sqrt(pivot);
        l(j, j) = diag;
        for (int i = j + 1; i < d; ++i) {
            cd v = a(i, j);
            for (int k = 0; k < j; ++k) v -= l(i, k) * std::conj(l(j, k));
            l(i, j) = v / diag;
        }
    }
    ComplexMatrix t(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) t(i, j) = std::conj(l(d - 1 - j, d - 1 - i));
    CholeskyParams params;
    params.t.assign(static_cast<size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) params.t[static_cast<size_t>(i)] = t(i, i).real();
    size_t k = static_cast<size_t>(d);
    for (int i = 1; i < d; ++i)
        for (int j = 0; j < i; ++j, k += 2) {
            params.t[k] = t(i, j).real();
            params.t[k + 1] = t(i, j).imag();
        }
    return params;
}

DensityMatrix physicalize(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("physicalize: matrix not square");
    const ComplexMatrix herm = (m + m.adjoint()) * cd{0.5, 0.0};
    const EighResult eig = eigh_hermitian(herm, 1e300);
    const int d = herm.rows();
    std::vector<double> lam(eig.eigenvalues);
    double tot = 0.0;
    for (double& v : lam) {
        v = std::max(0.0, v);
        tot += v;
    }
    if (tot <= 0.0) return DensityMatrix(ComplexMatrix::identity(d) * cd{1.0 / d, 0.0});
    ComplexMatrix out(d, d);
    for (int j = 0; j < d; ++j) {
        const double w = lam[static_cast<size_t>(j)] / tot;
        if (w == 0.0) continue;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                out(r, c) += eig.eigenvectors(r, j) * std::conj(eig.eigenvectors(c, j)) * w;
    }
    return DensityMatrix(std::move(out));
}

}  // namespace qpol
