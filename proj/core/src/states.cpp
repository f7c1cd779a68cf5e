#include "qpol/states.hpp"

#include <cmath>
#include <stdexcept>

namespace qpol {

StateKind StateKind::maximally_mixed(int dim) {
    if (dim < 2) throw std::invalid_argument("StateKind: maximally mixed dim must be >= 2");
    return StateKind(Tag::MaximallyMixed, dim);
}

StateKind StateKind::custom(DensityMatrix rho) {
    StateKind k(Tag::Custom, rho.dim());
    k.custom_ = std::move(rho);
    return k;
}

const DensityMatrix& StateKind::custom_state() const {
    if (!custom_) throw std::logic_error("StateKind: not a custom state");
    return *custom_;
}

DensityMatrix make_state(const StateKind& kind) {
    switch (kind.tag()) {
        case StateKind::Tag::BellPsiPlus: {
            const double r = 1.0 / std::sqrt(2.0);
            return DensityMatrix::from_pure(PureState({0.0, r, r, 0.0}));
        }
        case StateKind::Tag::MaximallyMixed: {
            const int d = kind.dim();
            return DensityMatrix(ComplexMatrix::identity(d) * cd{1.0 / d, 0.0});
        }
        case StateKind::Tag::SuperpositionHV: {
            const double r = 1.0 / std::sqrt(2.0);
            return DensityMatrix::from_pure(PureState({r, r}));
        }
        case StateKind::Tag::Custom:
            return kind.custom_state();
    }
    throw std::logic_error("make_state: unreachable");
}

DensityMatrix partial_trace(const DensityMatrix& rho, Arm keep) {
    if (rho.dim() != 4) throw std::invalid_argument("partial_trace: expected a 4x4 two-photon state");
    ComplexMatrix out(2, 2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            cd acc = 0.0;
            for (int k = 0; k < 2; ++k) {
                // reference arm is the first (most significant) factor
                if (keep == Arm::Reference)
                    acc += rho(i * 2 + k, j * 2 + k);
                else
                    acc += rho(k * 2 + i, k * 2 + j);
            }
            out(i, j) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

ComplexMatrix pauli(int k) {
    switch (k) {
        case 0:
            return ComplexMatrix::identity(2);
        case 1:
            return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0});
        case 2:
            // projector difference R - L with R = (|H> - i|V>)/sqrt(2)
            return ComplexMatrix(2, 2, {0.0, cd{0.0, 1.0}, cd{0.0, -1.0}, 0.0});
        case 3:
            return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0});
        default:
            throw std::invalid_argument("pauli: index must be in 0..3");
    }
}

ComplexMatrix stokes_operator(const StokesIndex& index, StokesConvention convention) {
    const size_t n = index.indices.size();
    if (n < 1 || n > 2) throw std::invalid_argument("stokes_operator: supports 1 or 2 photons");
    const double pref = convention == StokesConvention::Half ? 0.5 : 1.0;
    ComplexMatrix op = pauli(index.indices[0]) * cd{pref, 0.0};
    for (size_t p = 1; p < n; ++p) op = kron(op, pauli(index.indices[p]) * cd{pref, 0.0});
    return op;
}

std::vector<double> stokes_expand(const DensityMatrix& rho) {
    const int d = rho.dim();
    if (d != 2 && d != 4) throw std::invalid_argument("stokes_expand: dimension must be 2 or 4");
    const int photons = d == 2 ? 1 : 2;
    const int count = photons == 1 ? 4 : 16;
    std::vector<double> table(static_cast<size_t>(count));
    for (int a = 0; a < count; ++a) {
        StokesIndex idx;
        if (photons == 1)
            idx.indices = {a};
        else
            idx.indices = {a / 4, a % 4};
        const ComplexMatrix op = stokes_operator(idx, StokesConvention::Pauli);
        table[static_cast<size_t>(a)] = (rho.matrix() * op).trace().real();
    }
    return table;
}

ComplexMatrix stokes_reconstruct(const std::vector<double>& table, int photons) {
    if (photons != 1 && photons != 2) throw std::invalid_argument("stokes_reconstruct: photons must be 1 or 2");
    const size_t count = photons == 1 ? 4 : 16;
    if (table.size() != count) throw std::invalid_argument("stokes_reconstruct: table size mismatch");
    const int d = photons == 1 ? 2 : 4;
    ComplexMatrix rho(d, d);
    for (size_t a = 0; a < count; ++a) {
        StokesIndex idx;
        if (photons == 1)
            idx.indices = {static_cast<int>(a)};
        else
            idx.indices = {static_cast<int>(a / 4), static_cast<int>(a % 4)};
        rho = rho + stokes_operator(idx, StokesConvention::Pauli) * cd{table[a], 0.0};
    }
    const double norm = photons == 1 ? 0.5 : 0.25;
    return rho * cd{norm, 0.0};
}

}  // namespace qpol
