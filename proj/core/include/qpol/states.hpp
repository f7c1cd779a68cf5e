#pragma once

#include "qpol/qmath.hpp"

#include <optional>
#include <vector>

namespace qpol {

// Which photon of a two-photon state. Basis order is (HH, HV, VH, VV) with
// the first letter belonging to the reference arm.
enum class Arm { Reference, Sample };

class StateKind {
public:
    enum class Tag { BellPsiPlus, MaximallyMixed, SuperpositionHV, Custom };

    static StateKind bell_psi_plus() { return StateKind(Tag::BellPsiPlus, 4); }
    static StateKind maximally_mixed(int dim);
    static StateKind superposition_hv() { return StateKind(Tag::SuperpositionHV, 2); }
    static StateKind custom(DensityMatrix rho);

    Tag tag() const { return tag_; }
    int dim() const { return dim_; }
    const DensityMatrix& custom_state() const;

private:
    StateKind(Tag t, int d) : tag_(t), dim_(d) {}
    Tag tag_;
    int dim_;
    std::optional<DensityMatrix> custom_;
};

DensityMatrix make_state(const StateKind& kind);

DensityMatrix partial_trace(const DensityMatrix& rho, Arm keep);

// Index tuple of a (possibly multiphoton) Stokes operator, one entry in 0..3
// per photon. Axis dictionary: 1 = diagonal (D/A), 2 = circular (R/L),
// 3 = rectilinear (H/V), with R = (|H> - i|V>)/sqrt(2).
struct StokesIndex {
    std::vector<int> indices;
};

// `Half` carries the 1/2-per-photon prefactor of the operational Stokes
// observables; `Pauli` is the bare tensor product used by tomography.
enum class StokesConvention { Half, Pauli };

ComplexMatrix stokes_operator(const StokesIndex& index, StokesConvention convention);

// sigma_k for k in 0..3 in the project's axis dictionary (see StokesIndex).
ComplexMatrix pauli(int k);

// Flat table of S_{i1..iN} = Tr(rho * S-op) in Pauli convention, index
// i1*4+i2 (two photons) or i1 (one photon).
std::vector<double> stokes_expand(const DensityMatrix& rho);

// rho = 2^-N * sum_a S_a * S-op_a. Raw matrix: tables from noisy data need
// not be physical.
ComplexMatrix stokes_reconstruct(const std::vector<double>& table, int photons);

}  // namespace qpol
