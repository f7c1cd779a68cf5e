#pragma once

#include "qpol/channels.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qpol {

enum class DerivativeMethod { Analytic, CentralDiff };

// A channel output together with its derivative in the channel angle. For
// families tracked in pure form, psi/dpsi hold the state vector and its
// derivative; the density-matrix view is always populated.
struct ParamState {
    DensityMatrix value;
    ComplexMatrix derivative;  // d(rho)/d(alpha), Hermitian and traceless
    double alpha = 0.0;
    DerivativeMethod method = DerivativeMethod::Analytic;
    std::optional<std::vector<cd>> psi;
    std::optional<std::vector<cd>> dpsi;
};

struct QfiResult {
    double value = 0.0;    // information per observation, rad^-2
    std::string scenario;  // human-readable descriptor
    double qcrb = 0.0;     // single-observation unbiased bound, rad^2
};

std::string scenario_name(const Scenario& sc);

// Analytic derivatives exist for the six reference scenarios
// ({LP,QWP} x {nonlocal Bell, local mixed, local superposition}); the
// central-difference path works for any scenario and applies Richardson
// extrapolation between steps h and h/2.
ParamState channel_derivative(const Scenario& sc, double alpha, DerivativeMethod method,
                              double h = 1e-6);

// F = 4 [ <dpsi|dpsi> - |<psi|dpsi>|^2 ]. Requires psi/dpsi.
QfiResult qfi_pure(const ParamState& ps);

// F = 2 * sum_{i,j: l_i+l_j > 1e-12} |<e_i| drho |e_j>|^2 / (l_i + l_j).
// Support cutoff keeps rank-deficient families (local LP output) finite.
QfiResult qfi_mixed(const ParamState& ps);

// Analytic derivative, then the pure or mixed formula as appropriate.
QfiResult scenario_qfi(const Scenario& sc, double alpha);

// Unbiased: 1/(mF). With a bias slope b': (1+b')^2/(mF). F <= 0 gives +inf.
double qcrb(const QfiResult& f, long m, std::optional<double> bias_slope = std::nullopt);

}  // namespace qpol
