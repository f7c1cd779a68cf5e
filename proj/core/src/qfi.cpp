#include "qpol/qfi.hpp"

#include "qpol/eigh.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpol {

namespace {

struct TrigCoeffs {
    double a, b, c;     // sin*cos, sin^2, cos^2
    double da, db, dc;  // their alpha-derivatives
};

TrigCoeffs trig(double alpha) {
    const double s = std::sin(alpha);
    const double c = std::cos(alpha);
    const double s2 = std::sin(2.0 * alpha);
    const double c2 = std::cos(2.0 * alpha);
    return {s * c, s * s, c * c, c2, s2, -s2};
}

ComplexMatrix pure_derivative(const std::vector<cd>& psi, const std::vector<cd>& dpsi) {
    return outer(dpsi, psi) + outer(psi, dpsi);
}

ParamState pure_param(double alpha, DerivativeMethod m, std::vector<cd> psi, std::vector<cd> dpsi) {
    DensityMatrix rho = DensityMatrix::from_pure(PureState(psi));
    ComplexMatrix d = pure_derivative(psi, dpsi);
    return ParamState{std::move(rho), std::move(d), alpha, m, std::move(psi), std::move(dpsi)};
}

bool is_probe(const Scenario& sc, StateKind::Tag tag) { return sc.probe.tag() == tag; }

ParamState analytic_derivative(const Scenario& sc, double alpha) {
    const TrigCoeffs t = trig(alpha);
    const bool nonlocal = sc.channel.configuration == Configuration::Nonlocal;
    const bool lp = sc.channel.element == Element::LP;
    const cd im{0.0, 1.0};
    if (nonlocal && is_probe(sc, StateKind::Tag::BellPsiPlus)) {
        if (lp)
            return pure_param(alpha, DerivativeMethod::Analytic, {t.a, t.c, t.b, t.a},
                              {t.da, t.dc, t.db, t.da});
        const double r = 1.0 / std::sqrt(2.0);
        const cd e = (im - 1.0) * r;
        return pure_param(alpha, DerivativeMethod::Analytic,
                          {e * t.a, (im * t.c + t.b) * r, (t.c + im * t.b) * r, e * t.a},
                          {e * t.da, (im * t.dc + t.db) * r, (t.dc + im * t.db) * r, e * t.da});
    }
    if (!nonlocal && is_probe(sc, StateKind::Tag::MaximallyMixed) && sc.probe.dim() == 2) {
        if (lp) {
            DensityMatrix rho(ComplexMatrix(2, 2, {t.b, t.a, t.a, t.c}));
            ComplexMatrix d(2, 2, {t.db, t.da, t.da, t.dc});
            return ParamState{std::move(rho), std::move(d), alpha, DerivativeMethod::Analytic,
                              std::nullopt, std::nullopt};
        }
        DensityMatrix rho(ComplexMatrix::identity(2) * cd{0.5, 0.0});
        return ParamState{std::move(rho), ComplexMatrix(2, 2), alpha, DerivativeMethod::Analytic,
                          std::nullopt, std::nullopt};
    }
    if (!nonlocal && is_probe(sc, StateKind::Tag::SuperpositionHV)) {
        const double s = std::sin(alpha);
        const double c = std::cos(alpha);
        if (lp) {
            // renormalized output is the transmission axis itself
            return pure_param(alpha, DerivativeMethod::Analytic, {s, c}, {c, -s});
        }
        const double r = 1.0 / std::sqrt(2.0);
        std::vector<cd> in{r, r};
        const ComplexMatrix u = jones(Element::QWP, alpha);
        // dU/dalpha of the quarter-wave Jones matrix
        const ComplexMatrix du(2, 2, {(im - 1.0) * t.db, (im - 1.0) * t.da, (im - 1.0) * t.da,
                                      (1.0 - im) * t.db});
        return pure_param(alpha, DerivativeMethod::Analytic, u.apply(in), du.apply(in));
    }
    throw std::invalid_argument("channel_derivative: no analytic derivative for scenario " +
                                scenario_name(sc));
}

ParamState central_diff_derivative(const Scenario& sc, double alpha, double h) {
    auto at = [&](double x) {
        Scenario s = sc;
        s.channel.alpha = x;
        return scenario_output(s);
    };
    auto slope = [&](double step) {
        const DensityMatrix p = at(alpha + step);
        const DensityMatrix m = at(alpha - step);
        return (p.matrix() - m.matrix()) * cd{1.0 / (2.0 * step), 0.0};
    };
    const ComplexMatrix d1 = slope(h);
    const ComplexMatrix d2 = slope(h / 2.0);
    // Richardson: error of the central difference is O(h^2)
    const ComplexMatrix d = (d2 * cd{4.0, 0.0} - d1) * cd{1.0 / 3.0, 0.0};
    return ParamState{at(alpha), d, alpha, DerivativeMethod::CentralDiff, std::nullopt,
                      std::nullopt};
}

}  // namespace

std::string scenario_name(const Scenario& sc) {
    std::string n = sc.channel.element == Element::LP ? "lp" : "qwp";
    n += sc.channel.configuration == Configuration::Local ? " local" : " nonlocal";
    switch (sc.probe.tag()) {
        case StateKind::Tag::BellPsiPlus: n += " bell"; break;
        case StateKind::Tag::MaximallyMixed: n += " mixed"; break;
        case StateKind::Tag::SuperpositionHV: n += " superposition"; break;
        case StateKind::Tag::Custom: n += " custom"; break;
    }
    return n;
}

ParamState channel_derivative(const Scenario& sc, double alpha, DerivativeMethod method, double h) {
    if (method == DerivativeMethod::Analytic) return analytic_derivative(sc, alpha);
    if (h <= 0.0) throw std::invalid_argument("channel_derivative: step must be positive");
    return central_diff_derivative(sc, alpha, h);
}

QfiResult qfi_pure(const ParamState& ps) {
    if (!ps.psi || !ps.dpsi) throw std::invalid_argument("qfi_pure: no pure-state track available");
    const double nrm = norm(*ps.psi);
    if (std::abs(nrm - 1.0) > 1e-8)
        throw std::invalid_argument("qfi_pure: state norm deviates from 1 by more than 1e-8");
    const double nn = inner(*ps.dpsi, *ps.dpsi).real();
    const cd g = inner(*ps.psi, *ps.dpsi);
    const double f = 4.0 * (nn - std::norm(g));
    return QfiResult{f, "", f > 0.0 ? 1.0 / f : std::numeric_limits<double>::infinity()};
}

QfiResult qfi_mixed(const ParamState& ps) {
    if (ps.derivative.hermiticity_defect() > 1e-8)
        throw std::invalid_argument("qfi_mixed: derivative is not Hermitian");
    const EighResult eig = eigh_hermitian(ps.value.matrix());
    const int n = ps.value.dim();
    // derivative in the eigenbasis
    const ComplexMatrix m = eig.eigenvectors.adjoint() * ps.derivative * eig.eigenvectors;
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double denom = eig.eigenvalues[static_cast<size_t>(i)] +
                                 eig.eigenvalues[static_cast<size_t>(j)];
            if (denom <= 1e-12) continue;
            f += 2.0 * std::norm(m(i, j)) / denom;
        }
    }
    return QfiResult{f, "", f > 0.0 ? 1.0 / f : std::numeric_limits<double>::infinity()};
}

QfiResult scenario_qfi(const Scenario& sc, double alpha) {
    const ParamState ps = channel_derivative(sc, alpha, DerivativeMethod::Analytic);
    QfiResult r = (ps.psi && ps.dpsi) ? qfi_pure(ps) : qfi_mixed(ps);
    r.scenario = scenario_name(sc);
    return r;
}

double qcrb(const QfiResult& f, long m, std::optional<double> bias_slope) {
    if (m < 1) throw std::invalid_argument("qcrb: observation count must be >= 1");
    if (f.value <= 0.0) return std::numeric_limits<double>::infinity();
    const double num = bias_slope ? (1.0 + *bias_slope) * (1.0 + *bias_slope) : 1.0;
    return num / (static_cast<double>(m) * f.value);
}

}  // namespace qpol
