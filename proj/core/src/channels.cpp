#include "qpol/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpol {

Channel make_channel(Element element, double alpha, Configuration configuration) {
    const double pi = std::numbers::pi;
    double a = std::fmod(alpha, pi);
    if (a < 0.0) a += pi;
    return Channel{element, a, configuration};
}

ComplexMatrix jones(Element element, double alpha) {
    const double s = std::sin(alpha);
    const double c = std::cos(alpha);
    const double a = s * c;
    const double b = s * s;
    const double cc = c * c;
    if (element == Element::LP) return ComplexMatrix(2, 2, {b, a, a, cc});
    const cd im{0.0, 1.0};
    const cd off = (im - 1.0) * a;
    return ComplexMatrix(2, 2, {cc + im * b, off, off, im * cc + b});
}

DensityMatrix apply_channel(const Channel& ch, const DensityMatrix& state) {
    const bool local = ch.configuration == Configuration::Local;
    const int want = local ? 2 : 4;
    if (state.dim() != want)
        throw std::invalid_argument("apply_channel: state dimension does not match configuration");
    const ComplexMatrix u = jones(ch.element, ch.alpha);
    const ComplexMatrix big = local ? u : kron(ComplexMatrix::identity(2), u);
    ComplexMatrix out = big * state.matrix() * big.adjoint();
    const double tr = out.trace().real();
    if (tr < 1e-12) throw std::runtime_error("apply_channel: probe fully blocked (output trace ~ 0)");
    return DensityMatrix(out * cd{1.0 / tr, 0.0});
}

DensityMatrix closed_form_output(const Scenario& sc) {
    const double s = std::sin(sc.channel.alpha);
    const double c = std::cos(sc.channel.alpha);
    const double a = s * c;
    const double b = s * s;
    const double cc = c * c;
    const bool nonlocal = sc.channel.configuration == Configuration::Nonlocal;
    if (nonlocal && sc.probe.tag() == StateKind::Tag::BellPsiPlus) {
        if (sc.channel.element == Element::LP)
            return DensityMatrix::from_pure(PureState({a, cc, b, a}));
        const cd im{0.0, 1.0};
        const double r = 1.0 / std::sqrt(2.0);
        const cd corner = (im - 1.0) * a * r;
        return DensityMatrix::from_pure(PureState({corner, (im * cc + b) * r, (cc + im * b) * r, corner}));
    }
    if (!nonlocal && sc.probe.tag() == StateKind::Tag::MaximallyMixed && sc.probe.dim() == 2) {
        if (sc.channel.element == Element::LP)
            return DensityMatrix(ComplexMatrix(2, 2, {b, a, a, cc}));
        return DensityMatrix(ComplexMatrix::identity(2) * cd{0.5, 0.0});
    }
    throw std::invalid_argument("closed_form_output: no closed form for this scenario");
}

DensityMatrix scenario_output(const Scenario& sc) {
    return apply_channel(sc.channel, make_state(sc.probe));
}

}  // namespace qpol
