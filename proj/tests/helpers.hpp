#pragma once

#include "qpol/channels.hpp"
#include "qpol/qmath.hpp"

#include <cmath>
#include <vector>

namespace qt {

constexpr double kPi = 3.14159265358979323846;

inline double deg(double d) { return d * kPi / 180.0; }

inline qpol::Scenario scenario(qpol::Element el, qpol::Configuration cfg, double alpha_rad) {
    qpol::StateKind probe = cfg == qpol::Configuration::Nonlocal
                                ? qpol::StateKind::bell_psi_plus()
                                : qpol::StateKind::maximally_mixed(2);
    return qpol::Scenario{qpol::make_channel(el, alpha_rad, cfg), probe};
}

inline qpol::Scenario superposition_scenario(qpol::Element el, double alpha_rad) {
    return qpol::Scenario{qpol::make_channel(el, alpha_rad, qpol::Configuration::Local),
                          qpol::StateKind::superposition_hv()};
}

inline std::vector<qpol::cd> bell_psi_plus_ket() {
    const double s = 1.0 / std::sqrt(2.0);
    return {0.0, s, s, 0.0};
}

}  // namespace qt
