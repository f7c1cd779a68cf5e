#pragma once

#include "qpol/qmath.hpp"
#include "qpol/states.hpp"

namespace qpol {

enum class Element { LP, QWP };

// Local: the operator acts on a single-photon probe. Nonlocal: it acts on the
// sample half of a two-photon state, identity on the reference half.
enum class Configuration { Local, Nonlocal };

struct Channel {
    Element element;
    double alpha = 0.0;  // radians, orientation from vertical in the lab frame
    Configuration configuration = Configuration::Nonlocal;
};

// Normalizes alpha into [0, pi); all polarization elements here have period pi.
Channel make_channel(Element element, double alpha, Configuration configuration);

struct Scenario {
    Channel channel;
    StateKind probe;
};

ComplexMatrix jones(Element element, double alpha);

// Local: U rho U^dag / Tr. Nonlocal: (I (x) U) rho (...)^dag / Tr. The
// renormalization post-selects on transmission for the absorptive LP.
// Throws if the trace drops below 1e-12 (probe fully blocked).
DensityMatrix apply_channel(const Channel& ch, const DensityMatrix& state);

// Output states assembled directly from the printed closed-form coefficients
// A = sin(a)cos(a), B = sin^2(a), C = cos^2(a). Supports the four reference
// cases: {LP,QWP} x {nonlocal Bell probe, local maximally mixed probe}.
DensityMatrix closed_form_output(const Scenario& sc);

// apply_channel on make_state(sc.probe); works for any dimension-consistent
// scenario, including the superposition probe.
DensityMatrix scenario_output(const Scenario& sc);

}  // namespace qpol
