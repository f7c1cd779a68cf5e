#pragma once

#include "qpol/qmath.hpp"
#include "qpol/tomography.hpp"

#include <map>
#include <string>

namespace qpol {

// Count CSV: header `proj_r,proj_s,count`, one row per projector, proj_r empty
// for single-channel data, `#` starts a comment. Rows may come in any order;
// they are matched to the POVM by label. The record's per-basis total is the
// average complete-basis sum (sum of the first four counts for the 16-setting
// mode, which form a complete basis).
CountRecord read_count_csv(const std::string& path, const PovmSet& povm);

void write_count_csv(const std::string& path, const CountRecord& rec, const PovmSet& povm);

// Density-matrix JSON: entries as [re, im] pairs, row-major nested rows, plus
// the convention block (basis order, circular handedness, fidelity convention)
// so files are self-describing.
void write_density_json(const std::string& path, const ComplexMatrix& rho,
                        const std::map<std::string, std::string>& extra = {});

ComplexMatrix read_density_json(const std::string& path);

// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace qpol
