#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ccd/grid.hpp"
#include "ccd/verify.hpp"
#include "ccd/weights.hpp"

namespace ccd {

/// Thrown for unreadable, malformed or inconsistent input files; the message
/// names the file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a grid function from CSV with header `x,u`: one row per node,
/// strictly increasing x, uniform spacing to 1e-9 relative.
GridFunction read_grid_csv(const std::string& path);

/// Writes `x,u,du,d2u` rows for a differentiated grid function.
void write_derivatives_csv(std::ostream& out, const GridFunction& g, const DerivativePair& d);

/// Writes the dispersion-curve CSV
/// (`w,re_wp,im_wp,re_wpp2,im_wpp2,exact_wp,exact_wpp2`, 15 significant
/// digits).
void write_dispersion_csv(std::ostream& out, const std::vector<DispersionRow>& rows);

/// Writes `n,h,err_first,err_second` rows of a convergence study.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

struct WeightsFile {
    PrefactoredWeights weights;
    std::string target;  // "ccd6" | "ccd8"
    std::string system;  // "printed" | "spectral"
    double residual_norm = 0.0;
};

/// Serializes a weights file (schema prefactored-weights/1, 17 significant
/// digits, key order fixed so identical inputs give identical bytes).
std::string weights_json(const WeightsFile& wf);
void write_weights_json(const std::string& path, const WeightsFile& wf);
WeightsFile read_weights_json(const std::string& path);

/// Formats a double with the given number of significant digits (%.*g,
/// locale independent).
std::string format_sig(double value, int digits);

}  // namespace ccd
