#pragma once

#include <string>
#include <vector>

#include "mplc/projector.hpp"
#include "mplc/wfm.hpp"

namespace mplc {

// All binary files start with the magic "MPLC1\n" followed by one JSON
// metadata line, then raw little-endian float64 payload, row-major.

/// Field file: metadata {kind:"field", nx, ny, pitch_m, wavelength_m},
/// payload nx*ny (real, imag) pairs.
void save_field(const std::string& path, const ComplexField& field);
ComplexField load_field(const std::string& path);

/// Converter file: metadata {kind:"converter", n_planes, spacings_m,
/// target_waist_m, achieved_overlap, input_spec, grid}, payload n_planes
/// mask blocks of nx*ny float64 each.
void save_converter(const std::string& path, const ConverterDesign& design);
ConverterDesign load_converter(const std::string& path);

/// Cross-talk CSV: first row and column carry the mode labels, cells are
/// float64 with 9 significant digits, and the visibility is appended as a
/// trailing "# visibility=..." comment line.
void save_crosstalk_csv(const std::string& path, const CrosstalkMatrix& matrix);
CrosstalkMatrix load_crosstalk_csv(const std::string& path);

std::string format_crosstalk_csv(const CrosstalkMatrix& matrix);
CrosstalkMatrix parse_crosstalk_csv(const std::string& text);

}  // namespace mplc
