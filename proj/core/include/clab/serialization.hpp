#pragma once

#include <filesystem>
#include <string>

#include "clab/conceptor.hpp"
#include "clab/conception.hpp"
#include "clab/trainer.hpp"
#include "clab/types.hpp"

namespace clab {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

/// Matrix dump: a "rows,cols" dimensions header, then one comma-separated
/// line per row.
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix_csv(const std::filesystem::path& path);

/// Matrix dump plus an "aperture,<value>" line after the dimensions header.
void save_conceptor(const std::filesystem::path& path, const Conceptor& c);
Conceptor load_conceptor(const std::filesystem::path& path);

/// Single-column CSV with an aperture header line.
void save_conception(const std::filesystem::path& path, const ConceptionVector& c);
ConceptionVector load_conception(const std::filesystem::path& path);

/// Writes the trained system into a directory: matrix dumps for W, W^out,
/// the reservoir, per-pattern filters and starting states, plus a JSON
/// manifest recording mode, apertures, seed and dimensions.
void save_loaded_system(const std::filesystem::path& dir, const LoadedSystem& sys);
LoadedSystem load_loaded_system(const std::filesystem::path& dir);

}  // namespace clab
