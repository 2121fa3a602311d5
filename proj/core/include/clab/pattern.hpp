#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "clab/types.hpp"

namespace clab {

/// A finite discrete-time multichannel signal. Row n of `data` is the sample
/// p(n); columns are channels.
struct Pattern {
    std::string name;
    Matrix data;  // L x M

    Index length() const { return data.rows(); }
    Index channels() const { return data.cols(); }
    /// Sample at time step n as a column vector.
    Vector sample(Index n) const { return data.row(n).transpose(); }
};

/// One-channel sine driver, p(n) = sin(2*pi*n / period) for n = 0..length-1.
Pattern gen_sine(double period, Index length, std::string name = "sine");

/// Integer-periodic driver: `period` base values drawn uniformly from
/// [-1, 1], tiled to `length`. A positive `perturbation` adds uniform noise
/// of that amplitude to the base values before tiling (the "slight
/// variation" companion pattern) and re-clamps them to [-1, 1].
Pattern gen_periodic_random(Index period, Index length, std::uint64_t seed,
                            double perturbation = 0.0,
                            std::string name = "periodic");

/// Pairs (p(n), p(n+delay)) of one channel, used to plot attractors.
Pattern delay_embed(const Pattern& pattern, Index channel, Index delay);

/// Reads a rectangular numeric CSV table, one time step per line. A
/// non-numeric first row is treated as a header and skipped. With
/// `normalize`, each channel is affinely mapped to [-1, 1] by its min/max
/// (constant channels map to 0). A positive `smooth_window` applies a
/// centered moving average per channel, shrinking at the edges.
Pattern load_csv(const std::filesystem::path& path, bool normalize = false,
                 Index smooth_window = 0);

}  // namespace clab
