#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace clab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad parameter values, missing files, malformed
/// experiment descriptions). The CLI maps this to exit code 2.
struct config_error : error {
    using error::error;
};

/// Malformed input data, carries the 1-based row/column of the offending
/// cell when known.
struct parse_error : config_error {
    parse_error(const std::string& msg, Index row, Index column)
        : config_error(msg + " (row " + std::to_string(row) + ", column "
                       + std::to_string(column) + ")"),
          row(row),
          column(column) {}
    explicit parse_error(const std::string& msg) : config_error(msg), row(0), column(0) {}
    Index row;
    Index column;
};

/// Numerical failure (singular ridge system, divergent integration).
struct numeric_error : error {
    using error::error;
};

/// The reservoir state or adapted weights left the admissible region during
/// a run. Carries the pattern index and step at which it happened.
struct divergence_error : error {
    divergence_error(const std::string& msg, Index pattern, Index step)
        : error(msg + " (pattern " + std::to_string(pattern) + ", step "
                + std::to_string(step) + ")"),
          pattern(pattern),
          step(step) {}
    Index pattern;
    Index step;
};

/// Filesystem failure while writing artifacts. The CLI maps this to exit 4.
struct io_error : error {
    using error::error;
};

}  // namespace clab
