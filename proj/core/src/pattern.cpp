#include "clab/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "clab/rng.hpp"

namespace clab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Sub-streams of the pattern seed: 0 = base values, 1 = perturbation noise.
constexpr std::uint64_t kStreamBase = 0;
constexpr std::uint64_t kStreamNoise = 1;

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0';
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> tokens;
    std::string token;
    std::stringstream ss(line);
    while (std::getline(ss, token, ',')) {
        const auto first = token.find_first_not_of(" \t\r");
        const auto last = token.find_last_not_of(" \t\r");
        tokens.push_back(first == std::string::npos
                             ? std::string()
                             : token.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') tokens.emplace_back();
    return tokens;
}

void normalize_channels(Matrix& data) {
    for (Index c = 0; c < data.cols(); ++c) {
        const double lo = data.col(c).minCoeff();
        const double hi = data.col(c).maxCoeff();
        if (hi - lo <= 0.0) {
            data.col(c).setZero();  // degenerate min = max
        } else {
            data.col(c) = (2.0 * (data.col(c).array() - lo) / (hi - lo) - 1.0).matrix();
        }
    }
}

void smooth_channels(Matrix& data, Index window) {
    const Index rows = data.rows();
    const Index half_lo = (window - 1) / 2;
    const Index half_hi = window / 2;
    Matrix out(rows, data.cols());
    for (Index n = 0; n < rows; ++n) {
        const Index lo = std::max<Index>(0, n - half_lo);
        const Index hi = std::min<Index>(rows - 1, n + half_hi);
        out.row(n) = data.middleRows(lo, hi - lo + 1).colwise().mean();
    }
    data = std::move(out);
}

}  // namespace

Pattern gen_sine(double period, Index length, std::string name) {
    if (period <= 0.0) throw std::invalid_argument("gen_sine: period must be positive");
    if (length < 1) throw std::invalid_argument("gen_sine: length must be at least 1");
    Matrix data(length, 1);
    for (Index n = 0; n < length; ++n)
        data(n, 0) = std::sin(2.0 * kPi * static_cast<double>(n) / period);
    return Pattern{std::move(name), std::move(data)};
}

Pattern gen_periodic_random(Index period, Index length, std::uint64_t seed,
                            double perturbation, std::string name) {
    if (period < 1) throw std::invalid_argument("gen_periodic_random: period must be >= 1");
    if (length < 1) throw std::invalid_argument("gen_periodic_random: length must be >= 1");
    if (perturbation < 0.0)
        throw std::invalid_argument("gen_periodic_random: perturbation must be >= 0");

    Rng base_rng(derive_seed(seed, kStreamBase));
    std::vector<double> base(static_cast<std::size_t>(period));
    for (auto& v : base) v = base_rng.uniform(-1.0, 1.0);
    if (perturbation > 0.0) {
        Rng noise_rng(derive_seed(seed, kStreamNoise));
        for (auto& v : base) {
            v += noise_rng.uniform(-perturbation, perturbation);
            v = std::clamp(v, -1.0, 1.0);
        }
    }

    Matrix data(length, 1);
    for (Index n = 0; n < length; ++n)
        data(n, 0) = base[static_cast<std::size_t>(n % period)];
    return Pattern{std::move(name), std::move(data)};
}

Pattern delay_embed(const Pattern& pattern, Index channel, Index delay) {
    if (channel < 0 || channel >= pattern.channels())
        throw std::invalid_argument("delay_embed: channel out of range");
    if (delay < 1) throw std::invalid_argument("delay_embed: delay must be >= 1");
    if (delay >= pattern.length())
        throw std::invalid_argument("delay_embed: delay must be smaller than the pattern length");

    const Index rows = pattern.length() - delay;
    Matrix data(rows, 2);
    for (Index n = 0; n < rows; ++n) {
        data(n, 0) = pattern.data(n, channel);
        data(n, 1) = pattern.data(n + delay, channel);
    }
    return Pattern{pattern.name + "_embedded", std::move(data)};
}

Pattern load_csv(const std::filesystem::path& path, bool normalize, Index smooth_window) {
    std::ifstream in(path);
    if (!in) throw parse_error("load_csv: cannot open " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    Index line_no = 0;
    Index n_cols = -1;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto tokens = split_csv_line(line);

        std::vector<double> row(tokens.size());
        bool all_numeric = true;
        Index bad_col = 0;
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            if (!parse_double(tokens[c], row[c])) {
                all_numeric = false;
                bad_col = static_cast<Index>(c) + 1;
                break;
            }
        }
        if (!all_numeric) {
            if (first_content_line) {  // header row, skipped
                first_content_line = false;
                continue;
            }
            throw parse_error("load_csv: non-numeric cell in " + path.string(), line_no,
                              bad_col);
        }
        first_content_line = false;
        if (n_cols < 0) n_cols = static_cast<Index>(row.size());
        if (static_cast<Index>(row.size()) != n_cols)
            throw parse_error("load_csv: ragged row in " + path.string() + ", expected "
                                  + std::to_string(n_cols) + " columns, got "
                                  + std::to_string(row.size()),
                              line_no, static_cast<Index>(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error("load_csv: no data rows in " + path.string());

    Matrix data(static_cast<Index>(rows.size()), n_cols);
    for (Index r = 0; r < data.rows(); ++r)
        for (Index c = 0; c < n_cols; ++c)
            data(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    if (!data.allFinite())
        throw parse_error("load_csv: non-finite value in " + path.string());

    if (normalize) normalize_channels(data);
    if (smooth_window > 0) smooth_channels(data, smooth_window);

    return Pattern{path.stem().string(), std::move(data)};
}

}  // namespace clab
