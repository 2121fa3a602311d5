#include "clab/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clab {

namespace {

double population_variance(const Vector& v) {
    const double mean = v.mean();
    return (v.array() - mean).square().mean();
}

}  // namespace

double rmse(const Vector& observed, const Vector& target) {
    if (observed.size() != target.size() || observed.size() < 1)
        throw std::invalid_argument("rmse: vectors must be non-empty and of equal length");
    return std::sqrt((observed - target).squaredNorm() / static_cast<double>(target.size()));
}

double nrmse(const Vector& observed, const Vector& target) {
    const double var = population_variance(target);
    if (observed.size() != target.size() || observed.size() < 1)
        throw std::invalid_argument("nrmse: vectors must be non-empty and of equal length");
    if (var <= 0.0)
        throw numeric_error("nrmse: target has zero variance, normalization undefined");
    return rmse(observed, target) / std::sqrt(var);
}

std::pair<Index, double> phase_align(const Vector& observed, const Vector& target,
                                     Index d_max) {
    if (d_max < 1) throw std::invalid_argument("phase_align: d_max must be >= 1");
    const Index k = std::min(observed.size(), target.size());
    Index best_d = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index d = 1; d <= std::min(d_max, k - 1); ++d) {
        const Index len = k - d + 1;
        const Vector tgt = target.head(len);
        if (population_variance(tgt) <= 0.0) continue;
        const double err = nrmse(observed.segment(d - 1, len), tgt);
        if (err < best) {
            best = err;
            best_d = d;
        }
    }
    if (best_d == 0)
        throw numeric_error("phase_align: no admissible shift in [1, d_max]");
    return {best_d, best};
}

NrmseReport nrmse_multichannel(const Matrix& observed, const Matrix& target) {
    if (observed.rows() != target.rows() || observed.cols() != target.cols()
        || observed.rows() < 1)
        throw std::invalid_argument("nrmse_multichannel: shape mismatch");

    NrmseReport report;
    report.compared_steps = observed.rows();
    report.per_channel.resize(target.cols());
    std::vector<double> valid;
    for (Index c = 0; c < target.cols(); ++c) {
        if (population_variance(target.col(c)) <= 0.0) {
            report.per_channel(c) = std::numeric_limits<double>::quiet_NaN();
            report.skipped.push_back(c);
            continue;
        }
        report.per_channel(c) = nrmse(observed.col(c), target.col(c));
        valid.push_back(report.per_channel(c));
    }
    if (valid.empty())
        throw numeric_error("nrmse_multichannel: every target channel is constant");

    const double n = static_cast<double>(valid.size());
    report.min = *std::min_element(valid.begin(), valid.end());
    report.max = *std::max_element(valid.begin(), valid.end());
    double sum = 0.0;
    for (double v : valid) sum += v;
    report.mean = sum / n;
    double sq = 0.0;
    for (double v : valid) sq += (v - report.mean) * (v - report.mean);
    report.stddev = std::sqrt(sq / n);
    return report;
}

std::pair<double, double> long_term_stability(const Vector& observed, const Vector& target,
                                              Index k) {
    if (k < 1 || k > std::min(observed.size(), target.size()))
        throw std::invalid_argument("long_term_stability: k out of range");
    const double first = nrmse(observed.head(k), target.head(k));
    const double last = nrmse(observed.tail(k), target.tail(k));
    return {first, last};
}

std::pair<double, double> long_term_stability(const Matrix& observed, const Matrix& target,
                                              Index k) {
    if (k < 1 || k > std::min(observed.rows(), target.rows()))
        throw std::invalid_argument("long_term_stability: k out of range");
    const auto first = nrmse_multichannel(observed.topRows(k), target.topRows(k));
    const auto last = nrmse_multichannel(observed.bottomRows(k), target.bottomRows(k));
    return {first.mean, last.mean};
}

}  // namespace clab
