#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vibrobench/measurement.hpp"

namespace vibrobench {

struct StatsSummary {
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> sample_std;        // absent for n = 1
    std::optional<double> dispersion_percent; // absent when |mean| ~ 0
    double min = 0.0;
    double max = 0.0;
};

// Sample statistics with the n-1 denominator. dispersion_percent is the
// coefficient of variation, flagged absent when the mean vanishes.
inline StatsSummary summarize(std::span<const double> values) {
    if (values.empty())
        throw std::invalid_argument("summarize: empty input");
    StatsSummary s;
    s.n = values.size();
    double sum = 0.0;
    s.min = values.front();
    s.max = values.front();
    for (double v : values) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - s.mean;
            ss += d * d;
        }
        s.sample_std = std::sqrt(ss / static_cast<double>(s.n - 1));
        if (std::abs(s.mean) >= 1e-12)
            s.dispersion_percent = 100.0 * *s.sample_std / std::abs(s.mean);
    }
    return s;
}

struct ComparisonThresholds {
    double output_delta_v = 0.007;  // absolute
    double resonance_shift = 0.01;  // relative
    double current_shift = 0.20;    // relative
};

enum class Verdict { unchanged, changed };

// One (specimen id, value) series per phase; kept alongside the
// summaries so per-figure table data can be emitted from the report.
using Series = std::vector<std::pair<std::string, double>>;

struct ComparisonBlock {
    std::optional<Axis> axis;
    MeasurementKind kind = MeasurementKind::output_signal;
    StatsSummary before;
    StatsSummary after;
    Series before_series;
    Series after_series;
    double mean_delta = 0.0;
    Verdict verdict = Verdict::unchanged;
};

struct ComparisonReport {
    std::vector<ComparisonBlock> blocks;
    // dispersion(axis) / min-axis dispersion, resonance before-population
    std::map<Axis, double> resonance_homogeneity_ratio;
    std::string campaign_label;
    ComparisonThresholds thresholds;
};

namespace detail {

using GroupKey = std::pair<int, MeasurementKind>; // axis index or -1

inline std::map<GroupKey, Series> group_series(const std::vector<MeasurementRecord>& records) {
    // sort by specimen id so grouping is independent of record order
    std::map<GroupKey, Series> out;
    for (const auto& r : records)
        out[{r.axis ? static_cast<int>(*r.axis) : -1, r.kind}].emplace_back(r.specimen_id,
                                                                            r.value);
    for (auto& [key, series] : out)
        std::sort(series.begin(), series.end());
    return out;
}

inline std::vector<double> series_values(const Series& series) {
    std::vector<double> vals;
    vals.reserve(series.size());
    for (const auto& [id, v] : series)
        vals.push_back(v);
    return vals;
}

} // namespace detail

// Pairs before/after populations per (axis, kind), applies the per-kind
// threshold to the mean delta, and derives resonance homogeneity ratios
// across axes.
inline ComparisonReport compare(const std::vector<MeasurementRecord>& before,
                                const std::vector<MeasurementRecord>& after,
                                const ComparisonThresholds& thresholds = {}) {
    const auto before_groups = detail::group_series(before);
    const auto after_groups = detail::group_series(after);
    if (before_groups.empty())
        throw std::invalid_argument("compare: no before records");

    ComparisonReport report;
    report.thresholds = thresholds;
    for (const auto& [key, before_series] : before_groups) {
        const auto it = after_groups.find(key);
        if (it == after_groups.end() || it->second.size() != before_series.size())
            throw std::invalid_argument("compare: before/after populations do not match for " +
                                        to_string(key.second));
        ComparisonBlock block;
        if (key.first >= 0)
            block.axis = static_cast<Axis>(key.first);
        block.kind = key.second;
        block.before_series = before_series;
        block.after_series = it->second;
        const auto before_vals = detail::series_values(before_series);
        const auto after_vals = detail::series_values(it->second);
        block.before = summarize(before_vals);
        block.after = summarize(after_vals);
        block.mean_delta = block.after.mean - block.before.mean;

        double threshold;
        bool relative;
        switch (block.kind) {
        case MeasurementKind::output_signal:
            threshold = thresholds.output_delta_v;
            relative = false;
            break;
        case MeasurementKind::resonance:
            threshold = thresholds.resonance_shift;
            relative = true;
            break;
        case MeasurementKind::current:
            threshold = thresholds.current_shift;
            relative = true;
            break;
        default:
            throw std::logic_error("compare: unknown kind");
        }
        const double magnitude = relative
                                     ? std::abs(block.mean_delta) /
                                           std::max(std::abs(block.before.mean), 1e-300)
                                     : std::abs(block.mean_delta);
        block.verdict = magnitude <= threshold ? Verdict::unchanged : Verdict::changed;
        report.blocks.push_back(std::move(block));
    }

    // homogeneity across axes from the before-population resonances
    std::map<Axis, double> dispersion;
    for (const auto& block : report.blocks)
        if (block.kind == MeasurementKind::resonance && block.axis &&
            block.before.dispersion_percent)
            dispersion[*block.axis] = *block.before.dispersion_percent;
    if (!dispersion.empty()) {
        double min_disp = dispersion.begin()->second;
        for (const auto& [axis, d] : dispersion)
            min_disp = std::min(min_disp, d);
        if (min_disp > 0.0)
            for (const auto& [axis, d] : dispersion)
                report.resonance_homogeneity_ratio[axis] = d / min_disp;
    }
    return report;
}

inline std::string verdict_string(Verdict v) {
    return v == Verdict::unchanged ? "unchanged" : "changed";
}

inline std::string block_label(const ComparisonBlock& block) {
    return (block.axis ? to_string(*block.axis) : std::string("-")) + "/" +
           to_string(block.kind);
}

} // namespace vibrobench
