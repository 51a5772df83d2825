#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vibrobench/record_log.hpp"
#include "vibrobench/stats.hpp"

namespace vibrobench {

namespace detail {

inline nlohmann::json summary_to_json(const StatsSummary& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["mean"] = s.mean;
    if (s.sample_std)
        j["sample_std"] = *s.sample_std;
    if (s.dispersion_percent)
        j["dispersion_percent"] = *s.dispersion_percent;
    j["min"] = s.min;
    j["max"] = s.max;
    return j;
}

inline StatsSummary summary_from_json(const nlohmann::json& j) {
    StatsSummary s;
    s.n = j.at("n").get<std::size_t>();
    s.mean = j.at("mean").get<double>();
    if (j.contains("sample_std"))
        s.sample_std = j.at("sample_std").get<double>();
    if (j.contains("dispersion_percent"))
        s.dispersion_percent = j.at("dispersion_percent").get<double>();
    s.min = j.at("min").get<double>();
    s.max = j.at("max").get<double>();
    return s;
}

inline nlohmann::json series_to_json(const Series& series) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [id, v] : series)
        j.push_back({{"specimen", id}, {"value", v}});
    return j;
}

inline Series series_from_json(const nlohmann::json& j) {
    Series series;
    for (const auto& entry : j)
        series.emplace_back(entry.at("specimen").get<std::string>(),
                            entry.at("value").get<double>());
    return series;
}

} // namespace detail

// Machine-readable, self-describing report. report_from_json inverts it
// exactly.
inline nlohmann::json report_to_json(const ComparisonReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["campaign"] = report.campaign_label;
    j["thresholds"] = {{"output_delta_v", report.thresholds.output_delta_v},
                       {"resonance_shift", report.thresholds.resonance_shift},
                       {"current_shift", report.thresholds.current_shift}};
    j["blocks"] = nlohmann::json::array();
    for (const auto& block : report.blocks) {
        nlohmann::json b;
        if (block.axis)
            b["axis"] = to_string(*block.axis);
        else
            b["axis"] = nullptr;
        b["kind"] = to_string(block.kind);
        b["before"] = detail::summary_to_json(block.before);
        b["after"] = detail::summary_to_json(block.after);
        b["before_series"] = detail::series_to_json(block.before_series);
        b["after_series"] = detail::series_to_json(block.after_series);
        b["mean_delta"] = block.mean_delta;
        b["verdict"] = verdict_string(block.verdict);
        j["blocks"].push_back(std::move(b));
    }
    nlohmann::json ratios = nlohmann::json::object();
    for (const auto& [axis, ratio] : report.resonance_homogeneity_ratio)
        ratios[to_string(axis)] = ratio;
    j["resonance_homogeneity_ratio"] = std::move(ratios);
    return j;
}

inline ComparisonReport report_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != 1)
        throw std::invalid_argument("unsupported report schema version");
    ComparisonReport report;
    report.campaign_label = j.at("campaign").get<std::string>();
    report.thresholds.output_delta_v = j.at("thresholds").at("output_delta_v").get<double>();
    report.thresholds.resonance_shift = j.at("thresholds").at("resonance_shift").get<double>();
    report.thresholds.current_shift = j.at("thresholds").at("current_shift").get<double>();
    for (const auto& b : j.at("blocks")) {
        ComparisonBlock block;
        if (!b.at("axis").is_null())
            block.axis = axis_from_string(b.at("axis").get<std::string>());
        block.kind = measurement_kind_from_string(b.at("kind").get<std::string>());
        block.before = detail::summary_from_json(b.at("before"));
        block.after = detail::summary_from_json(b.at("after"));
        block.before_series = detail::series_from_json(b.at("before_series"));
        block.after_series = detail::series_from_json(b.at("after_series"));
        block.mean_delta = b.at("mean_delta").get<double>();
        block.verdict = b.at("verdict").get<std::string>() == "unchanged" ? Verdict::unchanged
                                                                          : Verdict::changed;
        report.blocks.push_back(std::move(block));
    }
    for (const auto& [axis, ratio] : j.at("resonance_homogeneity_ratio").items())
        report.resonance_homogeneity_ratio[axis_from_string(axis)] = ratio.get<double>();
    return report;
}

inline std::string report_to_text(const ComparisonReport& report) {
    std::ostringstream os;
    os << "Before/after comparison";
    if (!report.campaign_label.empty())
        os << " (" << report.campaign_label << ")";
    os << "\n";
    os << std::setprecision(6);
    for (const auto& block : report.blocks) {
        os << "  " << block_label(block) << ": mean " << block.before.mean << " -> "
           << block.after.mean << " " << unit_of(block.kind) << ", delta "
           << block.mean_delta;
        if (block.before.dispersion_percent)
            os << ", dispersion " << *block.before.dispersion_percent << "% -> "
               << (block.after.dispersion_percent ? *block.after.dispersion_percent : 0.0)
               << "%";
        os << " -- " << verdict_string(block.verdict) << "\n";
    }
    if (!report.resonance_homogeneity_ratio.empty()) {
        os << "  resonance homogeneity ratios:";
        for (const auto& [axis, ratio] : report.resonance_homogeneity_ratio)
            os << " " << to_string(axis) << "=" << ratio;
        os << "\n";
    }
    return os.str();
}

// One file per figure analogue: output and resonance series per axis,
// before and after sections, two numeric columns (specimen index, value).
inline std::vector<std::filesystem::path>
emit_table_data(const ComparisonReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& block : report.blocks) {
        if (!block.axis)
            continue;
        if (block.kind != MeasurementKind::output_signal &&
            block.kind != MeasurementKind::resonance)
            continue;
        const std::string stem =
            (block.kind == MeasurementKind::output_signal ? "output_" : "resonance_") +
            to_string(*block.axis);
        const auto path = dir / (stem + ".dat");
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write table file: " + path.string());
        out << std::setprecision(12);
        auto write_section = [&](const char* phase, const Series& series) {
            out << "# " << to_string(*block.axis) << " " << to_string(block.kind) << " "
                << phase << "\n";
            for (std::size_t i = 0; i < series.size(); ++i)
                out << i + 1 << " " << series[i].second << "\n";
        };
        write_section("before", block.before_series);
        out << "\n";
        write_section("after", block.after_series);
        written.push_back(path);
    }
    return written;
}

} // namespace vibrobench
