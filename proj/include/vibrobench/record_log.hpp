#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vibrobench/measurement.hpp"

namespace vibrobench {

inline std::string unit_of(MeasurementKind kind) {
    switch (kind) {
    case MeasurementKind::output_signal: return "V";
    case MeasurementKind::current: return "A";
    case MeasurementKind::resonance: return "Hz";
    }
    throw std::invalid_argument("unknown measurement kind");
}

inline std::string to_string(PhaseTag tag) {
    switch (tag) {
    case PhaseTag::before: return "before";
    case PhaseTag::after: return "after";
    case PhaseTag::mid: return "mid";
    }
    throw std::invalid_argument("unknown phase tag");
}

inline PhaseTag phase_tag_from_string(const std::string& s) {
    if (s == "before") return PhaseTag::before;
    if (s == "after") return PhaseTag::after;
    if (s == "mid") return PhaseTag::mid;
    throw std::invalid_argument("unknown phase tag: " + s);
}

inline nlohmann::json record_to_json(const MeasurementRecord& record) {
    nlohmann::json j;
    j["specimen"] = record.specimen_id;
    if (record.axis)
        j["axis"] = to_string(*record.axis);
    else
        j["axis"] = nullptr;
    j["kind"] = to_string(record.kind);
    j["phase"] = to_string(record.phase);
    if (record.phase == PhaseTag::mid)
        j["cycles"] = record.mid_cycle_count;
    j["value"] = record.value;
    j["unit"] = unit_of(record.kind);
    if (record.excitation_g)
        j["excitation_g"] = *record.excitation_g;
    j["t"] = record.timestamp_s;
    return j;
}

inline MeasurementRecord record_from_json(const nlohmann::json& j) {
    MeasurementRecord record;
    record.specimen_id = j.at("specimen").get<std::string>();
    if (!j.at("axis").is_null())
        record.axis = axis_from_string(j.at("axis").get<std::string>());
    record.kind = measurement_kind_from_string(j.at("kind").get<std::string>());
    record.phase = phase_tag_from_string(j.at("phase").get<std::string>());
    if (j.contains("cycles"))
        record.mid_cycle_count = j.at("cycles").get<std::uint64_t>();
    record.value = j.at("value").get<double>();
    if (j.at("unit").get<std::string>() != unit_of(record.kind))
        throw std::invalid_argument("record unit does not match kind");
    if (j.contains("excitation_g"))
        record.excitation_g = j.at("excitation_g").get<double>();
    record.timestamp_s = j.at("t").get<double>();
    return record;
}

// Line-oriented append-only log: one JSON document per line, so an
// aborted run still leaves a parseable prefix.
class RecordLogWriter {
public:
    explicit RecordLogWriter(const std::string& path)
        : stream_(path, std::ios::out | std::ios::app) {
        if (!stream_)
            throw std::runtime_error("cannot open record log for writing: " + path);
    }

    void append(const MeasurementRecord& record) {
        stream_ << record_to_json(record).dump() << '\n';
        stream_.flush();
        if (!stream_)
            throw std::runtime_error("record log write failed");
    }

    void append_all(const std::vector<MeasurementRecord>& records) {
        for (const auto& r : records)
            append(r);
    }

private:
    std::ofstream stream_;
};

struct RecordLogParseError : std::runtime_error {
    RecordLogParseError(std::size_t line, const std::string& what)
        : std::runtime_error("record log line " + std::to_string(line) + ": " + what),
          line_number(line) {}
    std::size_t line_number;
};

inline std::vector<MeasurementRecord> read_record_log(std::istream& in) {
    std::vector<MeasurementRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty())
            continue;
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw RecordLogParseError(line_number, e.what());
        }
    }
    return records;
}

inline std::vector<MeasurementRecord> read_record_log(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open record log: " + path);
    return read_record_log(in);
}

} // namespace vibrobench
