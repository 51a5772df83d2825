#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vibrobench/axis.hpp"
#include "vibrobench/excitation.hpp"

namespace vibrobench {

// Envelope of the standard test condition: 60 +/- 20 Hz, 20 g peak,
// 32 +/- 8 hours minimum per orientation.
struct FatigueTestCondition {
    double target_peak_acceleration_g = 20.0;
    double frequency_hz = 80.0;
    double duration_hours = 32.0;
    std::vector<Axis> orientations{Axis::X, Axis::Y, Axis::Z};
    Waveform waveform = Waveform::sine;
    // Optional explicit drive amplitude; when present it must be
    // consistent with the target acceleration under the kinematics.
    std::optional<double> amplitude_m;
};

struct Violation {
    std::string field;
    std::string bound;
    std::string actual;

    std::string to_string() const { return field + ": expected " + bound + ", got " + actual; }
};

namespace plan_limits {
inline constexpr double frequency_min_hz = 40.0;
inline constexpr double frequency_max_hz = 80.0;
inline constexpr double duration_min_h = 24.0;
inline constexpr double duration_max_h = 40.0;
inline constexpr double amplitude_tolerance = 0.005; // relative, vs target acceleration
} // namespace plan_limits

// Checks the condition against the standard envelope. Violations are
// returned as data; an empty list means the condition is acceptable.
inline std::vector<Violation> validate_condition(const FatigueTestCondition& cond) {
    std::vector<Violation> violations;
    auto num = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    if (!(cond.target_peak_acceleration_g > 0.0))
        violations.push_back({"target_peak_acceleration_g", "> 0", num(cond.target_peak_acceleration_g)});
    if (cond.frequency_hz < plan_limits::frequency_min_hz ||
        cond.frequency_hz > plan_limits::frequency_max_hz)
        violations.push_back({"frequency_hz", "[40, 80]", num(cond.frequency_hz)});
    if (cond.duration_hours < plan_limits::duration_min_h ||
        cond.duration_hours > plan_limits::duration_max_h)
        violations.push_back({"duration_hours", "[24, 40]", num(cond.duration_hours)});
    if (cond.orientations.empty())
        violations.push_back({"orientations", "non-empty", "[]"});
    for (std::size_t i = 0; i < cond.orientations.size(); ++i)
        for (std::size_t j = i + 1; j < cond.orientations.size(); ++j)
            if (cond.orientations[i] == cond.orientations[j]) {
                violations.push_back({"orientations", "no duplicates",
                                      "duplicate " + to_string(cond.orientations[i])});
                i = cond.orientations.size();
                break;
            }
    if (cond.amplitude_m && cond.frequency_hz > 0.0 && cond.target_peak_acceleration_g > 0.0) {
        const double actual_g = peak_acceleration_g(*cond.amplitude_m, cond.frequency_hz);
        const double rel = std::abs(actual_g - cond.target_peak_acceleration_g) /
                           cond.target_peak_acceleration_g;
        if (rel > plan_limits::amplitude_tolerance)
            violations.push_back({"amplitude_m",
                                  "peak acceleration within 0.5% of " +
                                      num(cond.target_peak_acceleration_g) + " g",
                                  num(actual_g) + " g from " + num(*cond.amplitude_m) + " m"});
    }
    return violations;
}

struct CheckpointPolicy {
    bool before = true;
    bool after = true;
    std::optional<std::uint64_t> mid_interval_cycles; // off by default
};

struct Phase {
    Axis orientation = Axis::X;
    ExcitationSpec excitation;
    std::uint64_t planned_cycles = 0; // per specimen
    double planned_duration_s = 0.0;
};

struct CampaignSchedule {
    std::vector<Phase> phases;
    CheckpointPolicy checkpoints;
    double target_peak_acceleration_g = 0.0;
};

// Compiles a validated condition into one phase per orientation. The
// drive amplitude always comes from the kinematic inversion, never from
// an explicit amplitude field.
inline CampaignSchedule compile_schedule(const FatigueTestCondition& cond) {
    const auto violations = validate_condition(cond);
    if (!violations.empty()) {
        std::string msg = "compile_schedule: condition invalid:";
        for (const auto& v : violations)
            msg += "\n  " + v.to_string();
        throw std::invalid_argument(msg);
    }
    CampaignSchedule schedule;
    schedule.target_peak_acceleration_g = cond.target_peak_acceleration_g;
    const double duration_s = cond.duration_hours * 3600.0;
    for (Axis orientation : cond.orientations) {
        Phase phase;
        phase.orientation = orientation;
        phase.excitation.frequency_hz = cond.frequency_hz;
        phase.excitation.amplitude_m =
            amplitude_for_acceleration(cond.target_peak_acceleration_g, cond.frequency_hz);
        phase.excitation.waveform = cond.waveform;
        phase.planned_duration_s = duration_s;
        phase.planned_cycles =
            static_cast<std::uint64_t>(std::llround(cond.frequency_hz * duration_s));
        schedule.phases.push_back(phase);
    }
    return schedule;
}

inline std::uint64_t total_planned_cycles(const CampaignSchedule& schedule) {
    std::uint64_t total = 0;
    for (const auto& phase : schedule.phases)
        total += phase.planned_cycles;
    return total;
}

} // namespace vibrobench
