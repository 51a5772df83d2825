#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "vibrobench/rig.hpp"

namespace vibrobench {

enum class MeasurementKind { output_signal, current, resonance };

inline std::string to_string(MeasurementKind kind) {
    switch (kind) {
    case MeasurementKind::output_signal: return "output_signal";
    case MeasurementKind::current: return "current";
    case MeasurementKind::resonance: return "resonance";
    }
    throw std::invalid_argument("unknown measurement kind");
}

inline MeasurementKind measurement_kind_from_string(const std::string& s) {
    if (s == "output_signal") return MeasurementKind::output_signal;
    if (s == "current") return MeasurementKind::current;
    if (s == "resonance") return MeasurementKind::resonance;
    throw std::invalid_argument("unknown measurement kind: " + s);
}

enum class PhaseTag { before, after, mid };

struct MeasurementRecord {
    std::string specimen_id;
    std::optional<Axis> axis; // absent for current readings
    MeasurementKind kind = MeasurementKind::output_signal;
    PhaseTag phase = PhaseTag::before;
    std::uint64_t mid_cycle_count = 0; // meaningful for phase == mid
    double value = 0.0;                // V, A, or Hz depending on kind
    std::optional<double> excitation_g;
    double timestamp_s = 0.0; // simulated clock
};

struct SweepSpec {
    double f_start_hz = 1000.0;
    double f_end_hz = 4000.0;
    int points = 256;
    enum class Spacing { linear, logarithmic } spacing = Spacing::logarithmic;
    double excitation_g = 0.156;

    void validate() const {
        if (!(f_start_hz > 0.0 && f_end_hz > f_start_hz))
            throw std::domain_error("SweepSpec: need 0 < f_start < f_end");
        if (points < 8)
            throw std::domain_error("SweepSpec: need at least 8 points");
        if (!(excitation_g > 0.0))
            throw std::domain_error("SweepSpec: excitation must be > 0");
    }
};

class MeasurementError : public std::runtime_error {
public:
    enum class Code { edge_peak, flat_response };

    MeasurementError(Code code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Code code() const { return code_; }

private:
    Code code_;
};

namespace detail {

// Drives one axis with a small sine and reads the steady-state peak.
inline double driven_output(RigInterface& rig, const std::string& specimen_id, Axis axis,
                            double excitation_g, double frequency_hz) {
    ExcitationSpec spec;
    spec.frequency_hz = frequency_hz;
    spec.amplitude_m = amplitude_for_acceleration(excitation_g, frequency_hz);
    spec.waveform = Waveform::sine;
    rig.set_orientation(axis);
    rig.set_excitation(spec);
    return rig.read_output(specimen_id, axis);
}

} // namespace detail

// AC output magnitude above the zero-g offset. The offset is estimated
// from a zero-excitation read, not assumed.
inline MeasurementRecord measure_output_signal(RigInterface& rig, const std::string& specimen_id,
                                               Axis axis, double excitation_g,
                                               double frequency_hz) {
    if (!(excitation_g >= 0.0))
        throw std::domain_error("measure_output_signal: excitation must be >= 0");
    const double offset = detail::driven_output(rig, specimen_id, axis, 0.0, frequency_hz);
    const double driven =
        detail::driven_output(rig, specimen_id, axis, excitation_g, frequency_hz);
    rig.stop();
    MeasurementRecord record;
    record.specimen_id = specimen_id;
    record.axis = axis;
    record.kind = MeasurementKind::output_signal;
    record.value = std::abs(driven - offset);
    record.excitation_g = excitation_g;
    record.timestamp_s = rig.now();
    return record;
}

inline MeasurementRecord measure_current(RigInterface& rig, const std::string& specimen_id) {
    MeasurementRecord record;
    record.specimen_id = specimen_id;
    record.kind = MeasurementKind::current;
    record.value = rig.read_current(specimen_id);
    record.timestamp_s = rig.now();
    return record;
}

// Swept-sine resonance extraction: steps the rig across the grid,
// records the response magnitude, and refines the grid maximum by
// 3-point parabolic interpolation (in log-frequency for log spacing).
inline MeasurementRecord measure_resonance(RigInterface& rig, const std::string& specimen_id,
                                           Axis axis, const SweepSpec& sweep) {
    sweep.validate();
    const int n = sweep.points;
    std::vector<double> freq(n), mag(n);
    const bool log_spaced = sweep.spacing == SweepSpec::Spacing::logarithmic;
    const double x0 = log_spaced ? std::log(sweep.f_start_hz) : sweep.f_start_hz;
    const double x1 = log_spaced ? std::log(sweep.f_end_hz) : sweep.f_end_hz;
    const double step = (x1 - x0) / (n - 1);

    const double offset =
        detail::driven_output(rig, specimen_id, axis, 0.0, sweep.f_start_hz);
    for (int i = 0; i < n; ++i) {
        const double x = x0 + step * i;
        freq[i] = log_spaced ? std::exp(x) : x;
        const double v =
            detail::driven_output(rig, specimen_id, axis, sweep.excitation_g, freq[i]);
        mag[i] = std::abs(v - offset);
    }
    rig.stop();

    const auto [min_it, max_it] = std::minmax_element(mag.begin(), mag.end());
    const int peak = static_cast<int>(max_it - mag.begin());
    if (*max_it <= 0.0)
        throw MeasurementError(MeasurementError::Code::flat_response,
                               "measure_resonance: flat response on " + specimen_id + "/" +
                                   to_string(axis) + ", suspected dead axis");
    if (peak == 0 || peak == n - 1)
        throw MeasurementError(MeasurementError::Code::edge_peak,
                               "measure_resonance: response maximum at sweep boundary (" +
                                   std::to_string(freq[peak]) + " Hz), widen the sweep");
    if (*min_it > 0.0 && *max_it / *min_it < 1.5)
        throw MeasurementError(MeasurementError::Code::flat_response,
                               "measure_resonance: flat response on " + specimen_id + "/" +
                                   to_string(axis) + ", suspected dead axis");

    const double y0 = mag[peak - 1], y1 = mag[peak], y2 = mag[peak + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double shift = 0.0;
    if (denom != 0.0)
        shift = 0.5 * (y0 - y2) / denom;
    shift = std::clamp(shift, -0.5, 0.5);
    const double x_peak = x0 + step * (peak + shift);
    const double f_peak = log_spaced ? std::exp(x_peak) : x_peak;

    MeasurementRecord record;
    record.specimen_id = specimen_id;
    record.axis = axis;
    record.kind = MeasurementKind::resonance;
    record.value = f_peak;
    record.excitation_g = sweep.excitation_g;
    record.timestamp_s = rig.now();
    return record;
}

struct FailurePolicy {
    double output_delta_max_v = 0.007;
    double resonance_shift_max = 0.01; // relative
    double current_shift_max = 0.20;   // relative
};

struct FailureVerdict {
    struct ViolationEntry {
        std::string specimen_id;
        std::optional<Axis> axis;
        MeasurementKind kind = MeasurementKind::output_signal;
        double before = 0.0;
        double current = 0.0;
        std::string description;
    };

    bool passed = true;
    std::vector<ViolationEntry> violations;
};

// Pairs records by (specimen, axis, kind) and checks each pair against
// the policy thresholds: absolute for voltages, relative for resonance
// and current.
inline FailureVerdict detect_failure(const std::vector<MeasurementRecord>& before,
                                     const std::vector<MeasurementRecord>& current,
                                     const FailurePolicy& policy = {}) {
    using Key = std::tuple<std::string, int, MeasurementKind>;
    auto key_of = [](const MeasurementRecord& r) {
        return Key{r.specimen_id, r.axis ? static_cast<int>(*r.axis) : -1, r.kind};
    };
    std::map<Key, double> baseline;
    for (const auto& r : before)
        baseline[key_of(r)] = r.value;

    FailureVerdict verdict;
    for (const auto& r : current) {
        const auto it = baseline.find(key_of(r));
        if (it == baseline.end())
            throw std::invalid_argument("detect_failure: no baseline record for " +
                                        r.specimen_id + "/" + to_string(r.kind));
        const double b = it->second;
        const double delta = r.value - b;
        bool violated = false;
        std::string description;
        switch (r.kind) {
        case MeasurementKind::output_signal:
            violated = std::abs(delta) > policy.output_delta_max_v;
            description = "output delta " + std::to_string(std::abs(delta)) + " V > " +
                          std::to_string(policy.output_delta_max_v) + " V";
            break;
        case MeasurementKind::resonance:
            violated = b != 0.0 && std::abs(delta) / std::abs(b) > policy.resonance_shift_max;
            description = "resonance shift " + std::to_string(std::abs(delta) / std::abs(b)) +
                          " > " + std::to_string(policy.resonance_shift_max);
            break;
        case MeasurementKind::current:
            violated = b != 0.0 && std::abs(delta) / std::abs(b) > policy.current_shift_max;
            description = "current shift " + std::to_string(std::abs(delta) / std::abs(b)) +
                          " > " + std::to_string(policy.current_shift_max);
            break;
        }
        if (violated) {
            verdict.passed = false;
            verdict.violations.push_back({r.specimen_id, r.axis, r.kind, b, r.value, description});
        }
    }
    return verdict;
}

} // namespace vibrobench
