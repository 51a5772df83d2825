#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vibrobench/axis.hpp"

namespace vibrobench {

// One sensing axis: base-excited second-order resonator with a linear
// voltage readout.
struct AxisParams {
    double natural_frequency_hz = 2000.0; // undamped f_n
    double damping_ratio = 0.05;          // zeta, must stay below 1/sqrt(2)
    double sensitivity_v_per_g = 0.66;    // DC
    double zero_g_offset_v = 1.65;

    void validate() const {
        if (!(natural_frequency_hz > 0.0))
            throw std::domain_error("AxisParams: natural frequency must be > 0");
        if (!(damping_ratio > 0.0 && damping_ratio < 1.0 / std::sqrt(2.0)))
            throw std::domain_error("AxisParams: damping ratio must be in (0, 1/sqrt(2))");
        if (!(sensitivity_v_per_g > 0.0))
            throw std::domain_error("AxisParams: sensitivity must be > 0");
    }
};

enum class FailureMode { none, stuck_output, open_output };

// Injectable degradation. All-zero shifts with failure none is the
// pristine state and must leave behavior untouched at any cycle count.
struct DegradationState {
    PerAxis<double> resonance_shift_fraction{0.0, 0.0, 0.0};
    PerAxis<double> sensitivity_drift_fraction{0.0, 0.0, 0.0};
    FailureMode failure_mode = FailureMode::none;
    std::uint64_t onset_cycle = 0;

    bool is_pristine() const {
        if (failure_mode != FailureMode::none)
            return false;
        for (Axis a : all_axes)
            if (axis_at(resonance_shift_fraction, a) != 0.0 ||
                axis_at(sensitivity_drift_fraction, a) != 0.0)
                return false;
        return true;
    }
};

// One simulated specimen.
struct DutModel {
    std::string specimen_id;
    PerAxis<AxisParams> axes{};
    double supply_current_a = 1.5e-3;
    DegradationState degradation{};
    std::uint64_t accumulated_cycles = 0;

    void validate() const {
        if (!(supply_current_a > 0.0))
            throw std::domain_error("DutModel: supply current must be > 0");
        for (Axis a : all_axes)
            axis_at(axes, a).validate();
    }

    bool degradation_active() const {
        return accumulated_cycles >= degradation.onset_cycle;
    }

    // Axis parameters with resonance shift and sensitivity drift folded in.
    AxisParams effective_axis(Axis axis) const {
        AxisParams p = axis_at(axes, axis);
        if (degradation_active()) {
            p.natural_frequency_hz *= 1.0 + axis_at(degradation.resonance_shift_fraction, axis);
            p.sensitivity_v_per_g *= 1.0 + axis_at(degradation.sensitivity_drift_fraction, axis);
        }
        return p;
    }

    FailureMode active_failure_mode() const {
        return degradation_active() ? degradation.failure_mode : FailureMode::none;
    }
};

struct PopulationSpec {
    std::size_t count = 10;
    PerAxis<double> natural_frequency_cov{0.0, 0.0, 0.0}; // fraction per axis
    double sensitivity_cov = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (count < 1)
            throw std::domain_error("PopulationSpec: count must be >= 1");
        for (Axis a : all_axes)
            if (axis_at(natural_frequency_cov, a) < 0.0)
                throw std::domain_error("PopulationSpec: CoV must be >= 0");
        if (sensitivity_cov < 0.0)
            throw std::domain_error("PopulationSpec: CoV must be >= 0");
    }
};

// |H(f)| of the base-excited resonator, normalized to 1 at DC.
// Peak gain 1/(2*zeta*sqrt(1-zeta^2)) at f_n*sqrt(1-2*zeta^2).
inline double axis_gain(const AxisParams& params, double frequency_hz) {
    params.validate();
    if (frequency_hz < 0.0)
        throw std::domain_error("axis_gain: frequency must be >= 0");
    const double r = frequency_hz / params.natural_frequency_hz;
    const double zeta = params.damping_ratio;
    const double re = 1.0 - r * r;
    const double im = 2.0 * zeta * r;
    return 1.0 / std::sqrt(re * re + im * im);
}

// Steady-state output magnitude under a sinusoidal acceleration of the
// given peak value. stuck_output freezes the output at the rest voltage;
// open_output drops it to 0 V.
inline double output_voltage(const DutModel& dut, Axis axis, double applied_acceleration_g,
                             double frequency_hz) {
    dut.validate();
    if (frequency_hz < 0.0)
        throw std::domain_error("output_voltage: frequency must be >= 0");
    switch (dut.active_failure_mode()) {
    case FailureMode::open_output:
        return 0.0;
    case FailureMode::stuck_output:
        return axis_at(dut.axes, axis).zero_g_offset_v;
    case FailureMode::none:
        break;
    }
    const AxisParams p = dut.effective_axis(axis);
    return p.zero_g_offset_v +
           p.sensitivity_v_per_g * axis_gain(p, frequency_hz) * applied_acceleration_g;
}

// Analytic peak of axis_gain for the (possibly shifted) axis.
inline double resonance_frequency_true(const DutModel& dut, Axis axis) {
    dut.validate();
    const AxisParams p = dut.effective_axis(axis);
    const double zeta = p.damping_ratio;
    return p.natural_frequency_hz * std::sqrt(1.0 - 2.0 * zeta * zeta);
}

namespace detail {

// Deterministic standard normal, independent of the standard library's
// distribution internals so seeded populations are stable across builds.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    // Truncated at +/- 4 sigma (redraw) to keep parameter invariants.
    double truncated_normal() {
        for (;;) {
            const double z = next_normal();
            if (std::abs(z) <= 4.0)
                return z;
        }
    }

private:
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Box-Muller on 53-bit uniforms
        double u1 = uniform01();
        while (u1 <= 0.0)
            u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // splitmix64
    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace detail

// Draws a reproducible population around the nominal specimen: per-axis
// natural frequency and sensitivity vary with the given coefficients of
// variation; everything else is copied. All specimens start pristine.
inline std::vector<DutModel> generate_population(const PopulationSpec& spec,
                                                 const DutModel& nominal) {
    spec.validate();
    nominal.validate();
    detail::GaussianSource rng(spec.seed);
    std::vector<DutModel> population;
    population.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        DutModel dut = nominal;
        dut.specimen_id = nominal.specimen_id.empty()
                              ? "S" + std::to_string(i + 1)
                              : nominal.specimen_id + "-" + std::to_string(i + 1);
        dut.degradation = DegradationState{};
        dut.accumulated_cycles = 0;
        for (Axis a : all_axes) {
            AxisParams& p = axis_at(dut.axes, a);
            const double fn_cov = axis_at(spec.natural_frequency_cov, a);
            if (fn_cov > 0.0)
                p.natural_frequency_hz *= 1.0 + fn_cov * rng.truncated_normal();
            if (spec.sensitivity_cov > 0.0)
                p.sensitivity_v_per_g *= 1.0 + spec.sensitivity_cov * rng.truncated_normal();
        }
        dut.validate();
        population.push_back(std::move(dut));
    }
    return population;
}

// Accumulates vibration cycles and optionally installs a damage state.
// With no damage argument the returned specimen keeps its degradation
// spec; a pristine specimen stays behaviorally identical forever.
inline DutModel apply_fatigue(const DutModel& dut, std::uint64_t cycles,
                              std::optional<DegradationState> damage = std::nullopt) {
    DutModel out = dut;
    out.accumulated_cycles += cycles;
    if (damage)
        out.degradation = *damage;
    return out;
}

} // namespace vibrobench
