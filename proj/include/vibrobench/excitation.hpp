#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vibrobench {

namespace constants {
// Standard gravity used throughout the kinematics; fixed, not configurable.
inline constexpr double g = 9.81; // m/s^2
} // namespace constants

enum class Waveform { sine, square, triangle };

// Programmable drive signal: base displacement x(t) with zero-to-peak
// amplitude A. duty_cycle applies to square only; sine and triangle
// ignore it.
struct ExcitationSpec {
    double frequency_hz = 0.0;
    double amplitude_m = 0.0; // zero-to-peak
    Waveform waveform = Waveform::sine;
    double duty_cycle = 1.0; // fraction of the period spent high (square)

    void validate() const {
        if (!(frequency_hz > 0.0))
            throw std::domain_error("ExcitationSpec: frequency must be > 0");
        if (!(amplitude_m >= 0.0))
            throw std::domain_error("ExcitationSpec: amplitude must be >= 0");
        if (!(duty_cycle > 0.0 && duty_cycle <= 1.0))
            throw std::domain_error("ExcitationSpec: duty_cycle must be in (0, 1]");
    }
};

// Peak acceleration of harmonic motion, in multiples of g:
//   n_g = A * (2*pi*f)^2 / g
inline double peak_acceleration_g(double amplitude_m, double frequency_hz) {
    if (!(amplitude_m >= 0.0))
        throw std::domain_error("peak_acceleration_g: amplitude must be >= 0");
    if (!(frequency_hz > 0.0))
        throw std::domain_error("peak_acceleration_g: frequency must be > 0");
    const double omega = 2.0 * std::numbers::pi * frequency_hz;
    return amplitude_m * omega * omega / constants::g;
}

// Inverse of peak_acceleration_g: the zero-to-peak amplitude that yields
// the target peak acceleration at the given frequency.
inline double amplitude_for_acceleration(double target_g, double frequency_hz) {
    if (!(target_g >= 0.0))
        throw std::domain_error("amplitude_for_acceleration: target must be >= 0");
    if (!(frequency_hz > 0.0))
        throw std::domain_error("amplitude_for_acceleration: frequency must be > 0");
    const double omega = 2.0 * std::numbers::pi * frequency_hz;
    return target_g * constants::g / (omega * omega);
}

// Base displacement at time t. Periodic with period 1/f; |x(t)| <= A.
inline double waveform_sample(const ExcitationSpec& spec, double t_seconds) {
    spec.validate();
    if (t_seconds < 0.0)
        throw std::domain_error("waveform_sample: t must be >= 0");
    const double period = 1.0 / spec.frequency_hz;
    double phase = std::fmod(t_seconds, period) / period; // [0, 1)
    if (phase < 0.0)
        phase += 1.0;
    switch (spec.waveform) {
    case Waveform::sine:
        return spec.amplitude_m * std::sin(2.0 * std::numbers::pi * phase);
    case Waveform::square:
        return phase < spec.duty_cycle ? spec.amplitude_m : -spec.amplitude_m;
    case Waveform::triangle:
        // rises 0 -> +A over the first quarter, falls to -A, rises back to 0
        if (phase < 0.25)
            return spec.amplitude_m * (4.0 * phase);
        if (phase < 0.75)
            return spec.amplitude_m * (2.0 - 4.0 * phase);
        return spec.amplitude_m * (4.0 * phase - 4.0);
    }
    throw std::logic_error("waveform_sample: unknown waveform");
}

} // namespace vibrobench
