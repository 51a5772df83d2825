#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vibrobench/dut.hpp"
#include "vibrobench/excitation.hpp"

namespace vibrobench {

class RigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Contract for any vibration test backend: generator, amplifier,
// resonator and instrumentation behind one interface. run_for is
// resumable: two calls of N cycles are equivalent to one call of 2N.
class RigInterface {
public:
    virtual ~RigInterface() = default;

    virtual std::size_t capacity() const = 0;
    virtual void mount(std::vector<DutModel> specimens) = 0;
    virtual std::vector<DutModel> unmount() = 0;
    virtual void set_orientation(Axis drive_axis) = 0;
    virtual void set_excitation(const ExcitationSpec& spec) = 0;
    virtual void run_for_cycles(std::uint64_t cycles) = 0;
    // Steady-state output magnitude (peak voltage) under the current drive.
    virtual double read_output(const std::string& specimen_id, Axis axis) const = 0;
    virtual double read_current(const std::string& specimen_id) const = 0;
    virtual void stop() = 0;
    // Simulated-clock seconds since construction.
    virtual double now() const = 0;
};

// Software stand-in for the bench hardware. Axes are independent: only
// the driven axis sees the excitation, the other two report their rest
// output. Time advances on the simulated clock only.
class SimulatedRig final : public RigInterface {
public:
    explicit SimulatedRig(std::size_t capacity = 4) : capacity_(capacity) {
        if (capacity < 1)
            throw std::invalid_argument("SimulatedRig: capacity must be >= 1");
    }

    std::size_t capacity() const override { return capacity_; }

    void mount(std::vector<DutModel> specimens) override {
        if (specimens.size() > capacity_)
            throw RigError("mount: " + std::to_string(specimens.size()) +
                           " specimens exceed capacity " + std::to_string(capacity_));
        for (const auto& dut : specimens)
            dut.validate();
        specimens_ = std::move(specimens);
    }

    std::vector<DutModel> unmount() override {
        running_ = false;
        return std::exchange(specimens_, {});
    }

    void set_orientation(Axis drive_axis) override { orientation_ = drive_axis; }

    void set_excitation(const ExcitationSpec& spec) override {
        spec.validate();
        excitation_ = spec;
        running_ = true;
    }

    void run_for_cycles(std::uint64_t cycles) override {
        if (!excitation_)
            throw RigError("run_for_cycles: no excitation programmed");
        for (auto& dut : specimens_)
            dut = apply_fatigue(dut, cycles);
        sim_time_s_ += static_cast<double>(cycles) / excitation_->frequency_hz;
    }

    double read_output(const std::string& specimen_id, Axis axis) const override {
        const DutModel& dut = find(specimen_id);
        double accel_g = 0.0;
        double frequency = 0.0;
        if (running_ && excitation_ && axis == orientation_) {
            accel_g = peak_acceleration_g(excitation_->amplitude_m, excitation_->frequency_hz);
            frequency = excitation_->frequency_hz;
        }
        return output_voltage(dut, axis, accel_g, frequency);
    }

    double read_current(const std::string& specimen_id) const override {
        const DutModel& dut = find(specimen_id);
        if (dut.active_failure_mode() == FailureMode::open_output)
            return 0.05 * dut.supply_current_a;
        return dut.supply_current_a;
    }

    void stop() override { running_ = false; }

    double now() const override { return sim_time_s_; }

    const std::vector<DutModel>& mounted() const { return specimens_; }

private:
    const DutModel& find(const std::string& specimen_id) const {
        for (const auto& dut : specimens_)
            if (dut.specimen_id == specimen_id)
                return dut;
        throw RigError("specimen not mounted: " + specimen_id);
    }

    std::size_t capacity_;
    std::vector<DutModel> specimens_;
    Axis orientation_ = Axis::X;
    std::optional<ExcitationSpec> excitation_;
    bool running_ = false;
    double sim_time_s_ = 0.0;
};

} // namespace vibrobench
