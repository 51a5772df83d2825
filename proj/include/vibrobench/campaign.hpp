#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vibrobench/measurement.hpp"
#include "vibrobench/rig.hpp"
#include "vibrobench/test_plan.hpp"

namespace vibrobench {

enum class CampaignStatus { pending, running, paused, completed, aborted };

inline std::string to_string(CampaignStatus status) {
    switch (status) {
    case CampaignStatus::pending: return "pending";
    case CampaignStatus::running: return "running";
    case CampaignStatus::paused: return "paused";
    case CampaignStatus::completed: return "completed";
    case CampaignStatus::aborted: return "aborted";
    }
    return "?";
}

struct CampaignOptions {
    double time_scale = 0.0;     // simulated seconds per wall second; 0 = unthrottled
    bool abort_on_failure = false;
    double chunk_seconds = 60.0; // simulated seconds per engine step
    double output_excitation_g = 1.08;
    SweepSpec sweep{};
    FailurePolicy policy{};
};

struct PhaseProgress {
    std::uint64_t batch_cycles_total = 0; // summed over batches
    std::size_t batches_done = 0;
};

struct CampaignState {
    CampaignSchedule schedule;
    std::vector<PhaseProgress> phase_progress;
    CampaignStatus status = CampaignStatus::pending;
    std::string abort_reason;
    std::vector<MeasurementRecord> records;
    std::vector<std::string> events;
    std::vector<DutModel> specimens; // final specimen states
    std::size_t current_phase = 0;
};

struct Progress {
    double fraction = 0.0;
    double elapsed_cycles = 0.0; // per-specimen cycles summed over phases
    double elapsed_hours = 0.0;
    std::size_t current_phase = 0;
    CampaignStatus status = CampaignStatus::pending;
};

// Executes a compiled schedule against a rig on the simulated clock:
// before-checkpoint measurements, chunked fatigue runs with optional
// mid-phase failure checks, after-checkpoint measurements. Populations
// larger than the rig capacity run as sequential identical batches.
// cancel() is honored within one chunk; progress() is safe to call from
// other threads while running.
class CampaignEngine {
public:
    CampaignEngine(CampaignSchedule schedule, CampaignOptions options = {})
        : options_(options) {
        if (schedule.phases.empty())
            throw std::invalid_argument("CampaignEngine: empty schedule");
        state_.schedule = std::move(schedule);
        state_.phase_progress.resize(state_.schedule.phases.size());
    }

    CampaignState run(RigInterface& rig, std::vector<DutModel> specimens) {
        if (specimens.empty())
            throw std::invalid_argument("run: no specimens");
        {
            std::lock_guard lock(mutex_);
            if (state_.status != CampaignStatus::pending)
                throw std::logic_error("run: campaign already started");
            state_.status = CampaignStatus::running;
            state_.specimens = std::move(specimens);
            capacity_ = rig.capacity();
            num_batches_ = (state_.specimens.size() + capacity_ - 1) / capacity_;
        }
        event(rig, "campaign start: " + std::to_string(state_.schedule.phases.size()) +
                       " phases, " + std::to_string(state_.specimens.size()) + " specimens");
        if (options_.output_excitation_g >
            0.1 * state_.schedule.target_peak_acceleration_g)
            event(rig, "warning: output excitation " +
                           std::to_string(options_.output_excitation_g) +
                           " g exceeds 10% of plan target");

        try {
            if (state_.schedule.checkpoints.before)
                measurement_session(rig, PhaseTag::before, 0, "before");

            for (std::size_t pi = 0; pi < state_.schedule.phases.size(); ++pi) {
                {
                    std::lock_guard lock(mutex_);
                    state_.current_phase = pi;
                }
                if (!run_phase(rig, pi))
                    return snapshot(); // aborted

                event(rig, "phase " + to_string(state_.schedule.phases[pi].orientation) +
                               " complete");
            }

            if (state_.schedule.checkpoints.after) {
                measurement_session(rig, PhaseTag::after, 0, "after");
                const auto verdict =
                    detect_failure(records_with_tag(PhaseTag::before),
                                   records_with_tag(PhaseTag::after), options_.policy);
                event(rig, std::string("final verdict: ") +
                               (verdict.passed ? "pass" : "fail (" +
                                    std::to_string(verdict.violations.size()) +
                                    " violations)"));
            }
        } catch (const RigError& e) {
            finish(CampaignStatus::aborted, std::string("rig fault: ") + e.what());
            event(rig, "aborted: " + state_.abort_reason);
            return snapshot();
        }

        finish(CampaignStatus::completed, "");
        event(rig, "campaign complete");
        return snapshot();
    }

    void cancel() {
        cancel_.store(true);
        cv_.notify_all();
    }

    void pause() {
        std::lock_guard lock(mutex_);
        if (state_.status == CampaignStatus::pending ||
            state_.status == CampaignStatus::running)
            pause_requested_ = true;
    }

    void resume() {
        {
            std::lock_guard lock(mutex_);
            pause_requested_ = false;
        }
        cv_.notify_all();
    }

    Progress progress() const {
        std::lock_guard lock(mutex_);
        Progress p;
        double planned_total = 0.0;
        for (std::size_t i = 0; i < state_.schedule.phases.size(); ++i) {
            const auto& phase = state_.schedule.phases[i];
            const auto& pp = state_.phase_progress[i];
            const double per_specimen =
                static_cast<double>(pp.batch_cycles_total) / num_batches_;
            p.elapsed_cycles += per_specimen;
            p.elapsed_hours += per_specimen / phase.excitation.frequency_hz / 3600.0;
            planned_total += static_cast<double>(phase.planned_cycles);
        }
        p.fraction = planned_total > 0.0 ? p.elapsed_cycles / planned_total : 0.0;
        p.current_phase = state_.current_phase;
        p.status = state_.status;
        return p;
    }

    CampaignState snapshot() const {
        std::lock_guard lock(mutex_);
        return state_;
    }

private:
    std::vector<std::vector<std::size_t>> batch_indices() const {
        std::vector<std::vector<std::size_t>> batches;
        const std::size_t cap = capacity_;
        for (std::size_t i = 0; i < state_.specimens.size(); i += cap) {
            std::vector<std::size_t> batch;
            for (std::size_t j = i; j < std::min(i + cap, state_.specimens.size()); ++j)
                batch.push_back(j);
            batches.push_back(std::move(batch));
        }
        return batches;
    }

    // Runs one phase over all batches. Returns false if the campaign
    // aborted (cancellation or detected failure).
    bool run_phase(RigInterface& rig, std::size_t phase_index) {
        const auto batches = batch_indices();
        const Phase& phase = state_.schedule.phases[phase_index];
        event(rig, "phase " + to_string(phase.orientation) + " start: " +
                       std::to_string(phase.planned_cycles) + " cycles per specimen, " +
                       std::to_string(batches.size()) + " batch(es)");

        const double f = phase.excitation.frequency_hz;
        std::uint64_t chunk_cycles =
            static_cast<std::uint64_t>(std::llround(options_.chunk_seconds * f));
        if (chunk_cycles == 0)
            chunk_cycles = 1;

        for (const auto& batch : batches) {
            std::vector<DutModel> mounted;
            for (std::size_t idx : batch)
                mounted.push_back(state_.specimens[idx]);
            rig.mount(std::move(mounted));
            rig.set_orientation(phase.orientation);
            rig.set_excitation(phase.excitation);

            std::uint64_t elapsed = 0;
            std::uint64_t last_checkpoint = 0;
            while (elapsed < phase.planned_cycles) {
                wait_if_paused();
                if (cancel_.load()) {
                    save_batch(rig, batch);
                    finish(CampaignStatus::aborted, "cancelled");
                    event(rig, "aborted: cancelled");
                    return false;
                }
                const std::uint64_t step =
                    std::min(chunk_cycles, phase.planned_cycles - elapsed);
                rig.run_for_cycles(step);
                elapsed += step;
                {
                    std::lock_guard lock(mutex_);
                    state_.phase_progress[phase_index].batch_cycles_total += step;
                }
                throttle(step, f);

                const auto& interval = state_.schedule.checkpoints.mid_interval_cycles;
                if (interval && elapsed - last_checkpoint >= *interval &&
                    elapsed < phase.planned_cycles) {
                    last_checkpoint = elapsed;
                    if (!mid_checkpoint(rig, batch, phase, elapsed))
                        return false;
                }
            }
            save_batch(rig, batch);
            {
                std::lock_guard lock(mutex_);
                state_.phase_progress[phase_index].batches_done++;
            }
        }
        return true;
    }

    // Measures the mounted batch and compares against the before
    // records. Returns false if the campaign aborted on a failure.
    bool mid_checkpoint(RigInterface& rig, const std::vector<std::size_t>& batch,
                        const Phase& phase, std::uint64_t elapsed) {
        event(rig, "checkpoint at " + std::to_string(elapsed) + " cycles");
        std::vector<MeasurementRecord> current;
        for (std::size_t idx : batch) {
            const std::string& id = state_.specimens[idx].specimen_id;
            measure_specimen(rig, id, phase.excitation.frequency_hz, PhaseTag::mid, elapsed,
                             current);
        }
        {
            std::lock_guard lock(mutex_);
            state_.records.insert(state_.records.end(), current.begin(), current.end());
        }
        // restore the fatigue drive
        rig.set_orientation(phase.orientation);
        rig.set_excitation(phase.excitation);

        const auto verdict =
            detect_failure(records_with_tag(PhaseTag::before), current, options_.policy);
        if (!verdict.passed) {
            std::string detail = verdict.violations.front().specimen_id + ": " +
                                 verdict.violations.front().description;
            event(rig, "checkpoint verdict: fail (" + detail + ")");
            if (options_.abort_on_failure) {
                save_batch(rig, batch);
                finish(CampaignStatus::aborted, "failure: " + detail);
                event(rig, "aborted: " + state_.abort_reason);
                return false;
            }
        } else {
            event(rig, "checkpoint verdict: pass");
        }
        return true;
    }

    // One full characterization of every specimen: output per axis,
    // resonance per axis, supply current.
    void measurement_session(RigInterface& rig, PhaseTag tag, std::uint64_t cycle_count,
                             const std::string& label) {
        event(rig, "measurement session (" + label + ")");
        const double f = state_.schedule.phases.front().excitation.frequency_hz;
        for (const auto& batch : batch_indices()) {
            std::vector<DutModel> mounted;
            for (std::size_t idx : batch)
                mounted.push_back(state_.specimens[idx]);
            rig.mount(std::move(mounted));
            std::vector<MeasurementRecord> session;
            for (std::size_t idx : batch)
                measure_specimen(rig, state_.specimens[idx].specimen_id, f, tag, cycle_count,
                                 session);
            {
                std::lock_guard lock(mutex_);
                state_.records.insert(state_.records.end(), session.begin(), session.end());
            }
            save_batch(rig, batch);
        }
    }

    void measure_specimen(RigInterface& rig, const std::string& id, double frequency_hz,
                          PhaseTag tag, std::uint64_t cycle_count,
                          std::vector<MeasurementRecord>& out) {
        auto stamp = [&](MeasurementRecord r) {
            r.phase = tag;
            r.mid_cycle_count = cycle_count;
            out.push_back(std::move(r));
        };
        for (Axis axis : all_axes)
            stamp(measure_output_signal(rig, id, axis, options_.output_excitation_g,
                                        frequency_hz));
        for (Axis axis : all_axes) {
            try {
                stamp(measure_resonance(rig, id, axis, options_.sweep));
            } catch (const MeasurementError& e) {
                event(rig, std::string("measurement error on ") + id + "/" +
                               to_string(axis) + ": " + e.what());
            }
        }
        stamp(measure_current(rig, id));
    }

    std::vector<MeasurementRecord> records_with_tag(PhaseTag tag) const {
        std::lock_guard lock(mutex_);
        std::vector<MeasurementRecord> out;
        for (const auto& r : state_.records)
            if (r.phase == tag)
                out.push_back(r);
        return out;
    }

    void save_batch(RigInterface& rig, const std::vector<std::size_t>& batch) {
        auto updated = rig.unmount();
        std::lock_guard lock(mutex_);
        for (std::size_t k = 0; k < batch.size() && k < updated.size(); ++k)
            state_.specimens[batch[k]] = std::move(updated[k]);
    }

    // Blocks at a chunk boundary while paused; cancel wakes it up.
    void wait_if_paused() {
        std::unique_lock lock(mutex_);
        if (!pause_requested_)
            return;
        state_.status = CampaignStatus::paused;
        cv_.wait(lock, [&] { return !pause_requested_ || cancel_.load(); });
        if (state_.status == CampaignStatus::paused)
            state_.status = CampaignStatus::running;
    }

    void throttle(std::uint64_t cycles, double frequency_hz) {
        if (options_.time_scale <= 0.0)
            return;
        const double sim_seconds = static_cast<double>(cycles) / frequency_hz;
        std::this_thread::sleep_for(
            std::chrono::duration<double>(sim_seconds / options_.time_scale));
    }

    void finish(CampaignStatus status, const std::string& reason) {
        std::lock_guard lock(mutex_);
        state_.status = status;
        state_.abort_reason = reason;
    }

    void event(RigInterface& rig, const std::string& message) {
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(3);
        os << "[t=" << rig.now() << "s] " << message;
        std::lock_guard lock(mutex_);
        state_.events.push_back(os.str());
    }

    CampaignOptions options_;
    CampaignState state_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::atomic<bool> cancel_{false};
    bool pause_requested_ = false;
    std::size_t capacity_ = 4;
    std::size_t num_batches_ = 1;
};

inline CampaignState run_campaign(const CampaignSchedule& schedule, RigInterface& rig,
                                  std::vector<DutModel> specimens,
                                  const CampaignOptions& options = {}) {
    CampaignEngine engine(schedule, options);
    return engine.run(rig, std::move(specimens));
}

} // namespace vibrobench
