#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vibrobench/campaign.hpp"
#include "vibrobench/dut.hpp"
#include "vibrobench/stats.hpp"
#include "vibrobench/test_plan.hpp"

namespace vibrobench {

inline std::string to_string(FailureMode mode) {
    switch (mode) {
    case FailureMode::none: return "none";
    case FailureMode::stuck_output: return "stuck_output";
    case FailureMode::open_output: return "open_output";
    }
    throw std::invalid_argument("unknown failure mode");
}

inline FailureMode failure_mode_from_string(const std::string& s) {
    if (s == "none") return FailureMode::none;
    if (s == "stuck_output") return FailureMode::stuck_output;
    if (s == "open_output") return FailureMode::open_output;
    throw std::invalid_argument("unknown failure mode: " + s);
}

inline std::string to_string(Waveform w) {
    switch (w) {
    case Waveform::sine: return "sine";
    case Waveform::square: return "square";
    case Waveform::triangle: return "triangle";
    }
    throw std::invalid_argument("unknown waveform");
}

inline Waveform waveform_from_string(const std::string& s) {
    if (s == "sine") return Waveform::sine;
    if (s == "square") return Waveform::square;
    if (s == "triangle") return Waveform::triangle;
    throw std::invalid_argument("unknown waveform: " + s);
}

namespace detail {

inline PerAxis<double> per_axis_from_json(const nlohmann::json& j, double fallback = 0.0) {
    PerAxis<double> out{fallback, fallback, fallback};
    for (Axis a : all_axes)
        if (j.contains(to_string(a)))
            axis_at(out, a) = j.at(to_string(a)).get<double>();
    return out;
}

inline nlohmann::json per_axis_to_json(const PerAxis<double>& values) {
    nlohmann::json j;
    for (Axis a : all_axes)
        j[to_string(a)] = axis_at(values, a);
    return j;
}

} // namespace detail

inline nlohmann::json axis_params_to_json(const AxisParams& p) {
    return {{"natural_frequency_hz", p.natural_frequency_hz},
            {"damping_ratio", p.damping_ratio},
            {"sensitivity_v_per_g", p.sensitivity_v_per_g},
            {"zero_g_offset_v", p.zero_g_offset_v}};
}

inline AxisParams axis_params_from_json(const nlohmann::json& j, AxisParams base = {}) {
    if (j.contains("natural_frequency_hz"))
        base.natural_frequency_hz = j.at("natural_frequency_hz").get<double>();
    if (j.contains("damping_ratio"))
        base.damping_ratio = j.at("damping_ratio").get<double>();
    if (j.contains("sensitivity_v_per_g"))
        base.sensitivity_v_per_g = j.at("sensitivity_v_per_g").get<double>();
    if (j.contains("zero_g_offset_v"))
        base.zero_g_offset_v = j.at("zero_g_offset_v").get<double>();
    return base;
}

inline nlohmann::json degradation_to_json(const DegradationState& d) {
    return {{"resonance_shift_fraction", detail::per_axis_to_json(d.resonance_shift_fraction)},
            {"sensitivity_drift_fraction",
             detail::per_axis_to_json(d.sensitivity_drift_fraction)},
            {"failure_mode", to_string(d.failure_mode)},
            {"onset_cycle", d.onset_cycle}};
}

inline DegradationState degradation_from_json(const nlohmann::json& j) {
    DegradationState d;
    if (j.contains("resonance_shift_fraction"))
        d.resonance_shift_fraction = detail::per_axis_from_json(j.at("resonance_shift_fraction"));
    if (j.contains("sensitivity_drift_fraction"))
        d.sensitivity_drift_fraction =
            detail::per_axis_from_json(j.at("sensitivity_drift_fraction"));
    if (j.contains("failure_mode"))
        d.failure_mode = failure_mode_from_string(j.at("failure_mode").get<std::string>());
    if (j.contains("onset_cycle"))
        d.onset_cycle = j.at("onset_cycle").get<std::uint64_t>();
    return d;
}

inline nlohmann::json dut_to_json(const DutModel& dut) {
    nlohmann::json axes;
    for (Axis a : all_axes)
        axes[to_string(a)] = axis_params_to_json(axis_at(dut.axes, a));
    return {{"specimen_id", dut.specimen_id},
            {"axes", std::move(axes)},
            {"supply_current_a", dut.supply_current_a},
            {"degradation", degradation_to_json(dut.degradation)},
            {"accumulated_cycles", dut.accumulated_cycles}};
}

inline DutModel dut_from_json(const nlohmann::json& j, const DutModel& base = {}) {
    DutModel dut = base;
    if (j.contains("specimen_id"))
        dut.specimen_id = j.at("specimen_id").get<std::string>();
    if (j.contains("supply_current_a"))
        dut.supply_current_a = j.at("supply_current_a").get<double>();
    if (j.contains("axes"))
        for (Axis a : all_axes)
            if (j.at("axes").contains(to_string(a)))
                axis_at(dut.axes, a) =
                    axis_params_from_json(j.at("axes").at(to_string(a)), axis_at(base.axes, a));
    if (j.contains("degradation"))
        dut.degradation = degradation_from_json(j.at("degradation"));
    if (j.contains("accumulated_cycles"))
        dut.accumulated_cycles = j.at("accumulated_cycles").get<std::uint64_t>();
    dut.validate();
    return dut;
}

inline nlohmann::json population_spec_to_json(const PopulationSpec& spec) {
    return {{"count", spec.count},
            {"natural_frequency_cov", detail::per_axis_to_json(spec.natural_frequency_cov)},
            {"sensitivity_cov", spec.sensitivity_cov},
            {"seed", spec.seed}};
}

inline PopulationSpec population_spec_from_json(const nlohmann::json& j) {
    PopulationSpec spec;
    if (j.contains("count"))
        spec.count = j.at("count").get<std::size_t>();
    if (j.contains("natural_frequency_cov"))
        spec.natural_frequency_cov = detail::per_axis_from_json(j.at("natural_frequency_cov"));
    if (j.contains("sensitivity_cov"))
        spec.sensitivity_cov = j.at("sensitivity_cov").get<double>();
    if (j.contains("seed"))
        spec.seed = j.at("seed").get<std::uint64_t>();
    spec.validate();
    return spec;
}

inline FatigueTestCondition condition_from_json(const nlohmann::json& j) {
    FatigueTestCondition cond;
    cond.target_peak_acceleration_g = j.at("target_peak_acceleration_g").get<double>();
    cond.frequency_hz = j.at("frequency_hz").get<double>();
    cond.duration_hours = j.at("duration_hours").get<double>();
    cond.orientations.clear();
    for (const auto& o : j.at("orientations"))
        cond.orientations.push_back(axis_from_string(o.get<std::string>()));
    if (j.contains("waveform"))
        cond.waveform = waveform_from_string(j.at("waveform").get<std::string>());
    if (j.contains("amplitude_m"))
        cond.amplitude_m = j.at("amplitude_m").get<double>();
    return cond;
}

inline SweepSpec sweep_from_json(const nlohmann::json& j) {
    SweepSpec sweep;
    if (j.contains("f_start_hz"))
        sweep.f_start_hz = j.at("f_start_hz").get<double>();
    if (j.contains("f_end_hz"))
        sweep.f_end_hz = j.at("f_end_hz").get<double>();
    if (j.contains("points"))
        sweep.points = j.at("points").get<int>();
    if (j.contains("spacing"))
        sweep.spacing = j.at("spacing").get<std::string>() == "linear"
                            ? SweepSpec::Spacing::linear
                            : SweepSpec::Spacing::logarithmic;
    if (j.contains("excitation_g"))
        sweep.excitation_g = j.at("excitation_g").get<double>();
    sweep.validate();
    return sweep;
}

// Damage spec attached to one specimen of the generated population.
struct DamageInjection {
    std::size_t specimen_index = 0;
    DegradationState damage;
};

// Everything one campaign invocation needs, parsed from a single file.
struct CampaignConfig {
    FatigueTestCondition condition;
    DutModel nominal;
    std::optional<PopulationSpec> population;
    std::vector<DutModel> explicit_specimens;
    double output_excitation_g = 1.08;
    SweepSpec sweep;
    ComparisonThresholds thresholds;
    CheckpointPolicy checkpoints;
    std::optional<DamageInjection> inject_damage;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed; // overrides population.seed when set
    double time_scale = 0.0;
    bool abort_on_failure = false;
};

inline CampaignConfig config_from_json(const nlohmann::json& j) {
    CampaignConfig cfg;
    cfg.condition = condition_from_json(j.at("condition"));
    if (j.contains("nominal"))
        cfg.nominal = dut_from_json(j.at("nominal"));
    if (j.contains("population"))
        cfg.population = population_spec_from_json(j.at("population"));
    if (j.contains("specimens"))
        for (const auto& s : j.at("specimens"))
            cfg.explicit_specimens.push_back(dut_from_json(s, cfg.nominal));
    if (!cfg.population && cfg.explicit_specimens.empty())
        throw std::invalid_argument("config: need either a population or explicit specimens");
    if (j.contains("measurement")) {
        const auto& m = j.at("measurement");
        if (m.contains("output_excitation_g"))
            cfg.output_excitation_g = m.at("output_excitation_g").get<double>();
        if (m.contains("sweep"))
            cfg.sweep = sweep_from_json(m.at("sweep"));
    }
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        if (t.contains("output_delta_v"))
            cfg.thresholds.output_delta_v = t.at("output_delta_v").get<double>();
        if (t.contains("resonance_shift"))
            cfg.thresholds.resonance_shift = t.at("resonance_shift").get<double>();
        if (t.contains("current_shift"))
            cfg.thresholds.current_shift = t.at("current_shift").get<double>();
    }
    if (j.contains("checkpoints")) {
        const auto& c = j.at("checkpoints");
        if (c.contains("before"))
            cfg.checkpoints.before = c.at("before").get<bool>();
        if (c.contains("after"))
            cfg.checkpoints.after = c.at("after").get<bool>();
        if (c.contains("mid_interval_cycles") && !c.at("mid_interval_cycles").is_null())
            cfg.checkpoints.mid_interval_cycles =
                c.at("mid_interval_cycles").get<std::uint64_t>();
    }
    if (j.contains("inject_damage")) {
        DamageInjection inj;
        inj.specimen_index = j.at("inject_damage").value("specimen_index", 0u);
        inj.damage = degradation_from_json(j.at("inject_damage"));
        cfg.inject_damage = inj;
    }
    if (j.contains("out_dir"))
        cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("seed"))
        cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("time_scale"))
        cfg.time_scale = j.at("time_scale").get<double>();
    if (j.contains("abort_on_failure"))
        cfg.abort_on_failure = j.at("abort_on_failure").get<bool>();
    return cfg;
}

inline CampaignConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config: " + path);
    return config_from_json(nlohmann::json::parse(in));
}

// Materializes the specimen set: explicit list as-is, otherwise a seeded
// population around the nominal, with any configured damage installed.
inline std::vector<DutModel> build_specimens(const CampaignConfig& cfg) {
    std::vector<DutModel> specimens;
    if (!cfg.explicit_specimens.empty()) {
        specimens = cfg.explicit_specimens;
    } else {
        PopulationSpec spec = *cfg.population;
        if (cfg.seed)
            spec.seed = *cfg.seed;
        specimens = generate_population(spec, cfg.nominal);
    }
    if (cfg.inject_damage) {
        if (cfg.inject_damage->specimen_index >= specimens.size())
            throw std::invalid_argument("inject_damage: specimen index out of range");
        specimens[cfg.inject_damage->specimen_index].degradation = cfg.inject_damage->damage;
    }
    return specimens;
}

inline CampaignOptions options_from_config(const CampaignConfig& cfg) {
    CampaignOptions options;
    options.time_scale = cfg.time_scale;
    options.abort_on_failure = cfg.abort_on_failure;
    options.output_excitation_g = cfg.output_excitation_g;
    options.sweep = cfg.sweep;
    options.policy.output_delta_max_v = cfg.thresholds.output_delta_v;
    options.policy.resonance_shift_max = cfg.thresholds.resonance_shift;
    options.policy.current_shift_max = cfg.thresholds.current_shift;
    return options;
}

} // namespace vibrobench
