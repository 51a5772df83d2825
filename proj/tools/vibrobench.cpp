// vibrobench: compile and validate fatigue test plans, run simulated
// vibration fatigue campaigns, and evaluate before/after results.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "vibrobench/campaign.hpp"
#include "vibrobench/config.hpp"
#include "vibrobench/record_log.hpp"
#include "vibrobench/report_io.hpp"
#include "vibrobench/rig.hpp"

namespace {

// Exit codes, one per failure class.
constexpr int exit_ok = 0;
constexpr int exit_violations = 2;
constexpr int exit_parse_error = 3;
constexpr int exit_io_error = 4;
constexpr int exit_aborted_failure = 5;
constexpr int exit_aborted_cancelled = 6;

std::atomic<bool> g_interrupted{false};

void on_sigint(int) { g_interrupted.store(true); }

struct CommonFlags {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> time_scale;
    bool abort_on_failure = false;
};

vibrobench::CampaignConfig load_with_overrides(const CommonFlags& flags) {
    auto cfg = vibrobench::load_config(flags.config_path);
    if (flags.out_dir)
        cfg.out_dir = *flags.out_dir;
    if (flags.seed)
        cfg.seed = *flags.seed;
    if (flags.time_scale)
        cfg.time_scale = *flags.time_scale;
    if (flags.abort_on_failure)
        cfg.abort_on_failure = true;
    return cfg;
}

int cmd_validate(const CommonFlags& flags) {
    const auto cfg = load_with_overrides(flags);
    const auto violations = vibrobench::validate_condition(cfg.condition);
    if (violations.empty()) {
        std::cout << "condition valid\n";
        return exit_ok;
    }
    for (const auto& v : violations)
        std::cout << "violation: " << v.to_string() << "\n";
    return exit_violations;
}

int cmd_run(const CommonFlags& flags) {
    const auto cfg = load_with_overrides(flags);
    const auto violations = vibrobench::validate_condition(cfg.condition);
    if (!violations.empty()) {
        for (const auto& v : violations)
            std::cerr << "violation: " << v.to_string() << "\n";
        return exit_violations;
    }
    auto schedule = vibrobench::compile_schedule(cfg.condition);
    schedule.checkpoints = cfg.checkpoints;
    auto specimens = vibrobench::build_specimens(cfg);

    vibrobench::SimulatedRig rig;
    vibrobench::CampaignEngine engine(schedule, vibrobench::options_from_config(cfg));

    std::signal(SIGINT, on_sigint);
    std::atomic<bool> done{false};
    std::thread watcher([&] {
        while (!done.load()) {
            if (g_interrupted.load()) {
                engine.cancel();
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    });
    const auto state = engine.run(rig, std::move(specimens));
    done.store(true);
    watcher.join();

    std::filesystem::create_directories(cfg.out_dir);
    const auto record_path = std::filesystem::path(cfg.out_dir) / "records.jsonl";
    const auto event_path = std::filesystem::path(cfg.out_dir) / "events.log";
    {
        vibrobench::RecordLogWriter log(record_path.string());
        log.append_all(state.records);
    }
    {
        std::ofstream events(event_path);
        if (!events)
            throw std::runtime_error("cannot write event log: " + event_path.string());
        for (const auto& line : state.events)
            events << line << "\n";
    }

    const auto progress = engine.progress();
    std::cout << "status: " << vibrobench::to_string(state.status);
    if (!state.abort_reason.empty())
        std::cout << " (" << state.abort_reason << ")";
    std::cout << "\nelapsed: " << static_cast<std::uint64_t>(progress.elapsed_cycles)
              << " cycles, " << progress.elapsed_hours << " h\n"
              << "records: " << state.records.size() << " -> " << record_path.string() << "\n";

    if (state.status == vibrobench::CampaignStatus::completed)
        return exit_ok;
    return state.abort_reason == "cancelled" ? exit_aborted_cancelled : exit_aborted_failure;
}

int cmd_report(const std::string& log_path, const std::string& out_dir) {
    std::vector<vibrobench::MeasurementRecord> records;
    try {
        records = vibrobench::read_record_log(log_path);
    } catch (const vibrobench::RecordLogParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse_error;
    }
    std::vector<vibrobench::MeasurementRecord> before, after;
    for (const auto& r : records) {
        if (r.phase == vibrobench::PhaseTag::before)
            before.push_back(r);
        else if (r.phase == vibrobench::PhaseTag::after)
            after.push_back(r);
    }
    if (before.empty() || after.empty()) {
        std::cerr << "error: log contains no before/after population to compare\n";
        return exit_io_error;
    }
    auto report = vibrobench::compare(before, after);
    report.campaign_label = log_path;

    std::filesystem::create_directories(out_dir);
    const auto text = vibrobench::report_to_text(report);
    {
        std::ofstream out(std::filesystem::path(out_dir) / "report.txt");
        out << text;
    }
    {
        std::ofstream out(std::filesystem::path(out_dir) / "report.json");
        out << vibrobench::report_to_json(report).dump(2) << "\n";
    }
    const auto tables =
        vibrobench::emit_table_data(report, std::filesystem::path(out_dir) / "tables");
    std::cout << text;
    std::cout << "report.json, report.txt and " << tables.size() << " table files in "
              << out_dir << "\n";
    return exit_ok;
}

int cmd_generate_population(const CommonFlags& flags) {
    const auto cfg = load_with_overrides(flags);
    if (!cfg.population) {
        std::cerr << "error: config has no population stanza\n";
        return exit_violations;
    }
    const auto specimens = vibrobench::build_specimens(cfg);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& dut : specimens)
        j.push_back(vibrobench::dut_to_json(dut));
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / "population.json";
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path.string() << "\n";
        return exit_io_error;
    }
    out << j.dump(2) << "\n";
    std::cout << specimens.size() << " specimens -> " << path.string() << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MEMS vibration fatigue test bench"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string report_log_path;
    std::string report_out_dir = "out";

    auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
        auto* opt = cmd->add_option("--config", flags.config_path, "campaign config file");
        if (needs_config)
            opt->required()->check(CLI::ExistingFile);
        cmd->add_option("--out-dir", [&](const auto& vals) {
            flags.out_dir = vals.front();
            return true;
        }, "output directory (overrides config)");
        cmd->add_option("--seed", [&](const auto& vals) {
            flags.seed = std::stoull(vals.front());
            return true;
        }, "population seed (overrides config)");
        cmd->add_option("--time-scale", [&](const auto& vals) {
            flags.time_scale = std::stod(vals.front());
            return true;
        }, "simulated seconds per wall second (0 = unthrottled)");
        cmd->add_flag("--abort-on-failure", flags.abort_on_failure,
                      "abort the campaign on a failed checkpoint verdict");
    };

    auto* validate = app.add_subcommand("validate", "check a test condition against the envelope");
    add_common(validate);

    auto* run = app.add_subcommand("run", "execute a campaign on the simulated rig");
    add_common(run);

    auto* report = app.add_subcommand("report", "evaluate a record log");
    report->add_option("--log", report_log_path, "record log (records.jsonl)")
        ->required()
        ->check(CLI::ExistingFile);
    report->add_option("--out-dir", report_out_dir, "report output directory");

    auto* genpop = app.add_subcommand("generate-population",
                                      "write a specimen population file from the config");
    add_common(genpop);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate)
            return cmd_validate(flags);
        if (*run)
            return cmd_run(flags);
        if (*report)
            return cmd_report(report_log_path, report_out_dir);
        if (*genpop)
            return cmd_generate_population(flags);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return exit_parse_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_violations;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io_error;
    }
    return exit_ok;
}
