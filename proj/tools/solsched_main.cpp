// Command-line front end: generate workloads, run the offline planners,
// the max-flow special case, the baselines and the online simulator, and
// drive full sweeps with CSV/JSONL/SVG reports.

#include "solsched/baselines.hpp"
#include "solsched/flow.hpp"
#include "solsched/harness.hpp"
#include "solsched/io.hpp"
#include "solsched/model.hpp"
#include "solsched/offline.hpp"
#include "solsched/online.hpp"
#include "solsched/report.hpp"
#include "solsched/workload.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace solsched;

std::string output_dir_default() {
    if (const char* env = std::getenv("SOLSCHED_OUT_DIR")) return env;
    return "out";
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

struct ServerOptions {
    double static_power = 20.0;
    double max_power = 2000.0;
    double max_util = 100.0;
    std::string battery = "0";

    void attach(CLI::App* cmd) {
        cmd->add_option("--p-s", static_power, "Static power draw, W");
        cmd->add_option("--p-max", max_power, "Power draw at full utilization, W");
        cmd->add_option("--u-max", max_util, "Total cores");
        cmd->add_option("--battery", battery, "Battery capacity in W-slots, or 'inf'");
    }
    EsConfig config() const {
        return {static_power, max_power, max_util, parse_battery(battery)};
    }
};

Instance load_instance(const std::string& tasks_path, const std::string& solar_path,
                       const ServerOptions& server, int total_slots, double solar_peak) {
    Instance instance;
    instance.config = server.config();
    instance.total_slots = total_slots;
    instance.solar = solar_path == "synthetic"
                         ? synthetic_solar(total_slots, std::min(solar_peak, server.max_power))
                         : load_solar(solar_path, total_slots,
                                      std::min(solar_peak, server.max_power));
    instance.tasks = read_tasks_jsonl(tasks_path);
    check_instance(instance);
    return instance;
}

Schedule dispatch_offline(const Instance& instance, const std::string& algo) {
    if (algo == "auto") return schedule_offline(instance);
    if (algo == "snb") return schedule_no_battery(instance);
    if (algo == "sib") return schedule_infinite_battery(instance);
    if (algo == "sfb") return schedule_finite_battery(instance);
    if (algo == "maxflow") return solve_unit_snb(instance);
    throw CLI::ValidationError("--algo", "unknown algorithm '" + algo + "'");
}

void report_schedule(const Instance& instance, const Schedule& schedule,
                     const std::string& out_dir, const std::string& label) {
    const ValidationReport report = validate(schedule, instance);
    if (!report.accepted())
        throw std::runtime_error("schedule failed validation: " + report.summary());
    ensure_dir(out_dir);
    write_assignment_csv(out_dir + "/assignment.csv", schedule);
    write_trajectories_csv(out_dir + "/slots.csv", schedule, instance);
    std::cout << label << ": revenue " << schedule.revenue << ", scheduled "
              << schedule.assignment.size() << "/" << instance.tasks.size() << " tasks\n"
              << "wrote " << out_dir << "/assignment.csv, " << out_dir << "/slots.csv\n";
}

int run_generate(const GenSpec& spec_in, const std::string& arrival, bool unit_tasks,
                 const ServerOptions& server, const std::string& solar, double solar_peak,
                 const std::string& out_dir) {
    GenSpec spec = spec_in;
    spec.max_util = server.max_util;
    if (arrival == "diurnal") {
        // rush-hour bumps over a low base load, same shape the sweep uses
        spec.arrival_weights.resize(static_cast<std::size_t>(spec.total_slots));
        const double day = static_cast<double>(spec.total_slots);
        for (int t = 1; t <= spec.total_slots; ++t) {
            auto bump = [day, t](double center, double width) {
                const double z = (t - center * day) / (width * day);
                return std::exp(-0.5 * z * z);
            };
            spec.arrival_weights[static_cast<std::size_t>(t) - 1] =
                0.25 + bump(0.354, 0.0625) + bump(0.729, 0.0625);
        }
    } else if (arrival != "uniform") {
        throw CLI::ValidationError("--arrival", "expected uniform | diurnal");
    }

    GeneratedTasks generated = generate_tasks(spec);
    if (unit_tasks) {
        for (Task& t : generated.tasks) {
            t.util = 1.0;
            t.revenue = 1.0;
        }
    }
    ensure_dir(out_dir);
    write_tasks_jsonl(out_dir + "/tasks.jsonl", generated.tasks);
    const SolarProfile profile =
        solar == "synthetic"
            ? synthetic_solar(spec.total_slots, std::min(solar_peak, server.max_power))
            : load_solar(solar, spec.total_slots, std::min(solar_peak, server.max_power));
    write_solar_csv(out_dir + "/solar.csv", profile);
    std::cout << "wrote " << generated.tasks.size() << " tasks to " << out_dir
              << "/tasks.jsonl and " << spec.total_slots << " solar slots to " << out_dir
              << "/solar.csv\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solsched: revenue-maximizing task scheduling on solar-powered edge servers"};
    app.require_subcommand(1);
    app.fallthrough(); // parent options may follow the subcommand name

    std::string out_dir = output_dir_default();
    app.add_option("--out-dir", out_dir,
                   "Output directory (env SOLSCHED_OUT_DIR overrides the default)");

    // generate
    auto* generate = app.add_subcommand("generate", "Generate a synthetic task set and solar profile");
    GenSpec gen_spec;
    gen_spec.task_count = 10000;
    std::string gen_arrival = "uniform";
    bool gen_unit = false;
    std::string gen_solar = "synthetic";
    double gen_solar_peak = 2000.0;
    ServerOptions gen_server;
    generate->add_option("--n", gen_spec.task_count, "Number of tasks");
    generate->add_option("--t-total", gen_spec.total_slots, "Slots in the horizon");
    generate->add_option("--rho", gen_spec.rho, "Target mean(util)/mean(deadline laxity)");
    generate->add_option("--u-mean", gen_spec.u_mean, "Utilization mean before rescaling");
    generate->add_option("--u-sigma", gen_spec.u_sigma, "Utilization standard deviation");
    generate->add_option("--seed", gen_spec.seed, "RNG seed");
    generate->add_option("--arrival", gen_arrival, "Arrival pattern: uniform | diurnal");
    generate->add_flag("--unit", gen_unit, "Emit the unit special case (util = revenue = 1)");
    generate->add_option("--solar", gen_solar, "'synthetic' or a CSV to normalize");
    generate->add_option("--solar-peak", gen_solar_peak, "Peak watts after normalization");
    gen_server.attach(generate);

    // schedule
    auto* schedule_cmd = app.add_subcommand("schedule", "Run an offline planner on an instance");
    std::string sched_tasks;
    std::string sched_solar = "synthetic";
    std::string sched_algo = "auto";
    int sched_slots = 1440;
    double sched_solar_peak = 2000.0;
    ServerOptions sched_server;
    schedule_cmd->add_option("--tasks", sched_tasks, "Task JSONL file")->required();
    schedule_cmd->add_option("--solar", sched_solar, "Solar CSV or 'synthetic'");
    schedule_cmd->add_option("--t-total", sched_slots, "Slots in the horizon");
    schedule_cmd->add_option("--algo", sched_algo, "auto | snb | sib | sfb | maxflow");
    schedule_cmd->add_option("--solar-peak", sched_solar_peak, "Peak watts after normalization");
    sched_server.attach(schedule_cmd);

    // baseline
    auto* baseline_cmd = app.add_subcommand("baseline", "Run a comparison scheduler");
    std::string base_tasks;
    std::string base_solar = "synthetic";
    std::string base_policy = "npedf";
    int base_slots = 1440;
    double base_solar_peak = 2000.0;
    ServerOptions base_server;
    baseline_cmd->add_option("--tasks", base_tasks, "Task JSONL file")->required();
    baseline_cmd->add_option("--solar", base_solar, "Solar CSV or 'synthetic'");
    baseline_cmd->add_option("--t-total", base_slots, "Slots in the horizon");
    baseline_cmd->add_option("--policy", base_policy, "npedf | asap-huf | asap-luf | ea");
    baseline_cmd->add_option("--solar-peak", base_solar_peak, "Peak watts after normalization");
    base_server.attach(baseline_cmd);

    // simulate (online)
    auto* simulate = app.add_subcommand("simulate",
                                        "Re-plan an offline schedule against a deviated stream");
    std::string sim_tasks;
    std::string sim_solar = "synthetic";
    std::string sim_algo = "auto";
    int sim_slots = 1440;
    double sim_solar_peak = 2000.0;
    double sim_pd = 0.0;
    double sim_td = 0.0;
    double sim_solar_spike = 0.0;
    double sim_task_spike = 0.0;
    double sim_spike_drop = 0.2;
    double sim_spike_burst = 5.0;
    std::uint64_t sim_seed = 1;
    double sim_u_mean = 1.0;
    double sim_u_sigma = 0.3;
    ServerOptions sim_server;
    simulate->add_option("--tasks", sim_tasks, "Predicted task JSONL file")->required();
    simulate->add_option("--solar", sim_solar, "Predicted solar CSV or 'synthetic'");
    simulate->add_option("--t-total", sim_slots, "Slots in the horizon");
    simulate->add_option("--algo", sim_algo, "Offline base: auto | snb | sib | sfb");
    simulate->add_option("--solar-peak", sim_solar_peak, "Peak watts after normalization");
    simulate->add_option("--pd", sim_pd, "Solar deviation percent");
    simulate->add_option("--td", sim_td, "Task deviation percent");
    simulate->add_option("--solar-spike-rate", sim_solar_spike, "Percent of slots with solar drops");
    simulate->add_option("--task-spike-rate", sim_task_spike, "Percent of slots with task bursts");
    simulate->add_option("--spike-drop", sim_spike_drop, "Solar spike drop factor");
    simulate->add_option("--spike-burst", sim_spike_burst, "Task spike burst factor");
    simulate->add_option("--seed", sim_seed, "Deviation RNG seed");
    simulate->add_option("--u-mean", sim_u_mean, "Resampling mean for replacement tasks");
    simulate->add_option("--u-sigma", sim_u_sigma, "Resampling sigma for replacement tasks");
    sim_server.attach(simulate);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep from a config file");
    std::string sweep_config;
    std::vector<std::string> sweep_sets;
    sweep->add_option("--config", sweep_config, "key = value configuration file");
    sweep->add_option("--set", sweep_sets, "Override 'key=value' (repeatable)");

    // report
    auto* report_cmd = app.add_subcommand("report", "Aggregate a runs table and draw charts");
    std::string report_runs;
    std::vector<std::string> report_formats{"csv", "svg"};
    report_cmd->add_option("--runs", report_runs, "runs.csv produced by sweep")->required();
    report_cmd->add_option("--format", report_formats,
                           "Any of csv, jsonlines, svg (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate)
            return run_generate(gen_spec, gen_arrival, gen_unit, gen_server, gen_solar,
                                gen_solar_peak, out_dir);

        if (*schedule_cmd) {
            const Instance instance = load_instance(sched_tasks, sched_solar, sched_server,
                                                    sched_slots, sched_solar_peak);
            const Schedule schedule = dispatch_offline(instance, sched_algo);
            report_schedule(instance, schedule, out_dir, sched_algo);
            return 0;
        }

        if (*baseline_cmd) {
            const Instance instance = load_instance(base_tasks, base_solar, base_server,
                                                    base_slots, base_solar_peak);
            const Schedule schedule =
                run_baseline(instance, baseline_policy_from_string(base_policy));
            report_schedule(instance, schedule, out_dir, base_policy);
            return 0;
        }

        if (*simulate) {
            const Instance predicted = load_instance(sim_tasks, sim_solar, sim_server,
                                                     sim_slots, sim_solar_peak);
            const Schedule plan = dispatch_offline(predicted, sim_algo);

            Instance actual = predicted;
            DeviationSpec deviation{sim_pd, sim_td, sim_seed};
            actual.solar = derive_actual_solar(predicted.solar, deviation, predicted.config);
            actual.solar = inject_solar_spikes(actual.solar, sim_solar_spike, sim_spike_drop,
                                               sim_seed ^ 0x0dd51de50dd51de5ULL);
            GenSpec resample;
            resample.total_slots = sim_slots;
            resample.u_mean = sim_u_mean;
            resample.u_sigma = sim_u_sigma;
            resample.max_util = sim_server.max_util;
            actual.tasks = derive_actual_tasks(predicted.tasks, resample, 1.0, deviation);
            actual.tasks = inject_task_spikes(actual.tasks, resample, 1.0, sim_task_spike,
                                              sim_spike_burst, sim_seed ^ 0x3b3b3b3b3b3b3b3bULL);
            check_instance(actual);

            OnlineContext context{&predicted, &actual, &plan};
            const OnlineResult result = run_online(context);
            const ValidationReport report = validate(result.schedule, actual);
            if (!report.accepted())
                throw std::runtime_error("online schedule failed validation: " +
                                         report.summary());
            ensure_dir(out_dir);
            write_assignment_csv(out_dir + "/assignment.csv", result.schedule);
            write_trajectories_csv(out_dir + "/slots.csv", result.schedule, actual);
            write_online_trace_csv(out_dir + "/trace.csv", result.trace);
            std::cout << "online revenue " << result.metrics.revenue << " ("
                      << result.metrics.revenue_pct << "% of the offline plan), "
                      << result.metrics.evictions << " evictions, "
                      << result.metrics.admissions << " admissions\n"
                      << "wrote " << out_dir << "/assignment.csv, slots.csv, trace.csv\n";
            return 0;
        }

        if (*sweep) {
            ExperimentConfig cfg;
            if (!sweep_config.empty()) cfg = parse_experiment_config(sweep_config);
            for (const std::string& kv : sweep_sets) {
                const std::size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("--set expects key=value, got '" + kv + "'");
                apply_config_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
            }
            if (const char* env = std::getenv("SOLSCHED_OUT_DIR")) cfg.out_dir = env;
            if (!app.get_option("--out-dir")->empty()) cfg.out_dir = out_dir;
            ensure_dir(cfg.out_dir);
            const SweepResult result = run_experiment(cfg);
            write_runs_csv(cfg.out_dir + "/runs.csv", result.runs);
            write_runs_jsonl(cfg.out_dir + "/runs.jsonl", result.runs);
            std::cout << "wrote " << result.runs.size() << " runs to " << cfg.out_dir
                      << "/runs.csv and runs.jsonl\n";
            return 0;
        }

        if (*report_cmd) {
            const std::vector<RunRecord> runs = read_runs_csv(report_runs);
            ensure_dir(out_dir);
            for (const std::string& format : report_formats) {
                if (format == "csv") {
                    write_aggregates_csv(out_dir + "/summary.csv", aggregate_runs(runs));
                    std::cout << "wrote " << out_dir << "/summary.csv\n";
                } else if (format == "jsonlines") {
                    write_runs_jsonl(out_dir + "/runs.jsonl", runs);
                    std::cout << "wrote " << out_dir << "/runs.jsonl\n";
                } else if (format == "svg") {
                    for (const std::string& name : write_charts(out_dir, runs))
                        std::cout << "wrote " << out_dir << "/" << name << '\n';
                } else {
                    throw CLI::ValidationError("--format", "expected csv | jsonlines | svg");
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
