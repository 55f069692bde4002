#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gavs/cli_bench.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int effective_jobs(int requested) {
    int jobs = requested > 0 ? requested : 1;
    if (const char* cap = std::getenv("GA_VARSEL_THREADS")) {
        const int c = std::atoi(cap);
        if (c > 0) jobs = std::min(jobs, c);
    }
    return jobs;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::int64_t seed_override, int jobs_override) {
    gavs::ExperimentConfig cfg = gavs::parse_experiment_file(config_path);
    if (seed_override >= 0)
        cfg.ga.rng_seed = static_cast<std::uint64_t>(seed_override);
    if (jobs_override > 0) cfg.ga.jobs = jobs_override;
    cfg.ga.jobs = effective_jobs(cfg.ga.jobs);

    const gavs::ExperimentData data = gavs::materialize(cfg);
    std::vector<double> run_times;
    gavs::RunReport report;
    for (int r = 0; r < cfg.repeat; ++r) {
        report = gavs::run(cfg.ga, data.dataset);
        run_times.push_back(report.total_seconds);
    }
    const json j = gavs::report_to_json(report, cfg, run_times, data.truth,
                                        data.dataset);
    const fs::path dir = out_dir;
    write_file(dir / (cfg.name + ".report.json"), j.dump(2) + "\n");
    write_file(dir / (cfg.name + ".report.txt"),
               gavs::render_report_text(j));
    std::cout << gavs::render_report_text(j);
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    gavs::ExperimentConfig cfg = gavs::parse_experiment_file(config_path);
    if (!cfg.use_sim)
        throw std::invalid_argument("simulate needs a [data] source = simulate config");
    const gavs::ExperimentData data = gavs::materialize(cfg);
    const fs::path dir = out_dir;
    fs::create_directories(dir);
    gavs::save_dataset(data.dataset, (dir / (cfg.name + ".csv")).string());
    const gavs::PredictorSpace space =
        gavs::PredictorSpace::make(data.dataset.n_main());
    gavs::save_truth(data.truth, space, (dir / (cfg.name + ".truth.txt")).string());
    std::cout << "rows: " << data.dataset.n_rows()
              << "  n_main: " << data.dataset.n_main()
              << "  true terms: " << data.truth.size()
              << "  positive_rate: " << data.positive_rate << "\n";
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& grid_path,
              const std::string& out_dir, std::size_t memory_budget,
              int jobs_override) {
    gavs::ExperimentConfig base = config_path.empty()
                                      ? gavs::ExperimentConfig{}
                                      : gavs::parse_experiment_file(config_path);
    if (config_path.empty()) {
        base.use_sim = true;
        base.sim.n_main = 5;
        base.sim_n_true = 3;
    }
    if (jobs_override > 0) base.ga.jobs = jobs_override;
    base.ga.jobs = effective_jobs(base.ga.jobs);
    const auto grid = grid_path.empty() ? gavs::builtin_grid()
                                        : gavs::parse_grid_file(grid_path);
    const auto results = gavs::run_bench(grid, base, memory_budget);
    const std::string table = gavs::render_bench_table(results);
    const fs::path dir = out_dir;
    write_file(dir / "bench.txt", table);
    write_file(dir / "bench.json", gavs::bench_to_json(results).dump(2) + "\n");
    std::cout << table;
    return 0;
}

int cmd_report(const std::string& report_path, const std::string& compare_path,
               const std::string& out_dir) {
    const json j = read_json_file(report_path);
    if (!compare_path.empty()) {
        const json other = read_json_file(compare_path);
        std::cout << gavs::render_report_comparison(j, other);
        return 0;
    }
    std::cout << gavs::render_report_text(j) << "\n";
    const std::string series = gavs::render_report_series(j);
    write_file(fs::path(out_dir) / "series.tsv", series);
    std::cout << series;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GA variable selection over main effects and pairwise "
                 "interactions: standard vs indexed chromosome encodings"};
    app.require_subcommand(1);

    std::string config_path, grid_path, report_path, compare_path;
    std::string out_dir = ".";
    std::int64_t seed_override = -1;
    int jobs = 0;
    std::size_t memory_budget = 0;

    auto* run_cmd = app.add_subcommand("run", "run a GA experiment from a config file");
    run_cmd->add_option("--config", config_path, "experiment config file")->required();
    run_cmd->add_option("--seed", seed_override, "override the GA rng seed");
    run_cmd->add_option("--jobs", jobs, "worker threads for fitness evaluation");
    run_cmd->add_option("--out-dir", out_dir, "output directory");

    auto* sim_cmd = app.add_subcommand("simulate", "generate a simulated dataset + truth sidecar");
    sim_cmd->add_option("--config", config_path, "simulation config file")->required();
    sim_cmd->add_option("--out-dir", out_dir, "output directory");

    auto* bench_cmd = app.add_subcommand("bench", "run the encoding-comparison grid");
    bench_cmd->add_option("--config", config_path, "base experiment config");
    bench_cmd->add_option("--grid", grid_path, "grid file ('builtin' rows or n_main n_true l encoding)");
    bench_cmd->add_option("--jobs", jobs, "worker threads");
    bench_cmd->add_option("--out-dir", out_dir, "output directory");
    bench_cmd->add_option("--memory-budget", memory_budget,
                          "bytes; standard cells whose dense expansion exceeds it become N.A.");

    auto* report_cmd = app.add_subcommand("report", "render a report file");
    report_cmd->add_option("report", report_path, "report JSON file")->required();
    report_cmd->add_option("--compare", compare_path, "second report for side-by-side comparison");
    report_cmd->add_option("--out-dir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(run_cmd))
            return cmd_run(config_path, out_dir, seed_override, jobs);
        if (app.got_subcommand(sim_cmd))
            return cmd_simulate(config_path, out_dir);
        if (app.got_subcommand(bench_cmd))
            return cmd_bench(config_path, grid_path, out_dir, memory_budget, jobs);
        if (app.got_subcommand(report_cmd))
            return cmd_report(report_path, compare_path, out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
