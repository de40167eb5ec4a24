#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "psdyn/runner.hpp"

using namespace psdyn;

int main(int argc, char** argv) {
    CLI::App app{"psdyn: semi-classical phase-space dynamics scenario runner"};
    app.require_subcommand(1);

    std::string config_path, out_dir, hbars_str;
    int threads = -1;
    long seed = 0;  // reserved; the pipelines are deterministic

    CLI::App* cmd_run = app.add_subcommand("run", "run a scenario config");
    cmd_run->add_option("config", config_path, "config file")->required();
    cmd_run->add_option("--out-dir", out_dir, "override the output directory");
    cmd_run->add_option("--threads", threads, "worker threads (0 = auto)");
    cmd_run->add_option("--seed", seed, "reserved (no randomness)");

    CLI::App* cmd_sweep = app.add_subcommand("sweep-hbar", "halving sweep of the beam phase discrepancy");
    cmd_sweep->add_option("config", config_path, "config file")->required();
    cmd_sweep->add_option("--hbars", hbars_str, "comma-separated hbar values, each half the previous")
        ->required();
    cmd_sweep->add_option("--out-dir", out_dir, "override the output directory");
    cmd_sweep->add_option("--threads", threads, "worker threads (0 = auto)");
    cmd_sweep->add_option("--seed", seed, "reserved (no randomness)");

    CLI11_PARSE(app, argc, argv);

    try {
        ScenarioConfig cfg = parse_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (threads >= 0) cfg.threads = threads;

        if (cmd_run->parsed()) {
            const RunSummary s = run(cfg);
            for (const std::string& f : s.produced) std::printf("produced %s\n", f.c_str());
            for (const std::string& e : s.errors) std::fprintf(stderr, "method error: %s\n", e.c_str());
            return 0;
        }

        std::vector<double> hbars;
        {
            std::stringstream ss(hbars_str);
            std::string tok;
            while (std::getline(ss, tok, ',')) hbars.push_back(std::stod(tok));
        }
        const auto reps = sweep_hbar(cfg, hbars);
        std::filesystem::create_directories(cfg.out_dir);
        const std::string path = cfg.out_dir + "/sweep_hbar.txt";
        write_sweep_report(reps, path);
        bool all_pass = true;
        for (const auto& r : reps) {
            std::printf("time %.3g:", r.time);
            for (const auto& row : r.rows) std::printf("  D(%.3g)=%.4g", row.hbar, row.D);
            for (double ratio : r.ratios) std::printf("  ratio=%.3f", ratio);
            std::printf("  %s\n", r.pass ? "pass" : "FAIL");
            all_pass = all_pass && r.pass;
        }
        std::printf("wrote %s\n", path.c_str());
        return all_pass ? 0 : 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.kind() == ErrorKind::config ? 2 : 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
