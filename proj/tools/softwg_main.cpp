// softwg: batch front-end for the waveguide spectral experiments.
//
// Usage: softwg <config.json> --experiment {transverse|variational|spectrum|sweep}
//               [--out path] [--format {csv|json}] [--threads N] [--verbose]
//               [--dump-matrix path]
//
// stdout carries data, stderr carries diagnostics.
// Exit codes: 0 ok, 2 config error, 3 solver failure, 4 not converged.

#include "softwg/config.hpp"
#include "softwg/errors.hpp"
#include "softwg/numerics.hpp"
#include "softwg/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int resolve_thread_flag(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("SOFTWG_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return softwg::resolve_threads(0);
}

void write_output(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw softwg::Error("cannot open output path " + out_path);
    out << payload;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"soft/leaky waveguide spectral experiments"};

    std::string config_path;
    std::string experiment_name = "spectrum";
    std::string out_path;
    std::string format_name = "csv";
    std::string dump_matrix_path;
    int threads_flag = 0;
    bool verbose = false;

    app.add_option("config", config_path, "JSON run configuration")->required();
    app.add_option("--experiment", experiment_name,
                   "transverse | variational | spectrum | sweep");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format_name, "csv | json");
    app.add_option("--threads", threads_flag,
                   "worker threads (0: SOFTWG_THREADS env or hardware)");
    app.add_option("--dump-matrix", dump_matrix_path,
                   "spectrum only: write the assembled operator in coordinate format");
    app.add_flag("--verbose", verbose, "diagnostics on stderr");

    CLI11_PARSE(app, argc, argv);

    try {
        const softwg::RunConfig cfg = softwg::load_config(config_path);
        const softwg::Experiment experiment = softwg::experiment_from_string(experiment_name);
        const softwg::OutputFormat format = softwg::format_from_string(format_name);
        const int threads = resolve_thread_flag(threads_flag);

        if (verbose) {
            std::cerr << "resolved config:\n"
                      << softwg::resolved_config_json(cfg) << "\n"
                      << "experiment: " << to_string(experiment) << ", threads: " << threads
                      << "\n";
        }

        std::string payload;
        switch (experiment) {
            case softwg::Experiment::transverse: {
                const auto rep = softwg::run_transverse(cfg);
                payload = format == softwg::OutputFormat::csv ? to_csv(rep) : to_json(rep, cfg);
                break;
            }
            case softwg::Experiment::variational: {
                const auto rep = softwg::run_variational(cfg);
                if (verbose && rep.divergent)
                    std::cerr << "limit: -inf (divergent exterior term at theta = pi)\n";
                payload = format == softwg::OutputFormat::csv ? to_csv(rep) : to_json(rep, cfg);
                break;
            }
            case softwg::Experiment::spectrum: {
                const auto rep = softwg::run_spectrum(cfg, threads, dump_matrix_path);
                payload =
                    format == softwg::OutputFormat::csv ? to_csv(rep, cfg) : to_json(rep, cfg);
                break;
            }
            case softwg::Experiment::sweep: {
                const auto rows = softwg::run_sweep(cfg, threads);
                payload =
                    format == softwg::OutputFormat::csv ? to_csv(rows, cfg) : to_json(rows, cfg);
                break;
            }
        }
        write_output(payload, out_path);
        return 0;
    } catch (const softwg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const softwg::NotConverged& e) {
        std::cerr << "not converged: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
