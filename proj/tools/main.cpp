// ioncav: tau sweeps, figure data, headline numbers and the invariant suite.
//
// Exit codes: 0 success, 1 invalid input, 2 invariant breach.

#include "ioncav/oracle.hpp"
#include "ioncav/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitBreach = 2;

struct ConfigFlags {
    std::string prep = "ground";
    int phonons = 3;
    int photons = 3;
    double g = 8.95e6;
    double eta = 0.01;
    bool global_phase = false;
    double nu = 0.0;
    double omega_c = 0.0;
    double omega0 = 0.0;

    [[nodiscard]] ioncav::SimulationConfig build() const {
        ioncav::SimulationConfig cfg;
        cfg.preparation = ioncav::parse_preparation(prep);
        cfg.phonons0 = phonons;
        cfg.photons0 = photons;
        cfg.g = g;
        cfg.eta = eta;
        cfg.include_global_phase = global_phase;
        cfg.nu = nu;
        cfg.omega_c = omega_c;
        cfg.omega0 = omega0;
        return cfg;
    }
};

std::vector<CLI::Option*> add_config_flags(CLI::App* app, ConfigFlags& f) {
    return {
        app->add_option("--prep", f.prep, "Initial ion state: ground or excited")
            ->check(CLI::IsMember({"ground", "excited"})),
        app->add_option("--phonons", f.phonons, "Initial phonon number"),
        app->add_option("--photons", f.photons, "Initial photon number"),
        app->add_option("--g", f.g, "Ion-cavity coupling (s^-1)"),
        app->add_option("--eta", f.eta, "Lamb-Dicke parameter"),
        app->add_flag("--global-phase", f.global_phase, "Include the free-evolution phase factor"),
        app->add_option("--nu", f.nu, "Trap frequency (s^-1), global phase only"),
        app->add_option("--omega-c", f.omega_c, "Cavity frequency (s^-1), global phase only"),
        app->add_option("--omega0", f.omega0, "Atomic transition frequency (s^-1), global phase only"),
    };
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

void emit(const ioncav::SweepResult& result, const std::string& format, std::ostream& out) {
    if (format == "json") {
        ioncav::write_json(out, result);
    } else {
        ioncav::write_csv(out, result);
    }
}

// Several datasets: one file per preparation next to PATH, or consecutive
// blocks on stdout.
std::filesystem::path dataset_path(const std::filesystem::path& base, const ioncav::SweepRequest& req) {
    std::filesystem::path p = base;
    p.replace_filename(base.stem().string() + "_" + ioncav::to_string(req.config.preparation) +
                       base.extension().string());
    return p;
}

struct SweepFlags {
    ConfigFlags config;
    double tau_min = 0.0;
    double tau_max = 3.0 * std::numbers::pi;
    int steps = 600;
    std::optional<int> figure;
    std::string out;
    std::string format = "csv";
    bool with_oracle = false;
    std::vector<std::string> outputs{"probabilities"};
    unsigned threads = 0;
};

int run_sweep_command(const SweepFlags& f) {
    std::vector<ioncav::SweepRequest> requests;
    if (f.figure) {
        for (auto req : ioncav::figure_recipe(*f.figure).datasets) {
            req.config.g = f.config.g;
            req.config.eta = f.config.eta;
            requests.push_back(std::move(req));
        }
    } else {
        ioncav::SweepRequest req;
        req.config = f.config.build();
        req.outputs.clear();
        for (const auto& o : f.outputs) {
            req.outputs.insert(ioncav::parse_output(o));
        }
        requests.push_back(std::move(req));
    }
    for (auto& req : requests) {
        req.tau_min = f.tau_min;
        req.tau_max = f.tau_max;
        req.steps = f.steps;
        if (f.with_oracle) {
            req.outputs.insert(ioncav::Output::OracleCheck);
        }
        print_warnings(req.validate());
    }

    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto result = ioncav::run_sweep(requests[i], f.threads);
        if (f.out.empty()) {
            if (i > 0) {
                std::cout << '\n';
            }
            emit(result, f.format, std::cout);
            continue;
        }
        const std::filesystem::path path =
            requests.size() == 1 ? std::filesystem::path(f.out) : dataset_path(f.out, requests[i]);
        std::ofstream file(path);
        if (!file) {
            throw ioncav::ValidationError("cannot open " + path.string() + " for writing");
        }
        emit(result, f.format, file);
        std::cerr << "wrote " << path.string() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three trapped ions in a cavity: chain dynamics and multipartite negativities"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ioncav::kVersion);

    SweepFlags sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate probabilities and negativities over a tau grid");
    const auto config_opts = add_config_flags(sweep_cmd, sweep.config);
    sweep_cmd->add_option("--tau-min", sweep.tau_min, "Start of the tau grid");
    sweep_cmd->add_option("--tau-max", sweep.tau_max, "End of the tau grid (default 3 pi)");
    sweep_cmd->add_option("--steps", sweep.steps, "Number of grid points (>= 2)");
    auto* outputs_opt = sweep_cmd->add_option(
        "--outputs", sweep.outputs,
        "probabilities, negativities_A, negativities_D, negativity_AB, amplitudes, oracle_check");
    auto* figure_opt = sweep_cmd->add_option("--figure", sweep.figure, "Use the recipe of figure 1..7");
    for (auto* o : config_opts) {
        const std::string name = o->get_name();
        if (name == "--prep" || name == "--phonons" || name == "--photons") {
            figure_opt->excludes(o);
        }
    }
    figure_opt->excludes(outputs_opt);
    sweep_cmd->add_option("--out", sweep.out, "Output file (default stdout)");
    sweep_cmd->add_option("--format", sweep.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_flag("--with-oracle", sweep.with_oracle, "Check every row against brute-force propagation");
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0 = hardware concurrency)");

    auto* headline_cmd = app.add_subcommand("headline", "Print the landmark numbers of the model");

    ConfigFlags verify_config;
    ioncav::VerifyGrid grid;
    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite on a tau grid");
    add_config_flags(verify_cmd, verify_config);
    verify_cmd->add_option("--tau-min", grid.tau_min, "Start of the tau grid");
    verify_cmd->add_option("--tau-max", grid.tau_max, "End of the tau grid");
    verify_cmd->add_option("--steps", grid.steps, "Number of grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*sweep_cmd) {
            return run_sweep_command(sweep);
        }
        if (*headline_cmd) {
            ioncav::print_headline(std::cout, ioncav::headline_numbers());
            return 0;
        }
        if (*verify_cmd) {
            const auto cfg = verify_config.build();
            print_warnings(cfg.validate());
            const auto report = ioncav::verify(cfg, grid);
            ioncav::print_verify(std::cout, report);
            return report.passed() ? 0 : kExitBreach;
        }
    } catch (const ioncav::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ioncav::InvariantBreach& e) {
        std::cerr << "invariant breach: " << e.what() << '\n';
        return kExitBreach;
    } catch (const ioncav::TruncationError& e) {
        std::cerr << "invariant breach: " << e.what() << '\n';
        return kExitBreach;
    }
    return 0;
}
