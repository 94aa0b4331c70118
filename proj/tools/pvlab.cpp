#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pvlab/harness.hpp"
#include "pvlab/oracle_suite.hpp"

namespace {

using pvlab::ExperimentConfig;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// values are either comma-separated or a start:stop:step range (inclusive)
std::vector<double> parse_values(const std::string& s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        double start, stop, step;
        if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0)
            throw CLI::ValidationError("--values", "range must be start:stop:step with step > 0");
        for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
        return out;
    }
    for (const auto& item : split_list(s)) out.push_back(std::stod(item));
    return out;
}

void apply_json_config(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json obj = nlohmann::json::parse(in);
    auto& pop = config.population;
    if (obj.contains("rules")) {
        config.rules.clear();
        for (const auto& r : obj["rules"]) config.rules.push_back(pvlab::rule_from_string(r));
    }
    if (obj.contains("modes")) {
        config.modes.clear();
        for (const auto& m : obj["modes"]) config.modes.push_back(pvlab::mode_from_string(m));
    }
    if (obj.contains("rounds")) config.rounds = obj["rounds"];
    if (obj.contains("sims")) config.n_sims = obj["sims"];
    if (obj.contains("voters")) pop.n_voters = obj["voters"];
    if (obj.contains("alternatives")) pop.n_alternatives = obj["alternatives"];
    if (obj.contains("dims")) pop.d = obj["dims"];
    if (obj.contains("minority_fraction")) pop.minority_fraction = obj["minority_fraction"];
    if (obj.contains("cluster_density")) pop.cluster_density = obj["cluster_density"];
    if (obj.contains("absenteeism")) pop.absenteeism = obj["absenteeism"];
    if (obj.contains("tau")) pop.tau = obj["tau"];
    if (obj.contains("beta")) pop.beta = obj["beta"];
    if (obj.contains("dirichlet_alpha")) pop.dirichlet_alpha = obj["dirichlet_alpha"];
    if (obj.contains("threshold_mode"))
        pop.threshold_mode = pvlab::threshold_mode_from_string(obj["threshold_mode"]);
    if (obj.contains("seed")) config.master_seed = obj["seed"];
    if (obj.contains("threads")) config.threads = obj["threads"];
    if (obj.contains("max_iters")) config.learner.max_iters = obj["max_iters"];
    if (obj.contains("grad_tol")) config.learner.grad_tol = obj["grad_tol"];
    if (obj.contains("refit_every_absence"))
        config.learner.refit_every_absence = obj["refit_every_absence"];
    if (obj.contains("param") && obj.contains("values")) {
        pvlab::SweepSpec sweep;
        sweep.parameter = obj["param"];
        for (const auto& v : obj["values"]) sweep.values.push_back(v.get<double>());
        config.sweep = sweep;
    }
}

struct CommonFlags {
    std::string config_path;
    std::string rules_csv, modes_csv, threshold_mode, out_path = "results.csv", format = "csv";

    void attach(CLI::App* cmd, ExperimentConfig& config) {
        auto& pop = config.population;
        cmd->add_option("--config", config_path, "JSON config file; flags override its keys");
        cmd->add_option("--rules", rules_csv, "comma list of av,phragmen,consensus,quota");
        cmd->add_option("--modes", modes_csv, "comma list of full,partial,delegated");
        cmd->add_option("--rounds", config.rounds, "voting rounds per simulation");
        cmd->add_option("--sims", config.n_sims, "independent simulations");
        cmd->add_option("--voters", pop.n_voters, "electorate size");
        cmd->add_option("--alternatives", pop.n_alternatives, "alternatives per round");
        cmd->add_option("--dims", pop.d, "feature dimension");
        cmd->add_option("--minority-fraction", pop.minority_fraction, "minority share");
        cmd->add_option("--cluster-density", pop.cluster_density, "centroid blend weight p");
        cmd->add_option("--absenteeism", pop.absenteeism, "per-round absence probability");
        cmd->add_option("--tau", pop.tau, "approval threshold");
        cmd->add_option("--beta", pop.beta, "utility noise scale");
        cmd->add_option("--dirichlet-alpha", pop.dirichlet_alpha, "centroid concentration");
        cmd->add_option("--threshold-mode", threshold_mode, "relative|absolute");
        cmd->add_option("--seed", config.master_seed, "master seed");
        cmd->add_option("--threads", config.threads, "worker threads (results identical)");
        cmd->add_option("--max-iters", config.learner.max_iters, "delegate fit iteration cap");
        cmd->add_option("--grad-tol", config.learner.grad_tol, "delegate fit tolerance");
        cmd->add_option("--out", out_path, "output path");
        cmd->add_option("--format", format, "csv|json");
    }

    void finalize(ExperimentConfig& config) const {
        if (!rules_csv.empty()) {
            config.rules.clear();
            for (const auto& r : split_list(rules_csv))
                config.rules.push_back(pvlab::rule_from_string(r));
        }
        if (!modes_csv.empty()) {
            config.modes.clear();
            for (const auto& m : split_list(modes_csv))
                config.modes.push_back(pvlab::mode_from_string(m));
        }
        if (!threshold_mode.empty())
            config.population.threshold_mode = pvlab::threshold_mode_from_string(threshold_mode);
    }

    pvlab::OutputFormat output_format() const {
        if (format == "csv") return pvlab::OutputFormat::Csv;
        if (format == "json") return pvlab::OutputFormat::Json;
        throw CLI::ValidationError("--format", "must be csv or json");
    }
};

// pre-scan for --config so the file loads before flag overrides
std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perpetual approval voting simulation laboratory"};
    app.require_subcommand(1);

    ExperimentConfig config;
    CommonFlags flags;
    std::string sweep_param;
    std::string sweep_values;

    const std::string config_path = find_config_arg(argc, argv);
    try {
        if (!config_path.empty()) apply_json_config(config, config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    CLI::App* simulate = app.add_subcommand("simulate", "run paired simulations and emit records");
    flags.attach(simulate, config);

    CLI::App* sweep = app.add_subcommand("sweep", "run simulations across a parameter sweep");
    CommonFlags sweep_flags;
    sweep_flags.attach(sweep, config);
    sweep->add_option("--param", sweep_param, "sweep parameter name");
    sweep->add_option("--values", sweep_values,
                      "comma list or start:stop:step range of sweep values");

    CLI::App* oracle = app.add_subcommand("oracle", "run brute-force equivalence suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) {
            flags.finalize(config);
            config.sweep.reset();
            config.validate();
            pvlab::write_records(pvlab::run_experiment(config), flags.out_path,
                                 flags.output_format());
            return 0;
        }
        if (sweep->parsed()) {
            sweep_flags.finalize(config);
            if (!sweep_param.empty() || !sweep_values.empty()) {
                pvlab::SweepSpec spec;
                spec.parameter = sweep_param;
                spec.values = parse_values(sweep_values);
                config.sweep = spec;
            }
            if (!config.sweep) throw std::invalid_argument("sweep requires --param and --values");
            config.validate();
            pvlab::write_records(pvlab::run_sweep(config), sweep_flags.out_path,
                                 sweep_flags.output_format());
            return 0;
        }
        if (oracle->parsed()) return pvlab::run_oracle_suite(std::cout) ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
