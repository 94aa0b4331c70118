#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pvlab/core.hpp"
#include "pvlab/delegates.hpp"
#include "pvlab/metrics.hpp"
#include "pvlab/population.hpp"
#include "pvlab/rules.hpp"

namespace pvlab {

struct SweepSpec {
    std::string parameter;          // n_alternatives, n_voters, absenteeism,
                                    // cluster_density, minority_fraction, beta, rounds
    std::vector<double> values;
};

struct ExperimentConfig {
    PopulationConfig population;
    int rounds = 50;
    int n_sims = 100;
    std::vector<RuleId> rules = {RuleId::Av, RuleId::Phragmen, RuleId::Consensus, RuleId::Quota};
    std::vector<ParticipationMode> modes = {ParticipationMode::Full, ParticipationMode::Partial,
                                            ParticipationMode::Delegated};
    std::uint64_t master_seed = 42;
    LearnerConfig learner;
    std::optional<SweepSpec> sweep;
    int threads = 1;

    void validate() const;
};

/// One row of the emitted results table.
struct RunRecord {
    int sim_index = 0;
    std::string rule;
    std::string mode;
    std::string sweep_param;          // empty when not sweeping
    double sweep_value = 0.0;
    int longest_dry_spell_max = 0;
    double longest_dry_spell_mean = 0.0;
    double gini_influence = 0.0;
    double lqc = 0.0;
    double uqc = 0.0;
    double qc = 0.0;
    double lqnc = 0.0;
    double uqnc = 0.0;
    std::optional<double> overlap;    // delegated runs only
    double mean_approval_size = 0.0;  // of the visible profile
    std::uint64_t seed = 0;           // per-simulation stream seed
};

/// Shared scenario for one simulation: population, elections with true
/// ballots, and presence masks, identical across all rules and modes.
struct Scenario {
    std::vector<VoterModel> voters;
    std::vector<Election> elections;
    std::vector<PresenceMask> presence;
};

Scenario sample_scenario(const ExperimentConfig& config, Rng& rng);

/// Visible profiles per round for one participation mode. Delegated mode
/// refits each absent voter's delegate from all rounds they attended so far.
std::vector<VisibleProfile> build_visible_profiles(const Scenario& scenario,
                                                   ParticipationMode mode,
                                                   const PopulationConfig& population,
                                                   const LearnerConfig& learner);

/// Replays one rule over precomputed visible profiles; returns the record.
VotingRecord replay(const Scenario& scenario, const std::vector<VisibleProfile>& profiles,
                    RuleId rule, ParticipationMode mode);

/// Runs one paired simulation (all configured rules x modes over a shared
/// scenario). Winner sequences for full and partial are always computed so
/// delegated records carry their overlap.
std::vector<RunRecord> run_simulation(const ExperimentConfig& config, int sim_index);

/// n_sims simulations, optionally multithreaded; record order is
/// deterministic (merged by simulation index).
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

/// One full experiment per sweep value with independent scenarios.
std::vector<RunRecord> run_sweep(const ExperimentConfig& config);

enum class OutputFormat { Csv, Json };

std::string records_to_csv(const std::vector<RunRecord>& records);
std::string records_to_json(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_json(const std::string& text);
void write_records(const std::vector<RunRecord>& records, const std::string& path,
                   OutputFormat format);

/// Seed of the per-simulation stream: splitmix64 mixing of the master seed,
/// the sweep point index (0 when not sweeping) and the simulation index.
std::uint64_t simulation_seed(std::uint64_t master_seed, int sweep_index, int sim_index);

}  // namespace pvlab
