#include "pvlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace pvlab {

void ExperimentConfig::validate() const {
    population.validate();
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (n_sims < 1) throw std::invalid_argument("sims must be >= 1");
    if (rules.empty()) throw std::invalid_argument("at least one rule required");
    if (modes.empty()) throw std::invalid_argument("at least one mode required");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (sweep) {
        static const char* known[] = {"n_alternatives", "n_voters",         "absenteeism",
                                      "cluster_density", "minority_fraction", "beta",
                                      "rounds"};
        bool ok = false;
        for (const char* k : known) ok = ok || sweep->parameter == k;
        if (!ok) throw std::invalid_argument("unknown sweep parameter: " + sweep->parameter);
        if (sweep->values.empty()) throw std::invalid_argument("sweep values empty");
    }
}

std::uint64_t simulation_seed(std::uint64_t master_seed, int sweep_index, int sim_index) {
    return substream(substream(master_seed, static_cast<std::uint64_t>(sweep_index)),
                     static_cast<std::uint64_t>(sim_index));
}

Scenario sample_scenario(const ExperimentConfig& config, Rng& rng) {
    Scenario scenario;
    scenario.voters = sample_population(config.population, rng);
    scenario.elections.reserve(config.rounds);
    scenario.presence.reserve(config.rounds);
    for (int t = 0; t < config.rounds; ++t) {
        Election election;
        election.round_index = t + 1;
        election.features = sample_election(config.population, rng);
        election.true_approvals.reserve(scenario.voters.size());
        for (const VoterModel& voter : scenario.voters)
            election.true_approvals.push_back(
                ballot(voter, election.features, rng, config.population.threshold_mode));
        scenario.elections.push_back(std::move(election));
        scenario.presence.push_back(
            sample_presence(config.population, rng, static_cast<int>(scenario.voters.size())));
    }
    return scenario;
}

std::vector<VisibleProfile> build_visible_profiles(const Scenario& scenario,
                                                   ParticipationMode mode,
                                                   const PopulationConfig& population,
                                                   const LearnerConfig& learner) {
    const int rounds = static_cast<int>(scenario.elections.size());
    const int n_voters = static_cast<int>(scenario.voters.size());
    std::vector<VisibleProfile> profiles(rounds);

    // accumulated per-voter training data, delegated mode only
    std::vector<TrainingSet> history(mode == ParticipationMode::Delegated ? n_voters : 0);
    for (TrainingSet& h : history) h.dim = population.d;

    for (int t = 0; t < rounds; ++t) {
        const Election& election = scenario.elections[t];
        VisibleProfile& profile = profiles[t];
        profile.n_alternatives = election.n_alternatives();
        profile.approvals.resize(n_voters);
        profile.provenance.resize(n_voters, Provenance::Observed);
        for (int n = 0; n < n_voters; ++n) {
            const bool present =
                mode == ParticipationMode::Full || scenario.presence[t].present[n];
            if (present) {
                profile.approvals[n] = election.true_approvals[n];
                profile.provenance[n] = Provenance::Observed;
            } else if (mode == ParticipationMode::Partial) {
                profile.provenance[n] = Provenance::EmptyAbsent;
            } else {
                const LearnedPreference pref = fit(history[n], learner);
                profile.approvals[n] =
                    predict(pref, election.features, population.threshold_mode);
                profile.provenance[n] = Provenance::DelegatePredicted;
            }
        }
        if (mode == ParticipationMode::Delegated) {
            for (int n = 0; n < n_voters; ++n)
                if (scenario.presence[t].present[n])
                    append_round(history[n], election.features, election.true_approvals[n],
                                 population.threshold_mode);
        }
    }
    return profiles;
}

VotingRecord replay(const Scenario& scenario, const std::vector<VisibleProfile>& profiles,
                    RuleId rule, ParticipationMode mode) {
    const int n_voters = static_cast<int>(scenario.voters.size());
    PhragmenEngine phragmen(n_voters);
    ConsensusEngine consensus(n_voters);
    QuotaEngine quota(n_voters);

    VotingRecord record;
    for (std::size_t t = 0; t < scenario.elections.size(); ++t) {
        int winner = 0;
        switch (rule) {
            case RuleId::Av: winner = select_av(profiles[t]); break;
            case RuleId::Phragmen: winner = phragmen.select(profiles[t]); break;
            case RuleId::Consensus: winner = consensus.select(profiles[t]); break;
            case RuleId::Quota:
                winner = quota.select(profiles[t], scenario.presence[t], mode);
                break;
        }
        record.append({scenario.elections[t], scenario.presence[t], profiles[t], winner});
    }
    return record;
}

namespace {

double mean_visible_approval_size(const std::vector<VisibleProfile>& profiles) {
    long total = 0;
    long count = 0;
    for (const auto& profile : profiles)
        for (const auto& set : profile.approvals) {
            total += static_cast<long>(set.size());
            ++count;
        }
    return count ? static_cast<double>(total) / count : 0.0;
}

std::vector<RunRecord> run_simulation_impl(const ExperimentConfig& config, int sim_index,
                                           int sweep_index, const std::string& sweep_param,
                                           double sweep_value) {
    const std::uint64_t seed = simulation_seed(config.master_seed, sweep_index, sim_index);
    Rng rng(seed);
    const Scenario scenario = sample_scenario(config, rng);

    const bool delegated_requested =
        std::find(config.modes.begin(), config.modes.end(), ParticipationMode::Delegated) !=
        config.modes.end();

    auto requested = [&](ParticipationMode m) {
        return std::find(config.modes.begin(), config.modes.end(), m) != config.modes.end();
    };
    // overlap needs full and partial winner sequences even when only
    // delegated records are requested
    auto needed = [&](ParticipationMode m) {
        return requested(m) || (delegated_requested && m != ParticipationMode::Delegated);
    };

    std::vector<std::vector<VisibleProfile>> profiles(3);
    for (ParticipationMode m : {ParticipationMode::Full, ParticipationMode::Partial,
                                ParticipationMode::Delegated})
        if (needed(m))
            profiles[static_cast<int>(m)] =
                build_visible_profiles(scenario, m, config.population, config.learner);

    std::vector<RunRecord> records;
    for (RuleId rule : config.rules) {
        std::vector<std::vector<int>> winners(3);
        std::vector<FairnessReport> reports(3);
        for (ParticipationMode m : {ParticipationMode::Full, ParticipationMode::Partial,
                                    ParticipationMode::Delegated}) {
            if (!needed(m)) continue;
            const int mi = static_cast<int>(m);
            VotingRecord record = replay(scenario, profiles[mi], rule, m);
            for (const Round& round : record.rounds) winners[mi].push_back(round.winner);
            if (requested(m)) reports[mi] = evaluate_fairness(record);
        }
        for (ParticipationMode m : config.modes) {
            const int mi = static_cast<int>(m);
            RunRecord rec;
            rec.sim_index = sim_index;
            rec.rule = to_string(rule);
            rec.mode = to_string(m);
            rec.sweep_param = sweep_param;
            rec.sweep_value = sweep_value;
            rec.longest_dry_spell_max = reports[mi].longest_dry_spell_max;
            rec.longest_dry_spell_mean = reports[mi].longest_dry_spell_mean;
            rec.gini_influence = reports[mi].gini_influence;
            rec.lqc = reports[mi].quota.lqc;
            rec.uqc = reports[mi].quota.uqc;
            rec.qc = reports[mi].quota.qc;
            rec.lqnc = reports[mi].quota.lqnc;
            rec.uqnc = reports[mi].quota.uqnc;
            if (m == ParticipationMode::Delegated)
                rec.overlap = overlap(winners[static_cast<int>(ParticipationMode::Delegated)],
                                      winners[static_cast<int>(ParticipationMode::Full)],
                                      winners[static_cast<int>(ParticipationMode::Partial)]);
            rec.mean_approval_size = mean_visible_approval_size(profiles[mi]);
            rec.seed = seed;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::vector<RunRecord> run_experiment_impl(const ExperimentConfig& config, int sweep_index,
                                           const std::string& sweep_param, double sweep_value) {
    std::vector<std::vector<RunRecord>> per_sim(config.n_sims);
    if (config.threads <= 1) {
        for (int s = 0; s < config.n_sims; ++s)
            per_sim[s] = run_simulation_impl(config, s, sweep_index, sweep_param, sweep_value);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (;;) {
                const int s = next.fetch_add(1);
                if (s >= config.n_sims) return;
                per_sim[s] =
                    run_simulation_impl(config, s, sweep_index, sweep_param, sweep_value);
            }
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min(config.threads, config.n_sims);
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<RunRecord> records;
    for (auto& chunk : per_sim)
        for (auto& rec : chunk) records.push_back(std::move(rec));
    return records;
}

ExperimentConfig with_sweep_value(const ExperimentConfig& base, const std::string& param,
                                  double value) {
    ExperimentConfig config = base;
    config.sweep.reset();
    if (param == "n_alternatives")
        config.population.n_alternatives = static_cast<int>(std::lround(value));
    else if (param == "n_voters")
        config.population.n_voters = static_cast<int>(std::lround(value));
    else if (param == "absenteeism")
        config.population.absenteeism = value;
    else if (param == "cluster_density")
        config.population.cluster_density = value;
    else if (param == "minority_fraction")
        config.population.minority_fraction = value;
    else if (param == "beta")
        config.population.beta = value;
    else if (param == "rounds")
        config.rounds = static_cast<int>(std::lround(value));
    else
        throw std::invalid_argument("unknown sweep parameter: " + param);
    return config;
}

}  // namespace

std::vector<RunRecord> run_simulation(const ExperimentConfig& config, int sim_index) {
    config.validate();
    return run_simulation_impl(config, sim_index, 0, "", 0.0);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_experiment_impl(config, 0, "", 0.0);
}

std::vector<RunRecord> run_sweep(const ExperimentConfig& config) {
    config.validate();
    if (!config.sweep) throw std::invalid_argument("no sweep configured");
    std::vector<RunRecord> records;
    for (std::size_t vi = 0; vi < config.sweep->values.size(); ++vi) {
        const double value = config.sweep->values[vi];
        const ExperimentConfig point =
            with_sweep_value(config, config.sweep->parameter, value);
        point.validate();
        auto chunk = run_experiment_impl(point, static_cast<int>(vi), config.sweep->parameter,
                                         value);
        for (auto& rec : chunk) records.push_back(std::move(rec));
    }
    return records;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records) {
    std::string out =
        "sim_index,rule,mode,sweep_param,sweep_value,longest_dry_spell_max,"
        "longest_dry_spell_mean,gini_influence,lqc,uqc,qc,lqnc,uqnc,overlap,"
        "mean_approval_size,seed\n";
    for (const RunRecord& r : records) {
        out += std::to_string(r.sim_index) + ',' + r.rule + ',' + r.mode + ',' + r.sweep_param +
               ',';
        out += r.sweep_param.empty() ? "" : format_double(r.sweep_value);
        out += ',' + std::to_string(r.longest_dry_spell_max) + ',' +
               format_double(r.longest_dry_spell_mean) + ',' + format_double(r.gini_influence) +
               ',' + format_double(r.lqc) + ',' + format_double(r.uqc) + ',' +
               format_double(r.qc) + ',' + format_double(r.lqnc) + ',' + format_double(r.uqnc) +
               ',';
        if (r.overlap) out += format_double(*r.overlap);
        out += ',' + format_double(r.mean_approval_size) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

std::string records_to_json(const std::vector<RunRecord>& records) {
    nlohmann::json array = nlohmann::json::array();
    for (const RunRecord& r : records) {
        nlohmann::json obj;
        obj["sim_index"] = r.sim_index;
        obj["rule"] = r.rule;
        obj["mode"] = r.mode;
        obj["sweep_param"] = r.sweep_param;
        obj["sweep_value"] = r.sweep_value;
        obj["longest_dry_spell_max"] = r.longest_dry_spell_max;
        obj["longest_dry_spell_mean"] = r.longest_dry_spell_mean;
        obj["gini_influence"] = r.gini_influence;
        obj["lqc"] = r.lqc;
        obj["uqc"] = r.uqc;
        obj["qc"] = r.qc;
        obj["lqnc"] = r.lqnc;
        obj["uqnc"] = r.uqnc;
        if (r.overlap)
            obj["overlap"] = *r.overlap;
        else
            obj["overlap"] = nullptr;
        obj["mean_approval_size"] = r.mean_approval_size;
        obj["seed"] = r.seed;
        array.push_back(std::move(obj));
    }
    return array.dump(2) + "\n";
}

std::vector<RunRecord> records_from_json(const std::string& text) {
    const nlohmann::json array = nlohmann::json::parse(text);
    std::vector<RunRecord> records;
    for (const auto& obj : array) {
        RunRecord r;
        r.sim_index = obj.at("sim_index").get<int>();
        r.rule = obj.at("rule").get<std::string>();
        r.mode = obj.at("mode").get<std::string>();
        r.sweep_param = obj.at("sweep_param").get<std::string>();
        r.sweep_value = obj.at("sweep_value").get<double>();
        r.longest_dry_spell_max = obj.at("longest_dry_spell_max").get<int>();
        r.longest_dry_spell_mean = obj.at("longest_dry_spell_mean").get<double>();
        r.gini_influence = obj.at("gini_influence").get<double>();
        r.lqc = obj.at("lqc").get<double>();
        r.uqc = obj.at("uqc").get<double>();
        r.qc = obj.at("qc").get<double>();
        r.lqnc = obj.at("lqnc").get<double>();
        r.uqnc = obj.at("uqnc").get<double>();
        if (!obj.at("overlap").is_null()) r.overlap = obj.at("overlap").get<double>();
        r.mean_approval_size = obj.at("mean_approval_size").get<double>();
        r.seed = obj.at("seed").get<std::uint64_t>();
        records.push_back(std::move(r));
    }
    return records;
}

void write_records(const std::vector<RunRecord>& records, const std::string& path,
                   OutputFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << (format == OutputFormat::Csv ? records_to_csv(records) : records_to_json(records));
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace pvlab
