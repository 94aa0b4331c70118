#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pvlab/harness.hpp"
#include "pvlab/oracle_suite.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

namespace py = pybind11;
using namespace pvlab;

namespace {

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows; ++r) {
        if (static_cast<int>(rows[r].size()) != m.cols)
            throw std::invalid_argument("ragged feature matrix");
        for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Perpetual approval voting simulation laboratory";

    py::enum_<RuleId>(m, "RuleId")
        .value("AV", RuleId::Av)
        .value("PHRAGMEN", RuleId::Phragmen)
        .value("CONSENSUS", RuleId::Consensus)
        .value("QUOTA", RuleId::Quota);

    py::enum_<ParticipationMode>(m, "ParticipationMode")
        .value("FULL", ParticipationMode::Full)
        .value("PARTIAL", ParticipationMode::Partial)
        .value("DELEGATED", ParticipationMode::Delegated);

    py::enum_<ThresholdMode>(m, "ThresholdMode")
        .value("ABSOLUTE", ThresholdMode::Absolute)
        .value("RELATIVE_MARGIN", ThresholdMode::RelativeMargin);

    py::class_<VisibleProfile>(m, "VisibleProfile")
        .def(py::init([](int n_alternatives, std::vector<ApprovalSet> approvals) {
                 VisibleProfile p;
                 p.n_alternatives = n_alternatives;
                 p.provenance.assign(approvals.size(), Provenance::Observed);
                 p.approvals = std::move(approvals);
                 for (auto& set : p.approvals) std::sort(set.begin(), set.end());
                 return p;
             }),
             py::arg("n_alternatives"), py::arg("approvals"))
        .def_readonly("n_alternatives", &VisibleProfile::n_alternatives)
        .def_readonly("approvals", &VisibleProfile::approvals);

    m.def("select_av", &select_av);

    py::class_<PhragmenEngine>(m, "PhragmenEngine")
        .def(py::init<int>(), py::arg("n_voters"))
        .def("select", &PhragmenEngine::select)
        .def_property_readonly("loads", &PhragmenEngine::loads);

    py::class_<ConsensusEngine>(m, "ConsensusEngine")
        .def(py::init<int>(), py::arg("n_voters"))
        .def("select", &ConsensusEngine::select)
        .def_property_readonly("weights", &ConsensusEngine::weights);

    py::class_<QuotaEngine>(m, "QuotaEngine")
        .def(py::init<int>(), py::arg("n_voters"))
        .def(
            "select",
            [](QuotaEngine& self, const VisibleProfile& profile,
               const std::vector<bool>& present, ParticipationMode mode) {
                PresenceMask mask;
                for (bool p : present) mask.present.push_back(p ? 1 : 0);
                return self.select(profile, mask, mode);
            },
            py::arg("profile"), py::arg("present"),
            py::arg("mode") = ParticipationMode::Full)
        .def_property_readonly("cumulative_quota", &QuotaEngine::cumulative_quota)
        .def_property_readonly("cumulative_satisfaction", &QuotaEngine::cumulative_satisfaction);

    m.def("phragmen_score",
          [](const std::vector<double>& loads, const std::vector<int>& approvers)
              -> std::optional<std::pair<double, std::vector<int>>> {
              auto s = phragmen_score(loads, approvers);
              if (!s) return std::nullopt;
              return std::make_pair(s->score, s->minimizing_set);
          });

    m.def("support", &support, py::arg("profile"), py::arg("voter"), py::arg("denominator"));
    m.def("gini", &gini);
    m.def("overlap", &overlap);

    py::class_<LearnedPreference>(m, "LearnedPreference")
        .def_readonly("weights_hat", &LearnedPreference::weights_hat)
        .def_readonly("threshold_hat", &LearnedPreference::threshold_hat)
        .def_readonly("converged", &LearnedPreference::converged)
        .def_readonly("final_objective", &LearnedPreference::final_objective);

    py::class_<TrainingSet>(m, "TrainingSet")
        .def(py::init<>())
        .def("append_round",
             [](TrainingSet& self, const std::vector<std::vector<double>>& features,
                ApprovalSet approvals, ThresholdMode mode) {
                 std::sort(approvals.begin(), approvals.end());
                 append_round(self, matrix_from_rows(features), approvals, mode);
             },
             py::arg("features"), py::arg("approvals"),
             py::arg("mode") = ThresholdMode::Absolute)
        .def("__len__", [](const TrainingSet& self) { return self.size(); });

    m.def("simplex_project", &simplex_project);
    m.def(
        "fit",
        [](const TrainingSet& data, int max_iters, double grad_tol) {
            LearnerConfig config;
            config.max_iters = max_iters;
            config.grad_tol = grad_tol;
            return fit(data, config);
        },
        py::arg("data"), py::arg("max_iters") = 500, py::arg("grad_tol") = 1e-6);
    m.def(
        "predict",
        [](const LearnedPreference& pref, const std::vector<std::vector<double>>& features,
           ThresholdMode mode) { return predict(pref, matrix_from_rows(features), mode); },
        py::arg("pref"), py::arg("features"), py::arg("mode") = ThresholdMode::Absolute);

    py::class_<PopulationConfig>(m, "PopulationConfig")
        .def(py::init<>())
        .def_readwrite("n_voters", &PopulationConfig::n_voters)
        .def_readwrite("minority_fraction", &PopulationConfig::minority_fraction)
        .def_readwrite("cluster_density", &PopulationConfig::cluster_density)
        .def_readwrite("dirichlet_alpha", &PopulationConfig::dirichlet_alpha)
        .def_readwrite("d", &PopulationConfig::d)
        .def_readwrite("tau", &PopulationConfig::tau)
        .def_readwrite("beta", &PopulationConfig::beta)
        .def_readwrite("n_alternatives", &PopulationConfig::n_alternatives)
        .def_readwrite("absenteeism", &PopulationConfig::absenteeism)
        .def_readwrite("threshold_mode", &PopulationConfig::threshold_mode);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("parameter", &SweepSpec::parameter)
        .def_readwrite("values", &SweepSpec::values);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("population", &ExperimentConfig::population)
        .def_readwrite("rounds", &ExperimentConfig::rounds)
        .def_readwrite("n_sims", &ExperimentConfig::n_sims)
        .def_readwrite("rules", &ExperimentConfig::rules)
        .def_readwrite("modes", &ExperimentConfig::modes)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("sweep", &ExperimentConfig::sweep);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("sim_index", &RunRecord::sim_index)
        .def_readonly("rule", &RunRecord::rule)
        .def_readonly("mode", &RunRecord::mode)
        .def_readonly("sweep_param", &RunRecord::sweep_param)
        .def_readonly("sweep_value", &RunRecord::sweep_value)
        .def_readonly("longest_dry_spell_max", &RunRecord::longest_dry_spell_max)
        .def_readonly("longest_dry_spell_mean", &RunRecord::longest_dry_spell_mean)
        .def_readonly("gini_influence", &RunRecord::gini_influence)
        .def_readonly("lqc", &RunRecord::lqc)
        .def_readonly("uqc", &RunRecord::uqc)
        .def_readonly("qc", &RunRecord::qc)
        .def_readonly("lqnc", &RunRecord::lqnc)
        .def_readonly("uqnc", &RunRecord::uqnc)
        .def_readonly("overlap", &RunRecord::overlap)
        .def_readonly("mean_approval_size", &RunRecord::mean_approval_size)
        .def_readonly("seed", &RunRecord::seed);

    m.def("run_simulation", &run_simulation, py::arg("config"), py::arg("sim_index") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_experiment", &run_experiment, py::call_guard<py::gil_scoped_release>());
    m.def("run_sweep", &run_sweep, py::call_guard<py::gil_scoped_release>());
    m.def("records_to_csv", &records_to_csv);
    m.def("records_to_json", &records_to_json);
    m.def(
        "write_records",
        [](const std::vector<RunRecord>& records, const std::string& path,
           const std::string& format) {
            write_records(records, path,
                          format == "json" ? OutputFormat::Json : OutputFormat::Csv);
        },
        py::arg("records"), py::arg("path"), py::arg("format") = "csv");
    m.def("run_oracle_suite", [] {
        std::ostringstream out;
        const bool ok = run_oracle_suite(out);
        return std::make_pair(ok, out.str());
    });
}
