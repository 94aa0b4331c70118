"""Perpetual approval voting simulation laboratory."""

from ._core import (  # noqa: F401
    ConsensusEngine,
    ExperimentConfig,
    LearnedPreference,
    ParticipationMode,
    PhragmenEngine,
    PopulationConfig,
    QuotaEngine,
    RuleId,
    RunRecord,
    SweepSpec,
    ThresholdMode,
    TrainingSet,
    VisibleProfile,
    fit,
    gini,
    overlap,
    phragmen_score,
    predict,
    records_to_csv,
    records_to_json,
    run_experiment,
    run_oracle_suite,
    run_simulation,
    run_sweep,
    select_av,
    simplex_project,
    support,
    write_records,
)

__all__ = [name for name in dir() if not name.startswith("_")]
