"""Feature selection, oversampling, the classifier and its evaluation."""

from cgems.learn.evaluation import EvalReport, evaluate, split, stratified_split
from cgems.learn.matrix import FeatureMatrix, apply_standardization, standardize
from cgems.learn.mlp import MlpConfig, MlpModel, TrainingError, gradient_check, train_mlp
from cgems.learn.pipeline import PipelineConfig, PipelineResult, default_train_size, run_pipeline
from cgems.learn.selection import (
    SelectionReport,
    add_anova,
    anova_f,
    correlation_prune,
    select_k_best,
)
from cgems.learn.smote import smote

__all__ = [
    "EvalReport",
    "FeatureMatrix",
    "MlpConfig",
    "MlpModel",
    "PipelineConfig",
    "PipelineResult",
    "SelectionReport",
    "TrainingError",
    "add_anova",
    "anova_f",
    "apply_standardization",
    "correlation_prune",
    "default_train_size",
    "evaluate",
    "gradient_check",
    "run_pipeline",
    "select_k_best",
    "smote",
    "split",
    "standardize",
    "stratified_split",
    "train_mlp",
]
