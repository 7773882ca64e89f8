"""Sign-based spectral clustering for two-component Gaussian mixtures, with
closed-form misclassification bounds and a Monte Carlo harness."""
from .bounds import BoundReport, Constants, bound_report
from .cluster import AlignmentMode, ClusterResult, spectral_cluster
from .experiment import ExperimentConfig, ExperimentResult, run_experiment
from .model import LabeledSample, MixtureModel, sample
from .scenarios import build as scenario

__version__ = "0.1.0"

__all__ = [
    "AlignmentMode", "BoundReport", "ClusterResult", "Constants", "ExperimentConfig",
    "ExperimentResult", "LabeledSample", "MixtureModel", "bound_report", "run_experiment",
    "sample", "scenario", "spectral_cluster",
]
