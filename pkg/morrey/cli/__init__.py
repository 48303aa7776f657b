"""Experiment runner and its text artifacts."""

from .contours import ContourLevel, Polyline, emit_contours, extract_contours
from .experiment import ExperimentResult, execute, run_experiment
from .report import emit_report

__all__ = [
    "ContourLevel",
    "ExperimentResult",
    "Polyline",
    "emit_contours",
    "emit_report",
    "execute",
    "extract_contours",
    "run_experiment",
]
