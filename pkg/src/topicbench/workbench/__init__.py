from .chord import ChordGraph, chord_graph
from .workspace import RankingRecord, Workspace, config_hash
from .pipeline import run_pipeline
from .report import export_report

__all__ = [
    "ChordGraph",
    "chord_graph",
    "RankingRecord",
    "Workspace",
    "config_hash",
    "run_pipeline",
    "export_report",
]
