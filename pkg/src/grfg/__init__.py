"""Group-wise reinforcement feature generation for tabular data."""

from .data import DataTable, FoldSplit, Task, load_csv, stratified_kfold, write_csv
from .engine import RunConfig, RunReport, evaluate_features, run_grfg, run_rdg
from .expr import Binary, Leaf, Operation, Unary, apply_op, evaluate, parse_name, render_name
from .info import InfoConfig

__all__ = [
    "DataTable", "FoldSplit", "Task", "load_csv", "stratified_kfold", "write_csv",
    "RunConfig", "RunReport", "evaluate_features", "run_grfg", "run_rdg",
    "Binary", "Leaf", "Operation", "Unary", "apply_op", "evaluate", "parse_name", "render_name",
    "InfoConfig",
]
