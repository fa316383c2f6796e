"""
Feature expressions and provenance
==================================

Every generated column carries a name that is also its derivation. Parsing
the name back and evaluating it on the original table reproduces the column.
"""

import numpy as np

from grfg import DataTable, Operation, Task, apply_op, evaluate, parse_name, render_name
from grfg.expr import Binary, Leaf, Unary

# a tiny table with three named columns
rng = np.random.default_rng(0)
X = rng.standard_normal((6, 3))
table = DataTable(("lstat", "rm", "age"), X, X[:, 0] * X[:, 1], Task.REGRESSION)

# the fixed operation set: ten unary and four binary transforms
for op in Operation:
    print(f"{op.index:2d} {op.symbol:8s} arity={op.arity}")

# build an expression tree by hand and render it
expr = Binary(Operation.MULTIPLY, Leaf("lstat"), Unary(Operation.SQUARE_ROOT, Leaf("rm")))
name = render_name(expr)
print("\nname:", name)

# the name parses back to the same tree, and evaluates on the table
assert parse_name(name, table.names) == expr
values = evaluate(parse_name(name), table)
print("values:", np.round(values, 4))

# sqrt and log act on |x|; non-finite results are mapped to 0
print("sqrt(-4) =", apply_op(Operation.SQUARE_ROOT, np.array([-4.0])))
print("1/0      =", apply_op(Operation.RECIPROCAL, np.array([0.0])))
