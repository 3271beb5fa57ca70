"""Decision procedures for the fifteen normal modal logics of the cube,
built on eight-valued non-deterministic truth tables with support-based row
filtering, plus relational-model extraction and a bounded countermodel
oracle for cross-validation."""

from .decision import (TableModel, Verdict, decide, enumerate_rows,
                       extend_column, filter_model, level_filter)
from .formula import (Atom, Box, Closure, Falsum, Formula, Implies, closure,
                      instantiate, parse, print_formula)
from .kripke import (KripkeModel, OracleVerdict, forces, frame_closure,
                     oracle_decide, to_kripke)
from .logics import Logic, all_logics, axioms, lookup
from .nmatrix import Nmatrix, nmatrix

__version__ = "0.1.0"

__all__ = [
    "Atom", "Box", "Closure", "Falsum", "Formula", "Implies",
    "KripkeModel", "Logic", "Nmatrix", "OracleVerdict", "TableModel",
    "Verdict", "all_logics", "axioms", "closure", "decide", "enumerate_rows",
    "extend_column", "filter_model", "forces", "frame_closure",
    "instantiate", "level_filter", "lookup", "nmatrix", "oracle_decide",
    "parse", "print_formula", "to_kripke",
]
