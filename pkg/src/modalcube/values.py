"""The eight truth values, their distinguished sets, and characterizing formulas.

Values are the integers 0..7 in the fixed order F < f < ff < fff < ttt < tt
< t < T, so any set of values packs into one byte.  All of the filtering
machinery works on these bit masks.
"""

from __future__ import annotations

import numpy as np

from .formula import Box, Formula, land, ldia, lnot

VALUE_NAMES = ("F", "f", "ff", "fff", "ttt", "tt", "t", "T")

F, f, ff, fff, ttt, tt, t, T = range(8)

ALL_MASK = 0xFF


def mask_of(names: str) -> int:
    """Mask from a space-separated list of value names ('' is the empty set)."""
    m = 0
    for name in names.split():
        m |= 1 << VALUE_NAMES.index(name)
    return m


def value_id(name: str) -> int:
    try:
        return VALUE_NAMES.index(name)
    except ValueError:
        raise ValueError(f"unknown truth value {name!r}") from None


def values_in(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(8) if mask >> v & 1)


def names_in(mask: int) -> tuple[str, ...]:
    return tuple(VALUE_NAMES[v] for v in values_in(mask))


# Distinguished sets.  D: the formula is true; N: it is necessary; I: its
# negation is necessary; P: it is possible; PN: its negation is possible.
D_MASK = mask_of("T t tt ttt")
DC_MASK = mask_of("F f ff fff")
N_MASK = mask_of("T tt fff ff")
I_MASK = mask_of("F ff ttt tt")
P_MASK = mask_of("T t fff f")
PN_MASK = mask_of("F f ttt t")

# tt and ff are the stable values: simultaneously necessary and impossible.
# A valuation containing one of them contains nothing else.
STABLE_MASK = N_MASK & I_MASK

NAMED_SETS = {
    "D": D_MASK,
    "Dc": DC_MASK,
    "N": N_MASK,
    "I": I_MASK,
    "P": P_MASK,
    "PN": PN_MASK,
}


def member(v: int, set_name: str) -> bool:
    """Membership of a value in one of the six named sets."""
    return bool(NAMED_SETS[set_name] >> v & 1)


def in_mask(mask: int, arr: np.ndarray) -> np.ndarray:
    """Elementwise membership of an array of value ids in a mask."""
    return (mask >> arr.astype(np.int64)) & 1 == 1


def characterization(v: int, a: Formula) -> Formula:
    """The conjunction of modal facts that holds exactly when `a` has value v.

    Three conjuncts: []a or <>!a (necessary or refutable), a or !a (true or
    false), and []!a or <>a (impossible or possible).  Built left-associated
    and desugared to the core AST.
    """
    first = Box(a) if member(v, "N") else ldia(lnot(a))
    second = a if member(v, "D") else lnot(a)
    third = Box(lnot(a)) if member(v, "I") else ldia(a)
    return land(land(first, second), third)
