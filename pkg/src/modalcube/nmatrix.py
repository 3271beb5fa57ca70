"""Per-logic non-deterministic truth functions for bot, -> and [].

The tables are embedded as literal data and compiled to uint8 mask arrays at
import time.  Derived connectives are
never hand-tabulated: negation is the bot column of the implication table and
diamond is computed by composing negation and box over every intermediate
choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import values
from .logics import Logic, lookup
from .values import mask_of

__all__ = [
    "Nmatrix", "nmatrix", "ValueNotInLogicError",
    "IMP_TABLE", "BOX_TABLE", "BOT_VALUES",
]


class ValueNotInLogicError(ValueError):
    def __init__(self, v: int, logic: Logic):
        super().__init__(
            f"value {values.VALUE_NAMES[v]} is not admissible in {logic.name} "
            f"(admissible: {' '.join(values.names_in(logic.values_mask))})")


# Implication: rows are the antecedent value, columns the consequent value.
# Cells are space-separated value names; the table is shared by all families
# and restricted to each logic's admissible values on use.
IMP_TABLE = {
    "F":   {"F": "T",   "f": "T",     "ff": "T",   "fff": "T",   "ttt": "T",   "tt": "T",  "t": "T",   "T": "T"},
    "f":   {"F": "t",   "f": "T t",   "ff": "tt",  "fff": "T",   "ttt": "t",   "tt": "T",  "t": "T t", "T": "T"},
    "ff":  {"F": "ttt", "f": "t",     "ff": "tt",  "fff": "T",   "ttt": "ttt", "tt": "tt", "t": "t",   "T": "T"},
    "fff": {"F": "ttt", "f": "t",     "ff": "tt",  "fff": "T",   "ttt": "ttt", "tt": "tt", "t": "t",   "T": "T"},
    "ttt": {"F": "fff", "f": "fff",   "ff": "fff", "fff": "fff", "ttt": "T",   "tt": "T",  "t": "T",   "T": "T"},
    "tt":  {"F": "F",   "f": "f",     "ff": "ff",  "fff": "fff", "ttt": "ttt", "tt": "tt", "t": "ttt", "T": "T"},
    "t":   {"F": "f",   "f": "f fff", "ff": "fff", "fff": "fff", "ttt": "t",   "tt": "T",  "t": "T t", "T": "T"},
    "T":   {"F": "F",   "f": "f",     "ff": "ff",  "fff": "fff", "ttt": "ttt", "tt": "tt", "t": "t",   "T": "T"},
}

BOT_VALUES = "F ff"

# Box: one column per logic, rows restricted to the logic's admissible values.
BOX_TABLE = {
    "K":    {"F": "F f fff", "f": "F f fff", "ff": "tt", "fff": "T t ttt", "ttt": "F f fff", "tt": "tt", "t": "F f fff", "T": "T t ttt"},
    "KB":   {"F": "F",       "f": "F",       "ff": "tt", "fff": "ttt",     "ttt": "F f fff", "tt": "tt", "t": "F f fff", "T": "T t ttt"},
    "K4":   {"F": "F f fff", "f": "F f fff", "ff": "tt", "fff": "T",       "ttt": "F f fff", "tt": "tt", "t": "F f fff", "T": "T"},
    "K5":   {"F": "F",       "f": "F",       "ff": "tt", "fff": "T ttt",   "ttt": "F",       "tt": "tt", "t": "F",       "T": "T ttt"},
    "K45":  {"F": "F",       "f": "F",       "ff": "tt", "fff": "T",       "ttt": "F",       "tt": "tt", "t": "F",       "T": "T"},
    "KB5":  {"F": "F",       "f": "F",       "ff": "tt", "tt": "tt",       "t": "F",         "T": "T"},
    "KD":   {"F": "F f fff", "f": "F f fff", "fff": "T t ttt", "ttt": "F f fff", "t": "F f fff", "T": "T t ttt"},
    "KDB":  {"F": "F",       "f": "F",       "fff": "ttt",     "ttt": "F f fff", "t": "F f fff", "T": "T t ttt"},
    "KD4":  {"F": "F",       "f": "F f fff", "fff": "T",       "ttt": "F",       "t": "F f fff", "T": "T"},
    "KD5":  {"F": "F",       "f": "F",       "fff": "T ttt",   "ttt": "F",       "t": "F",       "T": "T ttt"},
    "KD45": {"F": "F",       "f": "F",       "fff": "T",       "ttt": "F",       "t": "F",       "T": "T"},
    "KT":   {"F": "F", "f": "F f", "t": "F f", "T": "T t"},
    "KTB":  {"F": "F", "f": "F",   "t": "F f", "T": "T t"},
    "KT4":  {"F": "F", "f": "F f", "t": "F f", "T": "T"},
    "KT45": {"F": "F", "f": "F",   "t": "F",   "T": "T"},
}

_IMP_MASKS = np.zeros((8, 8), dtype=np.uint8)
for _a, _row in IMP_TABLE.items():
    for _b, _cell in _row.items():
        _IMP_MASKS[values.value_id(_a), values.value_id(_b)] = mask_of(_cell)

_BOT_MASK = mask_of(BOT_VALUES)


@dataclass(frozen=True)
class Nmatrix:
    logic: Logic
    bot_mask: int
    imp_masks: np.ndarray   # (8, 8) uint8, already intersected with V(L)
    box_masks: np.ndarray   # (8,) uint8, zero for values outside V(L)

    def _check(self, v: int) -> None:
        if not (0 <= v < 8) or not (self.logic.values_mask >> v & 1):
            raise ValueNotInLogicError(v, self.logic)

    def imp(self, a: int, b: int) -> int:
        """Admissible values of an implication, as a mask.

        Outputs are the shared table intersected with the logic's value set.
        For KB5 a handful of cells mixing a stable with a non-stable argument
        intersect to the empty mask; such argument pairs never occur inside a
        valuation (stable values only ever appear alongside stable values).
        """
        self._check(a)
        self._check(b)
        return int(self.imp_masks[a, b])

    def box(self, a: int) -> int:
        self._check(a)
        return int(self.box_masks[a])

    def neg(self, a: int, bot_val: int = values.F) -> int:
        """Negation is the implication into a falsum value."""
        if not (self.bot_mask >> bot_val & 1):
            raise ValueNotInLogicError(bot_val, self.logic)
        return self.imp(a, bot_val)

    def dia(self, a: int, bot_val: int | None = None) -> int:
        """Diamond by composition: union of neg(box(neg(a))) over all choices.

        The falsum value defaults to ff on the stable fragment and F
        elsewhere, matching how the two kinds of rows evaluate bot.
        """
        if bot_val is None:
            stable = bool(values.STABLE_MASK >> a & 1)
            bot_val = values.ff if stable and (self.bot_mask >> values.ff & 1) else values.F
        out = 0
        for b in values.values_in(self.neg(a, bot_val)):
            for c in values.values_in(self.box(b)):
                out |= self.neg(c, bot_val)
        return out


@lru_cache(maxsize=None)
def _nmatrix_by_name(name: str) -> Nmatrix:
    logic = lookup(name)
    vmask = logic.values_mask
    imp = np.zeros((8, 8), dtype=np.uint8)
    for a in values.values_in(vmask):
        for b in values.values_in(vmask):
            imp[a, b] = _IMP_MASKS[a, b] & vmask
    box = np.zeros(8, dtype=np.uint8)
    for a_name, cell in BOX_TABLE[logic.name].items():
        box[values.value_id(a_name)] = mask_of(cell)
    return Nmatrix(logic, _BOT_MASK & vmask, imp, box)


def nmatrix(logic: Logic | str) -> Nmatrix:
    name = logic if isinstance(logic, str) else logic.name
    return _nmatrix_by_name(lookup(name).name)
