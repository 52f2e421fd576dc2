"""Finite Kripke models whose states are sequences and whose relations are
the functional images ``s -> s∘t``.  Relations are computed from the unit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SignatureError
from .perm import SAD, TA
from .setalg import DenseSet, SetAlgebra, Unit, classify_unit
from .terms import (Box, Conj, Dia, Disj, FBot, FDiag, Formula, FTop, Iff, Imp, Neg, Prop,
                    term_vars, translate)


@dataclass
class KripkeModel:
    unit: Unit
    valuation: dict[int, DenseSet]

    def __post_init__(self):
        for k, v in self.valuation.items():
            if v.unit != self.unit:
                raise ValueError(f"valuation of p{k} lies outside the unit")

    def successor(self, letter) -> np.ndarray:
        """Index of the unique R-successor of each state (-1 if it leaves the unit)."""
        return self.unit.point_map(letter.transformation(self.unit.dim))

    def to_json(self):
        return {
            **self.unit.to_json(),
            "valuation": {f"p{k}": v.to_hex() for k, v in sorted(self.valuation.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> KripkeModel:
        unit = classify_unit(data["dim"], data["base"], data["unit"])
        val = {int(k.lstrip("p")): DenseSet.from_hex(unit, v) for k, v in data["valuation"].items()}
        return cls(unit, val)


def _extension(m: KripkeModel, f: Formula) -> np.ndarray:
    size = m.unit.size
    match f:
        case Prop(i):
            v = m.valuation.get(i)
            return v.to_array() if v is not None else np.zeros(size, dtype=bool)
        case FTop():
            return np.ones(size, dtype=bool)
        case FBot():
            return np.zeros(size, dtype=bool)
        case FDiag(i, j):
            return m.unit.digits[:, i] == m.unit.digits[:, j]
        case Neg(a):
            return ~_extension(m, a)
        case Conj(a, b):
            return _extension(m, a) & _extension(m, b)
        case Disj(a, b):
            return _extension(m, a) | _extension(m, b)
        case Imp(a, b):
            return ~_extension(m, a) | _extension(m, b)
        case Iff(a, b):
            return _extension(m, a) == _extension(m, b)
        case Dia(letter, a) | Box(letter, a):
            sub = _extension(m, a)
            succ = m.successor(letter)
            has = succ >= 0
            out = np.zeros(size, dtype=bool) if isinstance(f, Dia) else np.ones(size, dtype=bool)
            out[has] = sub[succ[has]]
            return out
    raise TypeError(f"not a formula: {f!r}")


def formula_extension(m: KripkeModel, f: Formula) -> DenseSet:
    return DenseSet.from_array(m.unit, _extension(m, f))


def satisfies(m: KripkeModel, w, f: Formula) -> bool:
    k = m.unit.index(tuple(w) if not isinstance(w, int) else w)
    if k < 0:
        raise ValueError(f"state {w} is not in the model")
    return bool(_extension(m, f)[k])


def countermodel_to_kripke(cm) -> tuple[KripkeModel, tuple[int, ...]]:
    """Read an algebraic countermodel as a Kripke model refuting the formula at the witness."""
    if cm is None:
        raise ValueError("no countermodel: the input was not refuted")
    unit = cm.algebra.unit
    if cm.witness not in unit:
        raise ValueError("malformed certificate: witness outside the unit")
    return KripkeModel(unit, dict(cm.assignment)), tuple(cm.witness)


def model_algebra(m: KripkeModel, diagonals: bool = False) -> SetAlgebra:
    """℘(unit) with the richest signature the unit supports."""
    if diagonals and m.unit.dipermutable:
        return SetAlgebra(m.unit, SAD)
    if not m.unit.permutable:
        raise SignatureError("Kripke states must form a permutable set")
    return SetAlgebra(m.unit, "SA" if m.unit.dipermutable else TA)


def translation_agrees(m: KripkeModel, f: Formula) -> bool:
    """formula_extension equals eval_term of the translation over ℘(unit)."""
    from .terms import eval_term

    alg = model_algebra(m, diagonals=True)
    assignment = {i: m.valuation.get(i, alg.bottom()) for i in term_vars(translate(f))}
    return formula_extension(m, f) == eval_term(translate(f), assignment, alg)
