"""Concrete set algebras over units V ⊆ ^nU.

A point q ∈ ^nU is encoded as the base-u integer ``sum(q[i] * u**i)``.
Elements are bitsets over the unit's member points, in increasing code order.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import SignatureError
from .perm import SA, SAD, TA, KINDS, Transformation, generators

MAX_POINTS = 1 << 20


def bits_to_array(bits: int, size: int) -> np.ndarray:
    if size == 0:
        return np.zeros(0, dtype=bool)
    raw = np.frombuffer(bits.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def array_to_bits(arr: np.ndarray) -> int:
    arr = np.asarray(arr, dtype=bool)
    if arr.size == 0:
        return 0
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


class Unit:
    """A set of points V ⊆ ^n u together with its closure flags."""

    def __init__(self, dim: int, base: int, points: Iterable[int] | None = None):
        if dim < 1 or base < 0:
            raise ValueError("need dim >= 1 and base >= 0")
        total = base ** dim if base else 0
        if total > MAX_POINTS:
            raise ValueError(f"{base}^{dim} points exceed the bound {MAX_POINTS}")
        self.dim = dim
        self.base = base
        if points is None:
            codes = np.arange(total, dtype=np.int64)
        else:
            codes = np.unique(np.fromiter((int(p) for p in points), dtype=np.int64))
            if codes.size and (codes[0] < 0 or codes[-1] >= total):
                raise ValueError("point code out of range")
        self.points = codes
        self.size = int(codes.size)
        self._powers = np.array([base ** i for i in range(dim)], dtype=np.int64)
        if self.size:
            self.digits = (codes[:, None] // self._powers[None, :]) % base
        else:
            self.digits = np.zeros((0, dim), dtype=np.int64)
        self._maps: dict[Transformation, np.ndarray] = {}
        self.square = self.size == total
        self.permutable = all(self._closed(g) for g in generators(dim, TA))
        self.dipermutable = self.permutable and all(self._closed(g) for g in generators(dim, SA))

    # -- points -------------------------------------------------------------
    def code(self, seq: Sequence[int]) -> int:
        if len(seq) != self.dim or any(not 0 <= v < self.base for v in seq):
            raise ValueError(f"{tuple(seq)} is not a point of ^{self.dim}{self.base}")
        return int(sum(int(v) * int(p) for v, p in zip(seq, self._powers)))

    def sequence(self, code: int) -> tuple[int, ...]:
        return tuple((int(code) // self.base ** i) % self.base for i in range(self.dim))

    def index(self, point) -> int:
        """Position of a point (code or sequence) in the unit, or -1."""
        code = self.code(point) if isinstance(point, (tuple, list)) else int(point)
        k = int(np.searchsorted(self.points, code))
        if k < self.size and self.points[k] == code:
            return k
        return -1

    def __contains__(self, point) -> bool:
        return self.index(point) >= 0

    def __len__(self):
        return self.size

    def sequences(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.digits]

    def point_map(self, t: Transformation) -> np.ndarray:
        """``pm[k]`` = position of ``q_k ∘ t`` in the unit, -1 when it falls outside."""
        pm = self._maps.get(t)
        if pm is None:
            if t.dim != self.dim:
                raise ValueError("dimension mismatch")
            if self.size == 0:
                pm = np.zeros(0, dtype=np.int64)
            else:
                codes = self.digits[:, list(t.images)] @ self._powers
                pos = np.searchsorted(self.points, codes)
                pos_c = np.minimum(pos, self.size - 1)
                pm = np.where(self.points[pos_c] == codes, pos_c, -1)
            self._maps[t] = pm
        return pm

    def _closed(self, letter) -> bool:
        return bool((self.point_map(letter.transformation(self.dim)) >= 0).all())

    # -- identity -------------------------------------------------------------
    def _key(self):
        return (self.dim, self.base, self.points.tobytes())

    def __eq__(self, other):
        return isinstance(other, Unit) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def kind_flags(self) -> set[str]:
        flags = set()
        if self.square:
            flags.add("square")
        if self.permutable:
            flags.add("permutable")
        if self.dipermutable:
            flags.add("dipermutable")
        return flags

    def to_json(self):
        return {
            "dim": self.dim,
            "base": self.base,
            "unit": "square" if self.square else [int(c) for c in self.points],
        }

    def __repr__(self):
        return f"Unit(dim={self.dim}, base={self.base}, size={self.size}, flags={sorted(self.kind_flags)})"


def _codes(dim: int, base: int, membership) -> list[int] | None:
    if membership == "square" or membership is None:
        return None
    unit = Unit(dim, base, [])
    return [unit.code(p) if isinstance(p, (tuple, list)) else int(p) for p in membership]


def classify_unit(dim: int, base: int, membership) -> Unit:
    """Build a unit from codes or sequences (or ``"square"``) and compute its flags."""
    return Unit(dim, base, _codes(dim, base, membership))


def permutable_closure(dim: int, base: int, membership, kind: str = TA) -> Unit:
    """Smallest superset closed under the transpositions (and replacements unless TA)."""
    full = Unit(dim, base)
    start = _codes(dim, base, membership)
    if start is None:
        return full
    gens = [g.transformation(dim) for g in generators(dim, TA if kind == TA else SA)]
    member = np.zeros(full.size, dtype=bool)
    member[start] = True
    while True:
        grown = member.copy()
        for g in gens:
            grown[full.point_map(g)[member]] = True
        if (grown == member).all():
            break
        member = grown
    return Unit(dim, base, np.nonzero(member)[0])


class DenseSet:
    """An element X ⊆ V, stored as a bitset over the unit's points."""

    __slots__ = ("unit", "bits")

    def __init__(self, unit: Unit, bits: int = 0):
        if bits < 0 or bits >> unit.size:
            raise ValueError("bits outside the unit")
        self.unit = unit
        self.bits = bits

    @classmethod
    def from_points(cls, unit: Unit, points: Iterable) -> DenseSet:
        bits = 0
        for p in points:
            k = unit.index(p)
            if k < 0:
                raise ValueError(f"point {p} is not in the unit")
            bits |= 1 << k
        return cls(unit, bits)

    @classmethod
    def from_array(cls, unit: Unit, arr) -> DenseSet:
        return cls(unit, array_to_bits(arr))

    @classmethod
    def from_hex(cls, unit: Unit, text: str) -> DenseSet:
        return cls(unit, int(text, 16))

    def to_array(self) -> np.ndarray:
        return bits_to_array(self.bits, self.unit.size)

    def to_hex(self) -> str:
        return format(self.bits, "x")

    def sequences(self) -> list[tuple[int, ...]]:
        return [self.unit.sequence(self.unit.points[k]) for k in range(self.unit.size) if self.bits >> k & 1]

    def __contains__(self, point) -> bool:
        k = self.unit.index(point)
        return k >= 0 and bool(self.bits >> k & 1)

    def _check(self, other: DenseSet):
        if self.unit is not other.unit and self.unit != other.unit:
            raise ValueError("elements of different units")

    def __and__(self, other):
        self._check(other)
        return DenseSet(self.unit, self.bits & other.bits)

    def __or__(self, other):
        self._check(other)
        return DenseSet(self.unit, self.bits | other.bits)

    def __invert__(self):
        return DenseSet(self.unit, ((1 << self.unit.size) - 1) ^ self.bits)

    def __sub__(self, other):
        self._check(other)
        return DenseSet(self.unit, self.bits & ~other.bits)

    def __le__(self, other):
        self._check(other)
        return self.bits & ~other.bits == 0

    def __eq__(self, other):
        return isinstance(other, DenseSet) and self.unit == other.unit and self.bits == other.bits

    def __hash__(self):
        return hash((self.unit, self.bits))

    def __len__(self):
        return bin(self.bits).count("1")

    def __bool__(self):
        return self.bits != 0

    def __repr__(self):
        return f"DenseSet({self.sequences()})"


def apply_subst(x: DenseSet, t: Transformation) -> DenseSet:
    """S_t(X) = {q ∈ V : q∘t ∈ X}."""
    pm = x.unit.point_map(t)
    arr = x.to_array()
    out = np.zeros(x.unit.size, dtype=bool)
    ok = pm >= 0
    out[ok] = arr[pm[ok]]
    return DenseSet.from_array(x.unit, out)


class SetAlgebra:
    """℘(V) with Boolean operations, substitutions and (for SAD) diagonals."""

    def __init__(self, unit: Unit, kind: str = TA):
        if kind not in KINDS:
            raise SignatureError(f"unknown signature {kind!r}")
        if kind == TA and not unit.permutable:
            raise SignatureError("TA algebras need a permutable unit")
        if kind != TA and not unit.dipermutable:
            raise SignatureError(f"{kind} algebras need a dipermutable unit")
        self.unit = unit
        self.kind = kind

    @property
    def dim(self):
        return self.unit.dim

    @property
    def size(self):
        return self.unit.size

    def top(self) -> DenseSet:
        return DenseSet(self.unit, (1 << self.unit.size) - 1)

    def bottom(self) -> DenseSet:
        return DenseSet(self.unit, 0)

    def element(self, points) -> DenseSet:
        return DenseSet.from_points(self.unit, points)

    def check_transformation(self, t: Transformation):
        if t.dim != self.dim:
            raise ValueError("dimension mismatch")
        if self.kind == TA and not t.is_permutation:
            raise SignatureError("replacements are not in the TA signature")

    def subst(self, x: DenseSet, t: Transformation) -> DenseSet:
        self.check_transformation(t)
        return apply_subst(x, t)

    def diagonal(self, i: int, j: int) -> DenseSet:
        if self.kind != SAD:
            raise SignatureError("diagonal elements need the SAD signature")
        return DenseSet.from_array(self.unit, self.diagonal_array(i, j))

    def diagonal_array(self, i: int, j: int) -> np.ndarray:
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise IndexError(f"diagonal index out of range: d[{i},{j}]")
        return self.unit.digits[:, i] == self.unit.digits[:, j]

    def subst_array(self, arr: np.ndarray, t: Transformation) -> np.ndarray:
        """Batch substitution on a (..., |V|) boolean array."""
        pm = self.unit.point_map(t)
        if (pm >= 0).all():
            return arr[..., pm]
        out = np.zeros_like(arr)
        ok = pm >= 0
        out[..., ok] = arr[..., pm[ok]]
        return out

    def n_elements_log2(self) -> int:
        return self.unit.size

    def elements(self):
        if self.unit.size > 16:
            raise ValueError("refusing to enumerate more than 2^16 elements")
        for bits in range(1 << self.unit.size):
            yield DenseSet(self.unit, bits)

    def random_element(self, rng: np.random.Generator) -> DenseSet:
        return DenseSet.from_array(self.unit, rng.random(self.unit.size) < 0.5)

    def to_json(self):
        return {**self.unit.to_json(), "signature": self.kind}

    @classmethod
    def from_json(cls, data: dict) -> SetAlgebra:
        unit = classify_unit(data["dim"], data["base"], data["unit"])
        return cls(unit, data.get("signature", TA))

    def __repr__(self):
        return f"SetAlgebra({self.unit!r}, {self.kind})"


def full_algebra(dim: int, base: int, kind: str = TA) -> SetAlgebra:
    return SetAlgebra(Unit(dim, base), kind)


def small_algebra(n: int, k: int, kind: str = TA) -> SetAlgebra:
    """A_nk: the full algebra over ^n k."""
    if k > n:
        raise ValueError(f"small algebras need k <= n, got k={k}, n={n}")
    return full_algebra(n, k, kind)


def relativize_hom(x: DenseSet, g: Unit, kind: str = TA) -> DenseSet:
    """h(x) = x ∩ G as an element of ℘(G)."""
    if g.dim != x.unit.dim or g.base != x.unit.base:
        raise ValueError("G must live in the same ^nU as x")
    if kind == TA and not g.permutable:
        raise SignatureError("relativizing unit is not permutable")
    if kind != TA and not g.dipermutable:
        raise SignatureError("relativizing unit is not dipermutable")
    src = x.to_array()
    out = np.zeros(g.size, dtype=bool)
    for k, code in enumerate(g.points):
        pos = x.unit.index(int(code))
        if pos < 0:
            raise ValueError("G is not a subset of the source unit")
        out[k] = src[pos]
    return DenseSet.from_array(g, out)
