"""Exact unitary arithmetic over the NOT / CNOT / Controlled-V / Controlled-V+ set.

All values are Gaussian dyadic rationals ``(a + b*i) / 2**e``, so equality of
unitaries is decided with zero tolerance. Basis states are indexed with
line 0 as the most significant bit, matching gate permutation tables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from . import kernels

__all__ = [
    "GaussianDyadic",
    "ExactUnitary",
    "PrimitiveOp",
    "KINDS",
    "primitive_unitary",
    "sequence_unitary",
    "permutation_unitary",
    "verify_decomposition",
    "search_min_decomposition",
    "enumerate_primitives",
    "depth_of",
]

KINDS = ("NOT", "CNOT", "CV", "CVDAG")


@dataclass(frozen=True, order=True)
class GaussianDyadic:
    re: int = 0
    im: int = 0
    exp: int = 0

    def __post_init__(self) -> None:
        if self.exp < 0:
            raise ValueError("exponent must be nonnegative")
        re, im, exp = self.re, self.im, self.exp
        if re == 0 and im == 0:
            exp = 0
        while exp > 0 and re % 2 == 0 and im % 2 == 0:
            re //= 2
            im //= 2
            exp -= 1
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def of(cls, value: "int | GaussianDyadic") -> "GaussianDyadic":
        if isinstance(value, GaussianDyadic):
            return value
        return cls(int(value), 0, 0)

    def __add__(self, other: "GaussianDyadic | int") -> "GaussianDyadic":
        other = GaussianDyadic.of(other)
        e = max(self.exp, other.exp)
        s1 = 1 << (e - self.exp)
        s2 = 1 << (e - other.exp)
        return GaussianDyadic(self.re * s1 + other.re * s2, self.im * s1 + other.im * s2, e)

    __radd__ = __add__

    def __neg__(self) -> "GaussianDyadic":
        return GaussianDyadic(-self.re, -self.im, self.exp)

    def __sub__(self, other: "GaussianDyadic | int") -> "GaussianDyadic":
        return self + (-GaussianDyadic.of(other))

    def __mul__(self, other: "GaussianDyadic | int") -> "GaussianDyadic":
        other = GaussianDyadic.of(other)
        return GaussianDyadic(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.exp + other.exp,
        )

    __rmul__ = __mul__

    def conj(self) -> "GaussianDyadic":
        return GaussianDyadic(self.re, -self.im, self.exp)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(self.re, self.im) / (1 << self.exp)

    def __repr__(self) -> str:
        if self.im == 0:
            body = f"{self.re}"
        else:
            body = f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"
            if self.re == 0:
                body = f"{self.im}i"
        return body if self.exp == 0 else f"({body})/{1 << self.exp}"


_ZERO = GaussianDyadic()
_ONE = GaussianDyadic(1)


@dataclass(frozen=True)
class ExactUnitary:
    entries: tuple[tuple[GaussianDyadic, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, dim: int) -> "ExactUnitary":
        return cls(tuple(tuple(_ONE if i == j else _ZERO for j in range(dim)) for i in range(dim)))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable["GaussianDyadic | int"]]) -> "ExactUnitary":
        return cls(tuple(tuple(GaussianDyadic.of(x) for x in row) for row in rows))

    def __matmul__(self, other: "ExactUnitary") -> "ExactUnitary":
        n = self.dimension
        if other.dimension != n:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.entries))
        rows = []
        for i in range(n):
            row_i = self.entries[i]
            out = []
            for j in range(n):
                acc = _ZERO
                for a, b in zip(row_i, cols[j]):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out.append(acc)
            rows.append(tuple(out))
        return ExactUnitary(tuple(rows))

    def dagger(self) -> "ExactUnitary":
        n = self.dimension
        return ExactUnitary(
            tuple(tuple(self.entries[j][i].conj() for j in range(n)) for i in range(n))
        )

    def is_unitary(self) -> bool:
        return self @ self.dagger() == ExactUnitary.identity(self.dimension)

    def to_complex(self) -> np.ndarray:
        return np.array([[complex(x) for x in row] for row in self.entries])


@dataclass(frozen=True)
class PrimitiveOp:
    kind: str
    target: int
    control: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown primitive kind {self.kind!r}")
        if self.kind == "NOT":
            if self.control is not None:
                raise ValueError("NOT takes no control")
        else:
            if self.control is None:
                raise ValueError(f"{self.kind} needs a control line")
            if self.control == self.target:
                raise ValueError("control and target must differ")

    @property
    def lines(self) -> tuple[int, ...]:
        return (self.target,) if self.control is None else (self.control, self.target)

    def sort_key(self) -> tuple[int, int, int]:
        return (KINDS.index(self.kind), -1 if self.control is None else self.control, self.target)

    def check_width(self, width: int) -> None:
        for line in self.lines:
            if not 0 <= line < width:
                raise ValueError(f"{self} uses line {line} outside width {width}")

    def __str__(self) -> str:
        if self.control is None:
            return f"{self.kind}({self.target})"
        return f"{self.kind}({self.control}->{self.target})"


_H = GaussianDyadic(1, 1, 1)   # (1+i)/2
_HC = GaussianDyadic(1, -1, 1)  # (1-i)/2
_TWO_BY_TWO = {
    "NOT": ((_ZERO, _ONE), (_ONE, _ZERO)),
    "CNOT": ((_ZERO, _ONE), (_ONE, _ZERO)),
    "CV": ((_H, _HC), (_HC, _H)),
    "CVDAG": ((_HC, _H), (_H, _HC)),
}


def primitive_unitary(op: PrimitiveOp, width: int) -> ExactUnitary:
    """Embed one primitive into the 2**width space (identity elsewhere)."""
    op.check_width(width)
    dim = 1 << width
    tbit = width - 1 - op.target
    cbit = None if op.control is None else width - 1 - op.control
    small = _TWO_BY_TWO[op.kind]
    rows = [[_ZERO] * dim for _ in range(dim)]
    for col in range(dim):
        if cbit is not None and not (col >> cbit) & 1:
            rows[col][col] = _ONE
            continue
        t_in = (col >> tbit) & 1
        base = col & ~(1 << tbit)
        for t_out in (0, 1):
            rows[base | (t_out << tbit)][col] = small[t_out][t_in]
    return ExactUnitary(tuple(tuple(r) for r in rows))


def sequence_unitary(ops: Sequence[PrimitiveOp], width: int) -> ExactUnitary:
    """Product of primitives; the first op acts first (rightmost factor)."""
    u = ExactUnitary.identity(1 << width)
    for op in ops:
        u = primitive_unitary(op, width) @ u
    return u


def permutation_unitary(table: Sequence[int]) -> ExactUnitary:
    dim = len(table)
    rows = [[_ZERO] * dim for _ in range(dim)]
    for i, o in enumerate(table):
        rows[o][i] = _ONE
    return ExactUnitary(tuple(tuple(r) for r in rows))


def depth_of(ops: Sequence[PrimitiveOp], width: int) -> int:
    """Logical depth with every primitive taking one time unit on its lines."""
    ready = [0] * width
    for op in ops:
        start = max(ready[line] for line in op.lines)
        for line in op.lines:
            ready[line] = start + 1
    return max(ready, default=0)


def verify_decomposition(spec) -> str:
    """Return ``"verified"``, ``"mismatch"`` or ``"absent"`` for a gate spec."""
    if spec.decomposition is None:
        return "absent"
    try:
        u = sequence_unitary(spec.decomposition, spec.width)
    except ValueError:
        return "mismatch"
    if u != permutation_unitary(spec.permutation):
        return "mismatch"
    if len(spec.decomposition) != spec.quantum_cost:
        return "mismatch"
    return "verified"


def enumerate_primitives(width: int) -> list[PrimitiveOp]:
    ops = [PrimitiveOp("NOT", t) for t in range(width)]
    for kind in KINDS[1:]:
        for c, t in itertools.permutations(range(width), 2):
            ops.append(PrimitiveOp(kind, t, c))
    return sorted(ops, key=PrimitiveOp.sort_key)


# --- meet-in-the-middle search on fixed-point Gaussian integer matrices ---

MAX_SEARCH_WIDTH = 3
MAX_SEARCH_LEN = 6


def _scaled(u: ExactUnitary, shift: int) -> tuple[np.ndarray, np.ndarray]:
    n = u.dimension
    re = np.zeros((n, n), dtype=np.int64)
    im = np.zeros((n, n), dtype=np.int64)
    for i, row in enumerate(u.entries):
        for j, x in enumerate(row):
            if x.exp > shift:
                raise ValueError("entry finer than the fixed-point scale")
            s = 1 << (shift - x.exp)
            re[i, j] = x.re * s
            im[i, j] = x.im * s
    return re, im


def _key(m: tuple[np.ndarray, np.ndarray]) -> bytes:
    return m[0].tobytes() + m[1].tobytes()


def _layers(
    prims: list[tuple[np.ndarray, np.ndarray]],
    ident: tuple[np.ndarray, np.ndarray],
    depth: int,
    shift: int,
) -> Iterator[tuple[int, tuple[int, ...], tuple[np.ndarray, np.ndarray]]]:
    """Depth-first, lexicographic walk over sequences up to ``depth``.

    A prefix whose matrix already appeared at the same length is pruned:
    every extension of it is beaten by the same extension of the earlier,
    lexicographically smaller prefix.
    """
    seen: list[set[bytes]] = [set() for _ in range(depth + 1)]
    seen[0].add(_key(ident))
    yield 0, (), ident

    def walk(prefix: tuple[int, ...], mat):
        k = len(prefix) + 1
        for idx, (pr, pi) in enumerate(prims):
            prod = kernels.matmul_shift(pr, pi, mat[0], mat[1], shift)
            key = _key(prod)
            if key in seen[k]:
                continue
            seen[k].add(key)
            seq = prefix + (idx,)
            yield k, seq, prod
            if k < depth:
                yield from walk(seq, prod)

    if depth > 0:
        yield from walk((), ident)


def search_min_decomposition(target, max_len: int) -> Optional[tuple[PrimitiveOp, ...]]:
    """Shortest primitive sequence whose exact unitary equals ``target``'s table.

    Ties between equally short sequences go to the lexicographically first
    one under (kind, control, target) ordering. Returns None if nothing of
    length <= ``max_len`` exists.
    """
    width = target.width
    if not 1 <= width <= MAX_SEARCH_WIDTH:
        raise ValueError(f"search supports width 1..{MAX_SEARCH_WIDTH}, got {width}")
    if not 0 <= max_len <= MAX_SEARCH_LEN:
        raise ValueError(f"max_len must be in [0, {MAX_SEARCH_LEN}], got {max_len}")
    shift = max(max_len, 1)
    ops = enumerate_primitives(width)
    prims = [_scaled(primitive_unitary(op, width), shift) for op in ops]
    dim = 1 << width
    ident = _scaled(ExactUnitary.identity(dim), shift)
    t_re, t_im = _scaled(permutation_unitary(target.permutation), shift)

    left_len = (max_len + 1) // 2
    right_len = max_len // 2
    left: list[list[tuple[tuple[int, ...], tuple[np.ndarray, np.ndarray]]]] = [
        [] for _ in range(left_len + 1)
    ]
    right: list[dict[bytes, tuple[int, ...]]] = [{} for _ in range(right_len + 1)]
    for k, seq, mat in _layers(prims, ident, left_len, shift):
        left[k].append((seq, mat))
        if k <= right_len:
            right[k].setdefault(_key(mat), seq)
    for seqs in left:
        seqs.sort(key=lambda item: item[0])

    for total in range(max_len + 1):
        a = (total + 1) // 2
        b = total - a
        table = right[b]
        for seq, (lr, li) in left[a]:
            # need R with R @ L == T, i.e. R = T @ L^dagger
            need = kernels.matmul_shift(t_re, t_im, lr.T.copy(), (-li).T.copy(), shift)
            hit = table.get(_key(need))
            if hit is not None:
                return tuple(ops[i] for i in seq + hit)
    return None
