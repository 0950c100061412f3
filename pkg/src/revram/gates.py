"""Reversible gate catalog.

Every gate is stored as a permutation table over k-bit patterns. Line A is
the most significant bit of a table index, so for a 3x3 gate the index of
input (A, B, C) is ``4*A + 2*B + C``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .qalgebra import PrimitiveOp, depth_of

__all__ = [
    "GateSpec",
    "CatalogError",
    "builtin_gate",
    "catalog_names",
    "is_bijective",
    "apply_gate",
    "inverse_table",
    "bits_to_index",
    "index_to_bits",
    "parity_gate",
]


class CatalogError(KeyError):
    """Raised for gate names that are not in the catalog."""


def bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | (int(b) & 1)
    return idx


def index_to_bits(idx: int, width: int) -> tuple[int, ...]:
    return tuple((idx >> (width - 1 - i)) & 1 for i in range(width))


@dataclass(frozen=True)
class GateSpec:
    name: str
    width: int
    permutation: tuple[int, ...]
    quantum_cost: int
    decomposition: Optional[tuple[PrimitiveOp, ...]] = None
    mnemonic: str = ""
    reversible_expected: bool = True
    note: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError("gate width must be >= 1")
        if len(self.permutation) != 1 << self.width:
            raise ValueError(
                f"{self.name}: table has {len(self.permutation)} entries, "
                f"expected {1 << self.width}"
            )
        if self.quantum_cost < 0:
            raise ValueError("quantum cost must be nonnegative")

    @property
    def delay(self) -> int:
        """Primitive-level depth; the stored decomposition wins when present."""
        if self.decomposition is not None:
            return depth_of(self.decomposition, self.width)
        return self.quantum_cost

    def __call__(self, bits: Sequence[int]) -> tuple[int, ...]:
        return apply_gate(self, bits)


def is_bijective(spec: GateSpec) -> bool:
    return len(set(spec.permutation)) == len(spec.permutation) and all(
        0 <= v < len(spec.permutation) for v in spec.permutation
    )


def apply_gate(spec: GateSpec, bits: Sequence[int]) -> tuple[int, ...]:
    if len(bits) != spec.width:
        raise ValueError(
            f"{spec.name} expects {spec.width} bits, got {len(bits)}"
        )
    return index_to_bits(spec.permutation[bits_to_index(bits)], spec.width)


def inverse_table(spec: GateSpec) -> tuple[int, ...]:
    if not is_bijective(spec):
        raise ValueError(f"{spec.name} is not reversible; no inverse table")
    inv = [0] * len(spec.permutation)
    for i, o in enumerate(spec.permutation):
        inv[o] = i
    return tuple(inv)


def _table(width: int, fn: Callable[..., tuple[int, ...]]) -> tuple[int, ...]:
    out = []
    for idx in range(1 << width):
        out.append(bits_to_index(fn(*index_to_bits(idx, width))))
    return tuple(out)


def _ops(*items: tuple) -> tuple[PrimitiveOp, ...]:
    return tuple(PrimitiveOp(kind, target, control) for kind, control, target in items)


# Boolean output functions, inputs and outputs as 0/1 ints.
def _fg(a, b):
    return a, a ^ b


def _dfg(a, b, c):
    return a, a ^ b, a ^ c


def _tg(a, b, c):
    return a, b, (a & b) ^ c


def _frg(a, b, c):
    na = 1 - a
    return a, (na & b) ^ (a & c), (na & c) ^ (a & b)


def _pg(a, b, c):
    return a, a ^ b, (a & b) ^ c


def _mfrg1(a, b, c):
    na = 1 - a
    return a, (na & b) ^ c, (na & c) ^ (a & b)


def _mfrg2(a, b, c):
    na = 1 - a
    return na, (na & b) ^ c, (na & c) ^ (a & b)


# As printed: Q = A'B xor A'C. Not injective (A=1 forces Q=0).
def _mfrg1_printed(a, b, c):
    na = 1 - a
    return a, (na & b) ^ (na & c), (na & c) ^ (a & b)


def _mfrg2_printed(a, b, c):
    na = 1 - a
    return na, (na & b) ^ (na & c), (na & c) ^ (a & b)


def _not(a):
    return (1 - a,)


_CATALOG: dict[str, GateSpec] = {}


def _register(spec: GateSpec) -> None:
    _CATALOG[spec.name] = spec


_register(GateSpec("NOT", 1, _table(1, _not), 1, _ops(("NOT", None, 0)), "not"))
_register(GateSpec("FG", 2, _table(2, _fg), 1, _ops(("CNOT", 0, 1)), "fg"))
_register(
    GateSpec(
        "DFG", 3, _table(3, _dfg), 2, _ops(("CNOT", 0, 1), ("CNOT", 0, 2)), "dfg"
    )
)
_register(
    GateSpec(
        "TG",
        3,
        _table(3, _tg),
        5,
        _ops(
            ("CV", 1, 2),
            ("CNOT", 0, 1),
            ("CVDAG", 1, 2),
            ("CNOT", 0, 1),
            ("CV", 0, 2),
        ),
        "t3",
    )
)
_register(GateSpec("FRG", 3, _table(3, _frg), 5, None, "f3"))
_register(
    GateSpec(
        "PG",
        3,
        _table(3, _pg),
        4,
        _ops(("CV", 0, 2), ("CV", 1, 2), ("CNOT", 0, 1), ("CVDAG", 1, 2)),
        "p3",
    )
)
_register(
    GateSpec(
        "MFRG1",
        3,
        _table(3, _mfrg1),
        4,
        None,
        "mf1",
        note="Q repaired to A'B xor C so the map is a bijection",
    )
)
_register(
    GateSpec(
        "MFRG2",
        3,
        _table(3, _mfrg2),
        5,
        None,
        "mf2",
        note="MFRG1 followed by NOT on line A",
    )
)
_register(
    GateSpec(
        "MFRG1_PRINTED",
        3,
        _table(3, _mfrg1_printed),
        4,
        None,
        "mf1p",
        reversible_expected=False,
        note="printed form, Q = A'B xor A'C; not reversible",
    )
)
_register(
    GateSpec(
        "MFRG2_PRINTED",
        3,
        _table(3, _mfrg2_printed),
        5,
        None,
        "mf2p",
        reversible_expected=False,
        note="printed form, Q = A'B xor A'C; not reversible",
    )
)

PAPER_GATES = ("FG", "DFG", "TG", "FRG", "PG", "MFRG1", "MFRG2")

_ALIASES = {"CNOT": "FG", "FEYNMAN": "FG", "TOFFOLI": "TG", "FREDKIN": "FRG", "PERES": "PG"}
_MNEMONICS = {spec.mnemonic: name for name, spec in _CATALOG.items() if spec.mnemonic}
_PARITY_RE = re.compile(r"^(?:MFG|mfg)(\d+)$")

MAX_PARITY_WIDTH = 16


def parity_gate(width: int) -> GateSpec:
    """Multi-input Feynman gate: lines pass through, the last gets their XOR.

    ``quantum_cost`` follows the per-gate constant used for the RAM read
    column (one unit per input line). The in-place XOR itself needs only
    ``width - 1`` CNOTs, so no decomposition is attached.
    """
    if not 2 <= width <= MAX_PARITY_WIDTH:
        raise CatalogError(f"MFG width must be in [2, {MAX_PARITY_WIDTH}], got {width}")
    table = []
    for idx in range(1 << width):
        parity = bin(idx).count("1") & 1
        table.append((idx & ~1) | parity)
    return GateSpec(f"MFG{width}", width, tuple(table), width, None, f"mfg{width}")


def builtin_gate(name: str) -> GateSpec:
    """Look up a catalog gate by name, alias, or text-format mnemonic."""
    key = name.strip()
    if key in _CATALOG:
        return _CATALOG[key]
    if key in _MNEMONICS:
        return _CATALOG[_MNEMONICS[key]]
    upper = key.upper()
    if upper in _CATALOG:
        return _CATALOG[upper]
    if upper in _ALIASES:
        return _CATALOG[_ALIASES[upper]]
    m = _PARITY_RE.match(key) or _PARITY_RE.match(upper)
    if m:
        return parity_gate(int(m.group(1)))
    raise CatalogError(f"unknown gate {name!r}; known: {', '.join(catalog_names())}")


def catalog_names() -> list[str]:
    return list(_CATALOG)
