"""Circuit IR for reversible netlists, with metrics and exhaustive checks.

A netlist is a fixed set of lines. Each line starts as a primary input, a
constant, or a state-feedback value, is rewritten in place by the gates bound
to it, and ends classified as a primary output, a garbage output, or a
state-next value latched back into the feedback line carrying the same label.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Optional, Sequence

import numpy as np

from . import kernels
from .gates import GateSpec, builtin_gate

__all__ = [
    "Line",
    "GateInstance",
    "Output",
    "Netlist",
    "NetlistBuilder",
    "NetlistError",
    "Evaluation",
    "MetricsReport",
    "ReversibilityVerdict",
    "evaluate",
    "quantum_cost",
    "delay",
    "garbage_count",
    "metrics",
    "check_reversibility",
    "EXHAUSTIVE_BOUND",
]

InputRole = Literal["primary_input", "constant_zero", "constant_one", "state_feedback"]
OutputRole = Literal["primary_output", "garbage", "state_next"]

INPUT_ROLES = ("primary_input", "constant_zero", "constant_one", "state_feedback")
OUTPUT_ROLES = ("primary_output", "garbage", "state_next")
FREE_ROLES = ("primary_input", "state_feedback")

EXHAUSTIVE_BOUND = 22


class NetlistError(ValueError):
    pass


@dataclass(frozen=True)
class Line:
    index: int
    name: str
    role: InputRole
    label: str = ""

    @property
    def constant(self) -> Optional[int]:
        if self.role == "constant_zero":
            return 0
        if self.role == "constant_one":
            return 1
        return None

    @property
    def is_free(self) -> bool:
        return self.role in FREE_ROLES


@dataclass(frozen=True)
class GateInstance:
    gate: GateSpec
    bindings: tuple[int, ...]


@dataclass(frozen=True)
class Output:
    role: OutputRole
    label: str


@dataclass(frozen=True)
class Netlist:
    lines: tuple[Line, ...]
    gates: tuple[GateInstance, ...]
    outputs: tuple[Output, ...]
    name: str = "circuit"

    def __post_init__(self) -> None:
        names = [ln.name for ln in self.lines]
        if len(set(names)) != len(names):
            raise NetlistError("line names must be unique")
        for i, ln in enumerate(self.lines):
            if ln.index != i:
                raise NetlistError(f"line {ln.name} has index {ln.index}, expected {i}")
            if ln.role not in INPUT_ROLES:
                raise NetlistError(f"line {ln.name}: bad role {ln.role!r}")
        if len(self.outputs) != len(self.lines):
            raise NetlistError("every line needs exactly one output classification")
        for out in self.outputs:
            if out.role not in OUTPUT_ROLES:
                raise NetlistError(f"bad output role {out.role!r}")
        labels = [o.label for o in self.outputs]
        if len(set(labels)) != len(labels):
            raise NetlistError("output labels must be unique")
        for g in self.gates:
            if len(g.bindings) != g.gate.width:
                raise NetlistError(
                    f"{g.gate.name} needs {g.gate.width} lines, got {len(g.bindings)}"
                )
            if len(set(g.bindings)) != len(g.bindings):
                raise NetlistError(f"{g.gate.name}: duplicate line binding")
            for b in g.bindings:
                if not 0 <= b < len(self.lines):
                    raise NetlistError(f"{g.gate.name}: line index {b} out of range")
        fb = sorted(ln.label for ln in self.lines if ln.role == "state_feedback")
        nxt = sorted(o.label for o in self.outputs if o.role == "state_next")
        if fb != nxt:
            raise NetlistError(
                "state_feedback labels must pair one-to-one with state_next labels"
            )

    def line(self, name: str) -> Line:
        for ln in self.lines:
            if ln.name == name:
                return ln
        raise KeyError(name)

    def lines_with_role(self, role: str) -> list[Line]:
        return [ln for ln in self.lines if ln.role == role]

    @property
    def free_lines(self) -> list[Line]:
        return [ln for ln in self.lines if ln.is_free]

    def output_index(self, label: str) -> int:
        for i, o in enumerate(self.outputs):
            if o.label == label:
                return i
        raise KeyError(label)

    def outputs_with_role(self, role: str) -> list[tuple[int, Output]]:
        return [(i, o) for i, o in enumerate(self.outputs) if o.role == role]

    @functools.cached_property
    def program(self) -> "_Program":
        return _Program.compile(self)


class _Program:
    """Flat arrays describing the gate sequence, in the layout the kernels use."""

    def __init__(self, widths, bind_off, binds, table_off, tables):
        self.widths = widths
        self.bind_off = bind_off
        self.binds = binds
        self.table_off = table_off
        self.tables = tables

    @classmethod
    def compile(cls, netlist: Netlist) -> "_Program":
        widths, bind_off, binds, table_off, tables = [], [], [], [], []
        offsets: dict[str, int] = {}
        for g in netlist.gates:
            widths.append(g.gate.width)
            bind_off.append(len(binds))
            binds.extend(g.bindings)
            key = g.gate.name
            if key not in offsets:
                offsets[key] = len(tables)
                tables.extend(g.gate.permutation)
            table_off.append(offsets[key])
        return cls(
            np.asarray(widths, dtype=np.int32),
            np.asarray(bind_off, dtype=np.int32),
            np.asarray(binds, dtype=np.int32),
            np.asarray(table_off, dtype=np.int64),
            np.asarray(tables, dtype=np.int32),
        )

    @property
    def args(self):
        return self.widths, self.bind_off, self.binds, self.table_off, self.tables

    def run_batch(self, states: np.ndarray, backend=None) -> np.ndarray:
        impl = backend or kernels
        impl.run_program(states, *self.args)
        return states

    def run_single(self, state: list[int], backend=None) -> list[int]:
        impl = backend or kernels
        impl.run_program_single(state, *self.args)
        return state


class NetlistBuilder:
    """Incremental construction by line name; generators use this."""

    def __init__(self, name: str = "circuit"):
        self.name = name
        self._lines: list[Line] = []
        self._by_name: dict[str, int] = {}
        self._gates: list[GateInstance] = []
        self._outputs: dict[int, Output] = {}

    def _add(self, name: str, role: str, label: str) -> str:
        if name in self._by_name:
            raise NetlistError(f"duplicate line name {name!r}")
        self._by_name[name] = len(self._lines)
        self._lines.append(Line(len(self._lines), name, role, label))  # type: ignore[arg-type]
        return name

    def input(self, name: str, label: Optional[str] = None) -> str:
        return self._add(name, "primary_input", label or name)

    def const(self, name: str, value: int) -> str:
        role = "constant_one" if value else "constant_zero"
        return self._add(name, role, str(int(bool(value))))

    def state(self, name: str, register: str) -> str:
        return self._add(name, "state_feedback", register)

    def gate(self, gate: "GateSpec | str", *names: str) -> None:
        spec = builtin_gate(gate) if isinstance(gate, str) else gate
        self._gates.append(GateInstance(spec, tuple(self._by_name[n] for n in names)))

    def output(self, name: str, role: str, label: Optional[str] = None) -> None:
        idx = self._by_name[name]
        if idx in self._outputs:
            raise NetlistError(f"line {name!r} already classified")
        self._outputs[idx] = Output(role, label or name)  # type: ignore[arg-type]

    def primary(self, name: str, label: Optional[str] = None) -> None:
        self.output(name, "primary_output", label)

    def garbage(self, name: str, label: Optional[str] = None) -> None:
        self.output(name, "garbage", label or f"g_{name}")

    def next_state(self, name: str, register: str) -> None:
        self.output(name, "state_next", register)

    def build(self) -> Netlist:
        missing = [ln.name for ln in self._lines if ln.index not in self._outputs]
        if missing:
            raise NetlistError(f"unclassified output lines: {', '.join(missing)}")
        return Netlist(
            tuple(self._lines),
            tuple(self._gates),
            tuple(self._outputs[i] for i in range(len(self._lines))),
            self.name,
        )


@dataclass(frozen=True)
class Evaluation:
    terminal: tuple[int, ...]
    primary: dict[str, int]
    garbage: dict[str, int]
    state_next: dict[str, int]


def _initial_vector(netlist: Netlist, inputs: Mapping[str, int]) -> list[int]:
    free = {ln.name for ln in netlist.free_lines}
    given = set(inputs)
    if given != free:
        missing = sorted(free - given)
        extra = sorted(given - free)
        parts = []
        if missing:
            parts.append(f"missing {', '.join(missing)}")
        if extra:
            parts.append(f"unexpected {', '.join(extra)}")
        raise NetlistError("input assignment: " + "; ".join(parts))
    vec = []
    for ln in netlist.lines:
        c = ln.constant
        vec.append(c if c is not None else int(inputs[ln.name]) & 1)
    return vec


def evaluate(netlist: Netlist, inputs: Mapping[str, int]) -> Evaluation:
    """Run the gates once; ``inputs`` is keyed by free line name."""
    vec = netlist.program.run_single(_initial_vector(netlist, inputs))
    parts: dict[str, dict[str, int]] = {r: {} for r in OUTPUT_ROLES}
    for value, out in zip(vec, netlist.outputs):
        parts[out.role][out.label] = value
    return Evaluation(tuple(vec), parts["primary_output"], parts["garbage"], parts["state_next"])


@dataclass(frozen=True)
class MetricsReport:
    gate_count: int
    quantum_cost: int
    delay: int
    garbage_count: int
    line_count: int
    constant_inputs: int

    def as_dict(self) -> dict[str, int]:
        return {
            "gate_count": self.gate_count,
            "quantum_cost": self.quantum_cost,
            "delay": self.delay,
            "garbage": self.garbage_count,
            "lines": self.line_count,
            "constants": self.constant_inputs,
        }


def quantum_cost(netlist: Netlist) -> int:
    return sum(g.gate.quantum_cost for g in netlist.gates)


def delay(netlist: Netlist, model: str = "depth") -> int:
    """Longest weighted path with line occupancy.

    A gate starts once all of its lines are free and finishes ``gate.delay``
    units later (``model="unit"`` weighs every gate as 1 instead).
    """
    if model not in ("depth", "unit"):
        raise ValueError(f"unknown delay model {model!r}")
    ready = [0] * len(netlist.lines)
    for g in netlist.gates:
        start = max(ready[b] for b in g.bindings)
        finish = start + (g.gate.delay if model == "depth" else 1)
        for b in g.bindings:
            ready[b] = finish
    return max(ready, default=0)


def garbage_count(netlist: Netlist) -> int:
    return sum(1 for o in netlist.outputs if o.role == "garbage")


def metrics(netlist: Netlist, delay_model: str = "depth") -> MetricsReport:
    return MetricsReport(
        gate_count=len(netlist.gates),
        quantum_cost=quantum_cost(netlist),
        delay=delay(netlist, delay_model),
        garbage_count=garbage_count(netlist),
        line_count=len(netlist.lines),
        constant_inputs=sum(1 for ln in netlist.lines if ln.constant is not None),
    )


@dataclass(frozen=True)
class ReversibilityVerdict:
    reversible: bool
    free_lines: int
    assignments: int
    collision: Optional[tuple[int, int]] = field(default=None)

    def __bool__(self) -> bool:
        return self.reversible


def _assignment_block(netlist: Netlist, start: int, stop: int) -> np.ndarray:
    free_idx = [ln.index for ln in netlist.free_lines]
    f = len(free_idx)
    count = stop - start
    states = np.zeros((count, len(netlist.lines)), dtype=np.uint8)
    for ln in netlist.lines:
        if ln.constant:
            states[:, ln.index] = 1
    counter = np.arange(start, stop, dtype=np.int64)
    for k, idx in enumerate(free_idx):
        # first free line is the most significant bit of the assignment number
        states[:, idx] = (counter >> (f - 1 - k)) & 1
    return states


def check_reversibility(
    netlist: Netlist, bound: int = EXHAUSTIVE_BOUND, chunk: int = 1 << 16, backend=None
) -> ReversibilityVerdict:
    """Exhaustively confirm distinct terminal vectors over all free inputs."""
    f = len(netlist.free_lines)
    if f > bound:
        raise NetlistError(
            f"{f} free lines exceed the exhaustive bound of {bound}; refusing to sample"
        )
    total = 1 << f
    keys = []
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        states = _assignment_block(netlist, start, stop)
        netlist.program.run_batch(states, backend)
        packed = np.packbits(states, axis=1)
        keys.append(packed)
    allkeys = np.concatenate(keys) if keys else np.zeros((1, 1), dtype=np.uint8)
    flat = np.ascontiguousarray(allkeys).view(
        np.dtype((np.void, allkeys.dtype.itemsize * allkeys.shape[1]))
    ).ravel()
    order = np.argsort(flat, kind="stable")
    dup = np.nonzero(flat[order][1:] == flat[order][:-1])[0]
    if dup.size:
        a, b = sorted((int(order[dup[0]]), int(order[dup[0] + 1])))
        return ReversibilityVerdict(False, f, total, (a, b))
    return ReversibilityVerdict(True, f, total)


def all_assignments(netlist: Netlist, backend=None) -> tuple[np.ndarray, np.ndarray]:
    """Input and terminal arrays for every free-line assignment (small circuits)."""
    f = len(netlist.free_lines)
    if f > EXHAUSTIVE_BOUND:
        raise NetlistError(f"{f} free lines exceed the exhaustive bound")
    states = _assignment_block(netlist, 0, 1 << f)
    before = states.copy()
    netlist.program.run_batch(states, backend)
    return before, states


def netlist_from_gates(
    width: int, gates: Iterable[tuple["GateSpec | str", Sequence[int]]], name: str = "circuit"
) -> Netlist:
    """Bare combinational netlist: all lines are primary inputs and outputs."""
    lines = tuple(Line(i, f"x{i}", "primary_input", f"x{i}") for i in range(width))
    inst = []
    for gate, binds in gates:
        spec = builtin_gate(gate) if isinstance(gate, str) else gate
        inst.append(GateInstance(spec, tuple(binds)))
    outs = tuple(Output("primary_output", f"y{i}") for i in range(width))
    return Netlist(lines, tuple(inst), outs, name)
