"""Two-phase clocked simulation of sequential netlists and the RAM oracle.

One clock cycle evaluates the combinational netlist with CLK=1 and then with
CLK=0. After each phase every state-next output is latched into the
state-feedback line carrying the same register label. Data inputs are held
for the whole cycle; every register starts at 0.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .netlist import Netlist, NetlistError
from .synth import RamConfig, build_rram

__all__ = [
    "ClockedMachine",
    "BatchMachine",
    "RamOracle",
    "RamMachine",
    "Write",
    "Read",
    "parse_script",
    "run_script",
    "differential_test",
    "exhaustive_equivalence",
    "DiffReport",
]


class _Layout:
    """Index bookkeeping shared by the single and batched machines."""

    def __init__(self, netlist: Netlist, clock: str):
        self.netlist = netlist
        self.clock = clock
        self.port_lines: dict[str, list[int]] = {}
        for ln in netlist.lines:
            if ln.role == "primary_input":
                self.port_lines.setdefault(ln.label, []).append(ln.index)
        if clock not in self.port_lines:
            raise NetlistError(f"netlist {netlist.name} has no clock input {clock!r}")
        self.ports = [p for p in self.port_lines if p != clock]
        self.registers = sorted(
            ln.label for ln in netlist.lines if ln.role == "state_feedback"
        )
        self.reg_pos = {r: i for i, r in enumerate(self.registers)}
        self.fb_line = {ln.label: ln.index for ln in netlist.lines if ln.role == "state_feedback"}
        self.next_line = {
            o.label: i for i, o in enumerate(netlist.outputs) if o.role == "state_next"
        }
        self.primary = [(o.label, i) for i, o in enumerate(netlist.outputs) if o.role == "primary_output"]
        self.template = [ln.constant or 0 for ln in netlist.lines]

    def check_inputs(self, inputs: Mapping[str, int]) -> None:
        missing = [p for p in self.ports if p not in inputs]
        extra = [p for p in inputs if p not in self.port_lines or p == self.clock]
        if missing or extra:
            msg = []
            if missing:
                msg.append(f"missing {', '.join(missing)}")
            if extra:
                msg.append(f"unexpected {', '.join(extra)}")
            raise NetlistError("cycle inputs: " + "; ".join(msg))


class ClockedMachine:
    """A single sequential netlist with its register contents."""

    def __init__(self, netlist: Netlist, clock: str = "clk", backend=None):
        self.layout = _Layout(netlist, clock)
        self.netlist = netlist
        self.backend = backend
        self.state: dict[str, int] = {r: 0 for r in self.layout.registers}
        self.phase = "clk_low"
        self.last_outputs: dict[str, int] = {}

    def register(self, name: str) -> int:
        return self.state[name]

    def half_step(self, inputs: Mapping[str, int], clk: int) -> dict[str, int]:
        lay = self.layout
        lay.check_inputs(inputs)
        vec = list(lay.template)
        for port, value in inputs.items():
            for idx in lay.port_lines[port]:
                vec[idx] = int(value) & 1
        for idx in lay.port_lines[lay.clock]:
            vec[idx] = clk
        for reg, idx in lay.fb_line.items():
            vec[idx] = self.state[reg]
        self.netlist.program.run_single(vec, self.backend)
        for reg, idx in lay.next_line.items():
            self.state[reg] = vec[idx]
        self.phase = "clk_high" if clk else "clk_low"
        self.last_outputs = {label: vec[i] for label, i in lay.primary}
        return self.last_outputs

    def step_cycle(self, inputs: Mapping[str, int]) -> dict[str, int]:
        """Full cycle: CLK high (master transparent) then CLK low (slave)."""
        self.half_step(inputs, 1)
        return self.half_step(inputs, 0)


class BatchMachine:
    """Many copies of one sequential netlist stepped together."""

    def __init__(self, netlist: Netlist, batch: int, clock: str = "clk", backend=None):
        self.layout = _Layout(netlist, clock)
        self.netlist = netlist
        self.backend = backend
        self.regs = np.zeros((batch, len(self.layout.registers)), dtype=np.uint8)

    @property
    def batch(self) -> int:
        return self.regs.shape[0]

    def take(self, rows: np.ndarray) -> None:
        self.regs = self.regs[rows]

    def half_step(self, inputs: Mapping[str, np.ndarray], clk: int) -> np.ndarray:
        lay = self.layout
        states = np.tile(np.asarray(lay.template, dtype=np.uint8), (self.batch, 1))
        for port, values in inputs.items():
            for idx in lay.port_lines[port]:
                states[:, idx] = values
        for idx in lay.port_lines[lay.clock]:
            states[:, idx] = clk
        for reg, idx in lay.fb_line.items():
            states[:, idx] = self.regs[:, lay.reg_pos[reg]]
        self.netlist.program.run_batch(states, self.backend)
        for reg, idx in lay.next_line.items():
            self.regs[:, lay.reg_pos[reg]] = states[:, idx]
        return states

    def step_cycle(self, inputs: Mapping[str, np.ndarray]) -> np.ndarray:
        self.half_step(inputs, 1)
        return self.half_step(inputs, 0)


# --- RAM scripts ----------------------------------------------------------

@dataclass(frozen=True)
class Write:
    addr: int
    word: tuple[int, ...]

    def __str__(self) -> str:
        return f"w {self.addr} {''.join(map(str, self.word))}"


@dataclass(frozen=True)
class Read:
    addr: int

    def __str__(self) -> str:
        return f"r {self.addr}"


Op = Union[Write, Read]


def _word(bits: Union[str, Sequence[int]], m: int) -> tuple[int, ...]:
    if isinstance(bits, str):
        if any(ch not in "01" for ch in bits):
            raise ValueError(f"word {bits!r} must be a bit string")
        word = tuple(int(ch) for ch in bits)
    else:
        word = tuple(int(b) for b in bits)
    if len(word) != m or any(b not in (0, 1) for b in word):
        raise ValueError(f"word must have {m} bits, got {bits!r}")
    return word


def validate_script(config: RamConfig, script: Iterable[Op]) -> list[Op]:
    ops = []
    for op in script:
        if not 0 <= op.addr < config.rows:
            raise ValueError(f"address {op.addr} out of range for n={config.n}")
        if isinstance(op, Write):
            _word(op.word, config.m)
        elif not isinstance(op, Read):
            raise ValueError(f"unknown script entry {op!r}")
        ops.append(op)
    return ops


def parse_script(text: str, m: Optional[int] = None) -> list[Op]:
    """Parse ``w <addr> <bits>`` / ``r <addr>`` lines; ``#`` starts a comment."""
    ops: list[Op] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "w" and len(parts) == 3:
                addr = int(parts[1])
                word = _word(parts[2], m if m is not None else len(parts[2]))
                ops.append(Write(addr, word))
            elif parts[0] == "r" and len(parts) == 2:
                ops.append(Read(int(parts[1])))
            else:
                raise ValueError(f"expected 'w <addr> <bits>' or 'r <addr>', got {line!r}")
        except ValueError as exc:
            raise ValueError(f"script line {lineno}: {exc}") from None
    return ops


class RamOracle:
    """Ideal 2^n x m word memory, zero initialised."""

    def __init__(self, n: int, m: int):
        self.m = m
        self.words = [tuple([0] * m) for _ in range(1 << n)]

    def write(self, addr: int, word: Sequence[int]) -> None:
        self.words[addr] = tuple(word)

    def read(self, addr: int) -> tuple[int, ...]:
        return self.words[addr]


class RamMachine:
    """Clocked RAM netlist driven one cycle per operation."""

    def __init__(self, config: RamConfig, backend=None, netlist: Optional[Netlist] = None):
        self.config = config
        self.netlist = netlist if netlist is not None else build_rram(config)
        self.machine = ClockedMachine(self.netlist, backend=backend)

    def _inputs(self, addr: int, write: int, word: Sequence[int]) -> dict[str, int]:
        cfg = self.config
        inputs = {f"a{k}": (addr >> k) & 1 for k in range(cfg.n)}
        inputs["w"] = write
        for c in range(cfg.m):
            inputs[f"d{c}"] = word[c]
        return inputs

    def write(self, addr: int, word: Sequence[int]) -> tuple[int, ...]:
        out = self.machine.step_cycle(self._inputs(addr, 1, word))
        return tuple(out[f"q{c}"] for c in range(self.config.m))

    def read(self, addr: int) -> tuple[int, ...]:
        out = self.machine.step_cycle(self._inputs(addr, 0, [0] * self.config.m))
        return tuple(out[f"q{c}"] for c in range(self.config.m))

    def apply(self, op: Op) -> Optional[tuple[int, ...]]:
        if isinstance(op, Write):
            self.write(op.addr, op.word)
            return None
        return self.read(op.addr)

    def stored(self) -> list[tuple[int, ...]]:
        """Slave register contents, row by row."""
        st = self.machine.state
        return [
            tuple(st[f"s{r}_{c}"] for c in range(self.config.m))
            for r in range(self.config.rows)
        ]


def run_script(config: RamConfig, script: Iterable[Op], backend=None) -> list[tuple[int, ...]]:
    """Bus value after every read, in script order."""
    ops = validate_script(config, script)
    ram = RamMachine(config, backend)
    reads = []
    for op in ops:
        result = ram.apply(op)
        if result is not None:
            reads.append(result)
    return reads


@dataclass
class DiffReport:
    config: RamConfig
    scripts: int
    ops: int
    read_divergences: int = 0
    state_divergences: int = 0
    refresh_violations: int = 0
    first_divergence: Optional[str] = None
    traces: list[list[tuple[int, ...]]] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not (self.read_divergences or self.state_divergences or self.refresh_violations)


def random_script(rng: random.Random, config: RamConfig, length: int) -> list[Op]:
    ops: list[Op] = []
    for _ in range(length):
        addr = rng.randrange(config.rows)
        if rng.random() < 0.5:
            ops.append(Write(addr, tuple(rng.randrange(2) for _ in range(config.m))))
        else:
            ops.append(Read(addr))
    return ops


def differential_test(
    config: RamConfig,
    script_count: int,
    ops_per_script: int,
    seed: int,
    backend=None,
    keep_traces: bool = False,
) -> DiffReport:
    """Seeded random scripts against the netlist and the ideal RAM.

    After every cycle the full register file is compared with the oracle, so
    a write that touches an unselected row or a read that disturbs stored
    bits is caught, not just a wrong bus value.
    """
    rng = random.Random(seed)
    netlist = build_rram(config)
    report = DiffReport(config, script_count, ops_per_script)
    for s in range(script_count):
        script = random_script(rng, config, ops_per_script)
        ram = RamMachine(config, backend, netlist)
        oracle = RamOracle(config.n, config.m)
        trace = []
        for k, op in enumerate(script):
            before = ram.stored()
            got = ram.apply(op)
            if isinstance(op, Write):
                oracle.write(op.addr, op.word)
            else:
                want = oracle.read(op.addr)
                trace.append(got)
                if got != want:
                    report.read_divergences += 1
                    if report.first_divergence is None:
                        report.first_divergence = (
                            f"script {s} op {k} ({op}): bus {got} != oracle {want}"
                        )
                if ram.stored() != before:
                    report.refresh_violations += 1
            if ram.stored() != oracle.words:
                report.state_divergences += 1
                if report.first_divergence is None:
                    report.first_divergence = f"script {s} op {k} ({op}): stored state differs"
        if keep_traces:
            report.traces.append(trace)
    return report


def _all_ops(config: RamConfig) -> list[Op]:
    ops: list[Op] = []
    for addr in range(config.rows):
        for bits in itertools.product((0, 1), repeat=config.m):
            ops.append(Write(addr, bits))
    ops.extend(Read(addr) for addr in range(config.rows))
    return ops


def exhaustive_equivalence(config: RamConfig, max_len: int, backend=None) -> DiffReport:
    """Every script of length <= max_len, run breadth-first in one batch.

    Level k holds one machine per script of length k; the next level repeats
    each machine once per possible operation.
    """
    alphabet = _all_ops(config)
    netlist = build_rram(config)
    bm = BatchMachine(netlist, 1, backend=backend)
    lay = bm.layout
    rows, m = config.rows, config.m
    oracle = np.zeros((1, rows, m), dtype=np.uint8)
    stored_cols = np.array(
        [[lay.reg_pos[f"s{r}_{c}"] for c in range(m)] for r in range(rows)]
    )
    q_idx = [netlist.output_index(f"q{c}") for c in range(m)]
    report = DiffReport(config, 0, max_len)
    report.scripts = 1
    for level in range(1, max_len + 1):
        nops = len(alphabet)
        parent = np.repeat(np.arange(bm.batch), nops)
        which = np.tile(np.arange(nops), bm.batch)
        bm.take(parent)
        oracle = oracle[parent].copy()
        addr = np.array([op.addr for op in alphabet], dtype=np.int64)[which]
        is_write = np.array([isinstance(op, Write) for op in alphabet], dtype=np.uint8)[which]
        words = np.array(
            [op.word if isinstance(op, Write) else (0,) * m for op in alphabet], dtype=np.uint8
        )[which]
        inputs = {f"a{k}": ((addr >> k) & 1).astype(np.uint8) for k in range(config.n)}
        inputs["w"] = is_write
        for c in range(m):
            inputs[f"d{c}"] = words[:, c]
        before = bm.regs[:, stored_cols].copy()
        final = bm.step_cycle(inputs)
        after = bm.regs[:, stored_cols]
        reads = is_write == 0
        bus = final[:, q_idx]
        want = oracle[np.arange(bm.batch), addr]
        bad_read = reads & (bus != want).any(axis=1)
        wrows = np.nonzero(is_write)[0]
        oracle[wrows, addr[wrows]] = words[wrows]
        bad_state = (after != oracle).any(axis=(1, 2))
        refresh = reads & (after != before).any(axis=(1, 2))
        report.read_divergences += int(bad_read.sum())
        report.state_divergences += int(bad_state.sum())
        report.refresh_violations += int(refresh.sum())
        report.scripts += bm.batch
        if report.first_divergence is None and (bad_read.any() or bad_state.any()):
            report.first_divergence = f"first divergence at script length {level}"
    return report
