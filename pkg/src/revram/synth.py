"""Generators for the decoder, flip-flops and RAM array, plus closed-form counts.

Naming conventions shared with the simulator:

* address inputs ``a0..a{n-1}`` (``a0`` least significant), decoder select
  inputs ``s0..s{n-1}`` when built standalone;
* RAM ports ``w`` (write), ``clk``, data ``d0..d{m-1}``; read bus outputs
  ``q0..q{m-1}``;
* flip-flop registers: ``m{r}_{c}`` master, ``s{r}_{c}`` slave, and
  ``x{r}_{c}`` the slave copy fed back to the write multiplexer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .netlist import Netlist, NetlistBuilder

__all__ = [
    "RamConfig",
    "build_decoder",
    "build_dff",
    "build_msdff_we",
    "build_rram",
    "closed_form",
    "CLOSED_FORMS",
    "MAX_DECODER_BITS",
]

MAX_DECODER_BITS = 4
MAX_RAM_ADDRESS_BITS = 4
MAX_RAM_WORD = 8

Variant = Literal["paper_faithful", "functional"]
_VARIANT_ALIASES = {"paper": "paper_faithful", "paper_faithful": "paper_faithful", "functional": "functional"}


@dataclass(frozen=True)
class RamConfig:
    n: int
    m: int
    variant: Variant = "paper_faithful"

    def __post_init__(self) -> None:
        variant = _VARIANT_ALIASES.get(self.variant)
        if variant is None:
            raise ValueError(f"unknown RAM variant {self.variant!r}")
        object.__setattr__(self, "variant", variant)
        if not 1 <= self.n <= MAX_RAM_ADDRESS_BITS:
            raise ValueError(f"n must be in [1, {MAX_RAM_ADDRESS_BITS}], got {self.n}")
        if not 1 <= self.m <= MAX_RAM_WORD:
            raise ValueError(f"m must be in [1, {MAX_RAM_WORD}], got {self.m}")

    @property
    def rows(self) -> int:
        return 1 << self.n


# --- closed forms ---------------------------------------------------------

def decoder_gates(n: int) -> int:
    return 2**n - 1


def decoder_garbage(n: int) -> int:
    return n - 1


def decoder_qc(n: int) -> int:
    return 4 * 2**n - 7


def ram_gates(n: int, m: int) -> int:
    return 2**n * (6 * m + 2) + m - 1


def ram_garbage(n: int, m: int) -> int:
    return m * (4 * 2**n - 1) + n


def ram_qc(n: int, m: int) -> int:
    return 2**n * (19 * m + 9) - 7


CLOSED_FORMS = {
    "decoder_gates": decoder_gates,
    "decoder_garbage": decoder_garbage,
    "decoder_qc": decoder_qc,
    "ram_gates": ram_gates,
    "ram_garbage": ram_garbage,
    "ram_qc": ram_qc,
}


def closed_form(which: str, n: int, m: int | None = None) -> int:
    try:
        fn = CLOSED_FORMS[which]
    except KeyError:
        raise ValueError(f"unknown formula {which!r}; known: {', '.join(CLOSED_FORMS)}") from None
    if n < 1:
        raise ValueError("n must be >= 1")
    if which.startswith("ram"):
        if m is None or m < 1:
            raise ValueError(f"{which} needs m >= 1")
        return fn(n, m)
    return fn(n)


# --- decoder --------------------------------------------------------------

def _decoder_into(b: NetlistBuilder, selects: list[str], prefix: str = "") -> list[str]:
    """Emit the decoder over existing select lines; returns lines by address.

    Stage 1 is FG(s0, 1). Each later stage splits every previous output X
    with MFRG1(s, X, 0): the Q line keeps s'X, the fresh zero line gets sX.
    """
    one = b.const(f"{prefix}one", 1)
    b.gate("FG", selects[0], one)
    outs = [one, selects[0]]
    zero_count = 0
    for stage in range(1, len(selects)):
        sel = selects[stage]
        high: list[str] = []
        for x in outs:
            z = b.const(f"{prefix}z{zero_count}", 0)
            zero_count += 1
            b.gate("MFRG1", sel, x, z)
            high.append(z)
        outs = outs + high
    return outs


def build_decoder(n: int) -> Netlist:
    """n-to-2^n one-hot decoder: output ``d{a}`` is 1 exactly for address a."""
    if not 1 <= n <= MAX_DECODER_BITS:
        raise ValueError(f"decoder size n must be in [1, {MAX_DECODER_BITS}], got {n}")
    b = NetlistBuilder(f"decoder_n{n}")
    selects = [b.input(f"s{k}") for k in range(n)]
    outs = _decoder_into(b, selects)
    for addr, line in enumerate(outs):
        b.primary(line, f"d{addr}")
    for sel in selects[1:]:
        b.garbage(sel)
    return b.build()


# --- flip-flops -----------------------------------------------------------

def build_dff() -> Netlist:
    """Gated D latch: MFRG2(CLK, D, Q) gives Q+ on R, then copy and complement."""
    b = NetlistBuilder("dff")
    clk = b.input("clk")
    d = b.input("d")
    q = b.state("q", "st_q")
    z = b.const("z", 0)
    one = b.const("one", 1)
    b.gate("MFRG2", clk, d, q)
    b.gate("FG", q, z)
    b.gate("FG", q, one)
    b.primary(clk, "clk_n")
    b.garbage(d, "g_latch")
    b.primary(q, "q")
    b.next_state(z, "st_q")
    b.primary(one, "q_n")
    return b.build()


def _cell_into(
    b: NetlistBuilder, tag: str, we: str, data: str, clk: str, for_ram: bool
) -> str:
    """Write-enable master-slave cell; returns the line carrying the new Q.

    Lines ``we`` and ``clk`` come back out unchanged, so callers chain them
    into the next cell. ``data`` is consumed (it ends as garbage).
    """
    sm = b.state(f"x{tag}_in", f"x{tag}")
    mst = b.state(f"m{tag}_in", f"m{tag}")
    sst = b.state(f"s{tag}_in", f"s{tag}")
    zm = b.const(f"m{tag}_cp", 0)
    zs = b.const(f"s{tag}_cp", 0)
    # mux: R = W'.Q + W.D lands on the stored-bit line
    b.gate("MFRG1", we, data, sm)
    # master latch clocked by CLK; P output is CLK' and clocks the slave
    b.gate("MFRG2", clk, sm, mst)
    b.gate("FG", mst, zm)
    b.gate("MFRG2", clk, mst, sst)
    b.garbage(data, f"g_mux{tag}")
    b.garbage(sm, f"g_master{tag}")
    b.garbage(mst, f"g_slave{tag}")
    b.next_state(zm, f"m{tag}")
    if for_ram:
        zx = b.const(f"x{tag}_cp", 0)
        b.gate("DFG", sst, zs, zx)
        b.next_state(zs, f"s{tag}")
        b.next_state(zx, f"x{tag}")
    else:
        b.gate("FG", sst, zs)
        b.next_state(zs, f"s{tag}")
    return sst


def build_msdff_we(for_ram: bool = False) -> Netlist:
    """Write-enable master-slave D flip-flop.

    Standalone form (6 gates) ends with FG copy + FG complement: Q is the
    registered slave value, ``q_n`` the complemented output. The in-RAM form
    (5 gates) ends with one DFG producing both feedback copies and leaves
    the combinational Q on ``q``.
    """
    b = NetlistBuilder("msdff_we_ram" if for_ram else "msdff_we")
    w = b.input("w")
    d = b.input("d")
    clk = b.input("clk")
    q = _cell_into(b, "", w, d, clk, for_ram)
    b.primary(w, "w_out")
    b.primary(clk, "clk_out")
    if for_ram:
        b.primary(q, "q")
    else:
        one = b.const("one", 1)
        b.gate("FG", q, one)
        b.next_state(q, "x")
        b.primary(one, "q_n")
    return b.build()


# --- RAM ------------------------------------------------------------------

def build_rram(config: RamConfig) -> Netlist:
    """2^n x m reversible RAM.

    Per row r: TG(dec_r, W, 0) gives the row write enable, which is chained
    through the row's cells. Per cell: FG copies the column's data input onto
    a fresh line, then the 5-gate cell. Reads: ``paper_faithful`` XORs each
    column with one multi-input Feynman gate; ``functional`` accumulates
    dec_r AND Q[r][c] with a Toffoli per row so the bus shows the selected row.
    """
    n, m = config.n, config.m
    rows = config.rows
    b = NetlistBuilder(f"rram_n{n}_m{m}_{config.variant}")
    addr = [b.input(f"a{k}") for k in range(n)]
    w = b.input("w")
    clk = b.input("clk")
    data = [b.input(f"d{c}") for c in range(m)]
    dec = _decoder_into(b, addr, prefix="dec_")

    enables = []
    for r in range(rows):
        we = b.const(f"we{r}", 0)
        b.gate("TG", dec[r], w, we)
        enables.append(we)

    cells: list[list[str]] = []
    for r in range(rows):
        row = []
        for c in range(m):
            tag = f"{r}_{c}"
            copy = b.const(f"dc{tag}", 0)
            b.gate("FG", data[c], copy)
            row.append(_cell_into(b, tag, enables[r], copy, clk, for_ram=True))
        cells.append(row)

    for c in range(m):
        column = [cells[r][c] for r in range(rows)]
        if config.variant == "paper_faithful":
            b.gate(f"MFG{rows}", *column)
            for line in column[:-1]:
                b.garbage(line)
            b.primary(column[-1], f"q{c}")
        else:
            acc = b.const(f"rd{c}", 0)
            for r in range(rows):
                b.gate("TG", dec[r], column[r], acc)
            for line in column:
                b.garbage(line)
            b.primary(acc, f"q{c}")

    for sel in addr[1:]:
        b.garbage(sel)
    b.garbage(w)
    for r in range(rows):
        b.primary(dec[r], f"sel{r}")
        b.primary(enables[r], f"we{r}_out")
    b.primary(clk, "clk_out")
    for c in range(m):
        b.primary(data[c], f"d{c}_out")
    return b.build()
