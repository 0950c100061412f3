"""RevLib-flavoured text format for netlists.

Header directives, one per line::

    .version 2.0
    .model <name>
    .numvars <k>
    .variables <k unique line names>
    .inputs <k input labels>          # port, register, or constant value
    .outputs <k output labels>
    .constants <k chars, '-' free, '0'/'1' constant>
    .garbage <k chars, '1' garbage, '-' otherwise>
    .feedback <k chars, '1' state-feedback input, '-' otherwise>
    .statenext <k chars, '1' state-next output, '-' otherwise>

The body sits between ``.begin`` and ``.end`` with one gate per line: a
mnemonic (``not fg dfg t3 f3 p3 mf1 mf2 mfg<k>``) followed by the bound
variable names, first name on line A. ``#`` starts a comment. ``.model``,
``.feedback`` and ``.statenext`` are extensions; a file without them reads
as purely combinational.
"""
from __future__ import annotations

from .gates import CatalogError, builtin_gate
from .netlist import GateInstance, Line, Netlist, NetlistError, Output

__all__ = ["serialize", "parse", "NetlistParseError"]

FORMAT_VERSION = "2.0"


class NetlistParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


def serialize(netlist: Netlist) -> str:
    k = len(netlist.lines)
    consts = "".join(
        "-" if ln.constant is None else str(ln.constant) for ln in netlist.lines
    )
    garbage = "".join("1" if o.role == "garbage" else "-" for o in netlist.outputs)
    feedback = "".join("1" if ln.role == "state_feedback" else "-" for ln in netlist.lines)
    nxt = "".join("1" if o.role == "state_next" else "-" for o in netlist.outputs)
    out = [
        f"# revram netlist: {netlist.name}",
        f".version {FORMAT_VERSION}",
        f".model {netlist.name}",
        f".numvars {k}",
        ".variables " + " ".join(ln.name for ln in netlist.lines),
        ".inputs " + " ".join(ln.label for ln in netlist.lines),
        ".outputs " + " ".join(o.label for o in netlist.outputs),
        f".constants {consts}",
        f".garbage {garbage}",
    ]
    if "1" in feedback or "1" in nxt:
        out.append(f".feedback {feedback}")
        out.append(f".statenext {nxt}")
    out.append(".begin")
    names = [ln.name for ln in netlist.lines]
    for g in netlist.gates:
        if not g.gate.mnemonic:
            raise NetlistError(f"gate {g.gate.name} has no text mnemonic")
        out.append(" ".join([g.gate.mnemonic] + [names[b] for b in g.bindings]))
    out.append(".end")
    return "\n".join(out) + "\n"


_HEADER_KEYS = (
    ".version",
    ".model",
    ".numvars",
    ".variables",
    ".inputs",
    ".outputs",
    ".constants",
    ".garbage",
    ".feedback",
    ".statenext",
)
_REQUIRED = (".numvars", ".variables", ".constants", ".garbage")


def _strip_comment(text: str) -> str:
    pos = text.find("#")
    return text if pos < 0 else text[:pos]


def _gate_record(tokens: list[str], lineno: int):
    mnemonic, args = tokens[0], tokens[1:]
    try:
        spec = builtin_gate(mnemonic)
    except CatalogError:
        raise NetlistParseError(f"unknown gate mnemonic {mnemonic!r}", lineno) from None
    if len(args) != spec.width:
        raise NetlistParseError(f"{mnemonic} takes {spec.width} lines, got {len(args)}", lineno)
    if len(set(args)) != len(args):
        raise NetlistParseError(f"{mnemonic}: a line is bound more than once", lineno)
    return spec, args


def parse(text: str) -> Netlist:
    header: dict[str, tuple[list[str], int]] = {}
    body: list[tuple[list[str], int]] = []
    state = "header"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = _strip_comment(raw)
        if not content.strip():
            continue
        col = len(content) - len(content.lstrip()) + 1
        tokens = content.split()
        head = tokens[0]
        if state == "header":
            if head == ".begin":
                state = "body"
                continue
            if not head.startswith("."):
                _gate_record(tokens, lineno)
                raise NetlistParseError("gate record before .begin", lineno, col)
            if head not in _HEADER_KEYS:
                raise NetlistParseError(f"unknown or misplaced directive {head!r}", lineno, col)
            if head in header:
                raise NetlistParseError(f"duplicate directive {head}", lineno, col)
            header[head] = (tokens[1:], lineno)
        elif state == "body":
            if head == ".end":
                state = "done"
                continue
            if head.startswith("."):
                raise NetlistParseError(f"directive {head} inside gate body", lineno, col)
            body.append((tokens, lineno))
        else:
            raise NetlistParseError("content after .end", lineno, col)
    if state != "done":
        where = len(text.splitlines()) or 1
        missing = ".begin" if state == "header" else ".end"
        raise NetlistParseError(f"missing {missing}", where)
    for key in _REQUIRED:
        if key not in header:
            raise NetlistParseError(f"missing header directive {key}", 1)

    numvars_tok, numvars_line = header[".numvars"]
    if len(numvars_tok) != 1 or not numvars_tok[0].isdigit():
        raise NetlistParseError(".numvars needs one nonnegative integer", numvars_line)
    k = int(numvars_tok[0])

    def field_list(key: str, default=None) -> list[str]:
        if key not in header:
            if default is None:
                raise NetlistParseError(f"missing header directive {key}", 1)
            return default
        toks, ln = header[key]
        if len(toks) != k:
            raise NetlistParseError(f"{key} lists {len(toks)} entries, expected {k}", ln)
        return toks

    def char_field(key: str, allowed: str) -> str:
        if key not in header:
            return "-" * k
        toks, ln = header[key]
        s = "".join(toks)
        if len(s) != k:
            raise NetlistParseError(f"{key} has {len(s)} characters, expected {k}", ln)
        bad = set(s) - set(allowed)
        if bad:
            raise NetlistParseError(f"{key}: invalid characters {''.join(sorted(bad))}", ln)
        return s

    names = field_list(".variables")
    var_line = header[".variables"][1]
    seen: set[str] = set()
    for n in names:
        if n in seen:
            raise NetlistParseError(f"duplicate variable name {n!r}", var_line)
        seen.add(n)
    consts = char_field(".constants", "-01")
    garbage = char_field(".garbage", "-1")
    feedback = char_field(".feedback", "-1")
    nxt = char_field(".statenext", "-1")
    in_labels = field_list(".inputs", default=[c if c != "-" else n for c, n in zip(consts, names)])
    out_labels = field_list(".outputs", default=list(names))

    lines = []
    for i, name in enumerate(names):
        if consts[i] != "-" and feedback[i] == "1":
            raise NetlistParseError(f"variable {name} is both constant and feedback", var_line)
        if consts[i] == "0":
            role = "constant_zero"
        elif consts[i] == "1":
            role = "constant_one"
        elif feedback[i] == "1":
            role = "state_feedback"
        else:
            role = "primary_input"
        lines.append(Line(i, name, role, in_labels[i]))  # type: ignore[arg-type]
    outputs = []
    for i in range(k):
        if garbage[i] == "1" and nxt[i] == "1":
            raise NetlistParseError(f"output {out_labels[i]} is both garbage and state-next", var_line)
        role = "garbage" if garbage[i] == "1" else "state_next" if nxt[i] == "1" else "primary_output"
        outputs.append(Output(role, out_labels[i]))  # type: ignore[arg-type]

    index = {n: i for i, n in enumerate(names)}
    gates = []
    for tokens, lineno in body:
        spec, args = _gate_record(tokens, lineno)
        for a in args:
            if a not in index:
                raise NetlistParseError(f"unknown variable {a!r}", lineno)
        gates.append(GateInstance(spec, tuple(index[a] for a in args)))

    model = header.get(".model", (["circuit"], 0))[0]
    try:
        return Netlist(tuple(lines), tuple(gates), tuple(outputs), model[0] if model else "circuit")
    except NetlistError as exc:
        raise NetlistParseError(str(exc), var_line) from None
