"""Pulse-program text: parsing, formatting, evaluation, and emission.

A program is one pulse per line, `NAME(theta, phi, target)` with
`Z(theta, target)` as the only two-argument form.  Names are R, MS, Z,
HidingA, HidingB, HidingC.  `%` starts a comment line (preserved verbatim),
a trailing `!` marks a crosstalk-compensation pulse (carried through parsing,
dropped with a count when building a circuit), and targets are a 1-based site
number or `all`.

Angles are expressions over numbers, `pi`, free symbols (`m`, `J`, `w`,
`Delta_t`, ...), `+ - * /`, parentheses, and implicit multiplication
(`2m`, `0.07pi`, `(2m+2J)*Delta_t`).  The raw text is kept verbatim so
formatting round-trips; values are bound only when a circuit is built.

Pulse semantics relative to the gate IR: R and MS match CollectiveRotation
and EntanglingMS directly; the z pulse uses the hardware frame
Z(theta, q) = exp(+i theta/2 Z_q), the opposite sign of AddressedZ, which is
what makes the emitted single-site angles come out nonnegative.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .compiler import TrotterSchedule, compile_step, z_symbolic_coefficients
from .errors import ParameterError, PulseSyntaxError, StructureError, UnboundSymbolError
from .gates import (
    AddressedZ,
    Circuit,
    CollectiveRotation,
    EntanglingMS,
    Hide,
    Unhide,
    validate_circuit,
)
from .model import ModelParams

PULSE_ARITY = {"R": 3, "MS": 3, "Z": 2, "HidingA": 3, "HidingB": 3, "HidingC": 3}
_HIDE_ORDER = ("HidingA", "HidingB", "HidingC")
_UNHIDE_ORDER = ("HidingC", "HidingB", "HidingA")
_ANGLE_ATOL = 1e-9


@dataclass(frozen=True)
class Pulse:
    name: str
    theta: str
    phi: str | None  # None for the two-argument Z form
    target: str  # "all" or a decimal site number
    crosstalk: bool = False


@dataclass(frozen=True)
class Comment:
    text: str


@dataclass(frozen=True)
class PulseProgram:
    entries: tuple
    n_sites: int | None = None

    def pulses(self) -> list[Pulse]:
        return [e for e in self.entries if isinstance(e, Pulse)]


# --- angle expressions -----------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<sym>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"bad character {text[pos:].lstrip()[0]!r} in angle {text!r}")
        if match.group("num") is not None:
            tokens.append(("num", float(match.group("num"))))
        elif match.group("sym") is not None:
            tokens.append(("sym", match.group("sym")))
        else:
            tokens.append(("op", match.group("op")))
        pos = match.end()
    if not tokens:
        raise ValueError(f"empty angle expression {text!r}")
    return tokens


class _ExprParser:
    """Recursive descent over +, -, *, /, unary minus, implicit products."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing tokens after expression: {self.peek()!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            tok = self.peek()
            if tok in (("op", "*"), ("op", "/")):
                op = self.take()[1]
                node = (op, node, self.unary())
            elif tok is not None and (tok[0] in ("num", "sym") or tok == ("op", "(")):
                # adjacency means multiplication: 2m, 0.07pi, 2(m+J)
                node = ("*", node, self.unary())
            else:
                return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        return self.primary()

    def primary(self):
        tok = self.take()
        if tok is None:
            raise ValueError("unexpected end of angle expression")
        kind, value = tok
        if kind == "num":
            return ("num", value)
        if kind == "sym":
            return ("sym", value)
        if tok == ("op", "("):
            node = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis in angle expression")
            return node
        raise ValueError(f"unexpected token {value!r} in angle expression")


def parse_angle(text: str):
    """Syntax-check an angle expression; returns the AST."""
    return _ExprParser(_tokenize(text)).parse()


def _eval_node(node, bindings):
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "sym":
        name = node[1]
        if name == "pi":
            return math.pi
        if name not in bindings:
            raise UnboundSymbolError(name)
        return float(bindings[name])
    if kind == "neg":
        return -_eval_node(node[1], bindings)
    a = _eval_node(node[1], bindings)
    b = _eval_node(node[2], bindings)
    if kind == "+":
        return a + b
    if kind == "-":
        return a - b
    if kind == "*":
        return a * b
    return a / b


def evaluate_angle(text: str, bindings: dict | None = None) -> float:
    """Evaluate an angle expression; pi is always bound."""
    return _eval_node(parse_angle(text), bindings or {})


def angle_symbols(text: str) -> set:
    """Free symbols of an angle expression (pi excluded)."""
    out: set = set()

    def walk(node):
        if node[0] == "sym":
            if node[1] != "pi":
                out.add(node[1])
        elif node[0] == "neg":
            walk(node[1])
        elif node[0] in "+-*/":
            walk(node[1])
            walk(node[2])

    walk(parse_angle(text))
    return out


def format_angle(value: float) -> str:
    """Render radians compactly: near-multiples of pi/4 get symbolic form,
    everything else is the exact float repr in plain radians."""
    value = float(value)
    if value == 0.0:
        return "0"
    r = value / math.pi
    for den in (1, 2, 4):
        num = r * den
        if abs(num - round(num)) < 1e-12 and round(num) != 0:
            num = int(round(num))
            head = {1: "pi", -1: "-pi"}.get(num, f"{num}pi")
            return head if den == 1 else f"{head}/{den}"
    return repr(value)


# --- parsing and formatting ------------------------------------------------

def _split_args(argstr: str, line_no: int) -> list[str]:
    parts = []
    depth = 0
    current = []
    for ch in argstr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise PulseSyntaxError(line_no, "unbalanced parenthesis in argument list")
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise PulseSyntaxError(line_no, "unbalanced parenthesis in argument list")
    parts.append("".join(current))
    return [p.strip() for p in parts]


_PULSE_RE = re.compile(r"(?P<name>[A-Za-z_][A-Za-z_0-9]*)\s*\((?P<args>.*)\)\s*$")


def parse_pulse_program(text: str, n_sites: int | None = None) -> PulseProgram:
    """Parse pulse text; comments survive, blank lines do not."""
    if n_sites is not None and n_sites < 1:
        raise ParameterError(f"n_sites must be >= 1, got {n_sites}")
    entries: list = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%"):
            entries.append(Comment(line))
            continue
        crosstalk = False
        if line.endswith("!"):
            crosstalk = True
            line = line[:-1].rstrip()
        match = _PULSE_RE.match(line)
        if match is None:
            raise PulseSyntaxError(line_no, f"unrecognized pulse syntax {raw.strip()!r}")
        name = match.group("name")
        if name not in PULSE_ARITY:
            raise PulseSyntaxError(line_no, f"unknown pulse name {name!r}")
        args = _split_args(match.group("args"), line_no)
        if len(args) != PULSE_ARITY[name]:
            raise PulseSyntaxError(
                line_no, f"{name} takes {PULSE_ARITY[name]} arguments, got {len(args)}"
            )
        target = args[-1]
        if target != "all":
            if not target.isdigit() or int(target) < 1:
                raise PulseSyntaxError(line_no, f"target must be a site number or all, got {target!r}")
            if n_sites is not None and int(target) > n_sites:
                raise PulseSyntaxError(line_no, f"target {target} outside 1..{n_sites}")
        if name == "Z" and target == "all":
            raise PulseSyntaxError(line_no, "Z pulses are addressed; target cannot be all")
        angles = args[:-1]
        for a in angles:
            try:
                parse_angle(a)
            except ValueError as exc:
                raise PulseSyntaxError(line_no, str(exc)) from None
        phi = angles[1] if len(angles) == 2 else None
        entries.append(Pulse(name=name, theta=angles[0], phi=phi, target=target, crosstalk=crosstalk))
    return PulseProgram(entries=tuple(entries), n_sites=n_sites)


def format_pulse_program(program: PulseProgram) -> str:
    lines = []
    for entry in program.entries:
        if isinstance(entry, Comment):
            lines.append(entry.text)
            continue
        args = [entry.theta] + ([entry.phi] if entry.phi is not None else []) + [entry.target]
        line = f"{entry.name}({', '.join(args)})"
        if entry.crosstalk:
            line += " !"
        lines.append(line)
    return "\n".join(lines) + "\n"


# --- circuit construction --------------------------------------------------

def _is_close(value: float, target: float) -> bool:
    return abs(value - target) <= _ANGLE_ATOL


def pulses_to_circuit(
    program: PulseProgram, n_sites: int, bindings: dict | None = None
) -> Circuit:
    """Map a pulse program to a validated circuit.

    Crosstalk-flagged pulses are dropped first; the count lands on
    Circuit.dropped_crosstalk.  Hiding pulses must form the canonical triples
    (A,B,C at theta=pi, phi=0 to hide; C,B,A at theta=pi, phi=pi to unhide);
    anything else is a StructureError.  `all` targets resolve to the sites
    visible at that point in the program.
    """
    if n_sites < 1:
        raise ParameterError(f"n_sites must be >= 1, got {n_sites}")
    bindings = bindings or {}
    stream = [p for p in program.pulses() if not p.crosstalk]
    dropped = sum(1 for p in program.pulses() if p.crosstalk)

    gates: list = []
    hidden: set[int] = set()
    pos = 0
    while pos < len(stream):
        pulse = stream[pos]
        if pulse.name.startswith("Hiding"):
            triple = stream[pos : pos + 3]
            names = tuple(p.name for p in triple)
            if (
                len(triple) < 3
                or any(not p.name.startswith("Hiding") for p in triple)
                or len({p.target for p in triple}) != 1
            ):
                raise StructureError(f"incomplete hiding triple at pulse {pos}")
            site = int(triple[0].target) if triple[0].target != "all" else None
            if site is None:
                raise StructureError("hiding pulses must target a single site")
            thetas = [evaluate_angle(p.theta, bindings) for p in triple]
            phis = [evaluate_angle(p.phi, bindings) for p in triple]
            if names == _HIDE_ORDER and all(_is_close(t, math.pi) for t in thetas) and all(
                _is_close(f, 0.0) for f in phis
            ):
                gates.append(Hide(site))
            elif names == _UNHIDE_ORDER and all(_is_close(t, math.pi) for t in thetas) and all(
                _is_close(f, math.pi) for f in phis
            ):
                gates.append(Unhide(site))
            else:
                raise StructureError(
                    f"hiding pattern {names} with angles {thetas}/{phis} at pulse {pos} "
                    "is not a canonical hide or unhide triple"
                )
            if isinstance(gates[-1], Hide):
                hidden.add(site)
            else:
                hidden.discard(site)
            pos += 3
            continue

        theta = evaluate_angle(pulse.theta, bindings)
        if pulse.name == "Z":
            # hardware z frame: pulse angle is the negated IR rotation
            gates.append(AddressedZ(-theta, int(pulse.target)))
            pos += 1
            continue

        phi = evaluate_angle(pulse.phi, bindings)
        if pulse.target == "all":
            active = tuple(s for s in range(1, n_sites + 1) if s not in hidden)
            if not active:
                raise StructureError(f"pulse {pos} targets all, but every site is hidden")
        else:
            active = (int(pulse.target),)
        if pulse.name == "MS":
            if len(active) < 2:
                raise StructureError(f"pulse {pos}: entangling pulse needs >= 2 visible sites")
            gates.append(EntanglingMS(theta, phi, active))
        else:
            gates.append(CollectiveRotation(theta, phi, active))
        pos += 1

    circuit = Circuit(n_sites=n_sites, gates=gates, dropped_crosstalk=dropped)
    validate_circuit(circuit)
    return circuit


# --- emission ---------------------------------------------------------------

def _format_symbolic_z(a_m: int, a_j: int) -> str:
    terms = []
    if a_m == 1:
        terms.append("m")
    elif a_m != 0:
        terms.append(f"{a_m}m")
    if a_j == 1:
        terms.append("J")
    elif a_j != 0:
        terms.append(f"{a_j}J")
    if not terms:
        return "0"
    body = "+".join(terms)
    if len(terms) > 1:
        body = f"({body})"
    return f"{body}*Delta_t"


def emit_pulse_program(
    params: ModelParams,
    schedule: TrotterSchedule,
    symbolic: bool = False,
    magnetization_shift: bool = True,
) -> str:
    """Render one compiled Trotter step as pulse text.

    Numeric mode writes literal radian angles; symbolic mode writes the
    entangler times as J*Delta_t / w*Delta_t and the single-site angles as
    coefficient combinations, with Delta_t standing for the step duration.
    Output parses back into an equivalent circuit.
    """
    circuit = compile_step(params, schedule, magnetization_shift)
    symbolic_z = dict(enumerate(z_symbolic_coefficients(params.N), start=1))

    label_of = {}
    for label, spans in circuit.sections.items():
        for w_index, (start, stop) in enumerate(spans, start=1):
            for k in range(start, stop):
                label_of[k] = (label, w_index)

    lines = [
        f"% one evolution step, N={params.N}, sections {','.join(schedule.section_order)}"
    ]
    hidden: set[int] = set()
    seen_windows: set = set()
    for k, gate in enumerate(circuit.gates):
        where = label_of.get(k)
        if where is not None and where not in seen_windows:
            seen_windows.add(where)
            label, w_index = where
            header = {
                "ZZ": f"% long-range window {w_index} (sites 1..{w_index + 1})",
                "PM": f"% hopping window {w_index} (sites {w_index}, {w_index + 1})",
                "Z": "% single-site section",
            }[label]
            lines.append(header)
        if isinstance(gate, Hide):
            hidden.add(gate.site)
            for name in _HIDE_ORDER:
                lines.append(f"{name}(pi, 0, {gate.site})")
            continue
        if isinstance(gate, Unhide):
            hidden.discard(gate.site)
            for name in _UNHIDE_ORDER:
                lines.append(f"{name}(pi, pi, {gate.site})")
            continue
        if isinstance(gate, CollectiveRotation):
            visible = tuple(s for s in range(1, params.N + 1) if s not in hidden)
            if gate.active != visible:
                raise StructureError("rotation active set does not match visible sites")
            lines.append(f"R({format_angle(gate.theta)}, {format_angle(gate.phi)}, all)")
            continue
        if isinstance(gate, EntanglingMS):
            visible = tuple(s for s in range(1, params.N + 1) if s not in hidden)
            if gate.active != visible:
                raise StructureError("entangler active set does not match visible sites")
            if symbolic:
                theta = "J*Delta_t" if label_of[k][0] == "ZZ" else "w*Delta_t"
            else:
                theta = format_angle(gate.theta)
            lines.append(f"MS({theta}, {format_angle(gate.phi)}, all)")
            continue
        # addressed z: negate into the hardware frame
        if symbolic and label_of.get(k, ("",))[0] == "Z":
            a_m, a_j = symbolic_z[gate.site]
            theta = _format_symbolic_z(a_m, a_j)
        else:
            theta = format_angle(-gate.theta)
        lines.append(f"Z({theta}, {gate.site})")
    return "\n".join(lines) + "\n"
