"""Line-based text formats for machines, measures, and matrices.

Machine files::

    # comments run to end of line, blank lines are ignored
    alphabet 0 1
    states q0 q1
    initial q0
    iota q0 0          # optional last-read declarations
    eta q0 0           # optional last-selected declarations
    trans q0 0 drop q0 # selectors: src symbol keep|drop dst
    trans q0 0 q0      # automata: src symbol dst

Measure files hold ``alphabet``, one ``pi`` line, and one ``row`` line per
symbol in alphabet order; matrix files are the same without ``pi``.  Values
are decimal doubles.  A duplicate (source, symbol) transition is a parse
error, and the token ``eps`` is reserved for the empty word.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .alphabet import Alphabet
from .errors import ParseError, UnknownSymbol, ValidationError
from .machines import Automaton, Selector
from .measures import Distribution, MarkovMeasure, SftSpec, StochasticMatrix


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _parse_machine_text(text: str, kind: str):
    alphabet = None
    states = None
    initial = None
    iota: dict = {}
    eta: dict = {}
    transitions = []
    seen_edges = set()
    for number, fields in _lines(text):
        key, args = fields[0], fields[1:]
        if key == "alphabet":
            if alphabet is not None:
                raise ParseError(number, "duplicate alphabet line")
            try:
                alphabet = Alphabet(args)
            except ValidationError as exc:
                raise ParseError(number, str(exc)) from None
        elif key == "states":
            if states is not None:
                raise ParseError(number, "duplicate states line")
            if len(set(args)) != len(args) or not args:
                raise ParseError(number, "states must be nonempty and distinct")
            states = list(args)
        elif key == "initial":
            if initial is not None:
                raise ParseError(number, "duplicate initial line")
            if len(args) != 1:
                raise ParseError(number, "initial takes exactly one state")
            initial = args[0]
        elif key in ("iota", "eta"):
            if len(args) != 2:
                raise ParseError(number, f"{key} takes a state and a symbol")
            store = iota if key == "iota" else eta
            if args[0] in store:
                raise ParseError(number, f"duplicate {key} declaration for {args[0]}")
            store[args[0]] = args[1]
        elif key == "trans":
            expected = 4 if kind == "selector" else 3
            if len(args) != expected:
                raise ParseError(
                    number,
                    f"trans takes {expected} fields for a {kind} "
                    f"(src symbol {'keep|drop ' if kind == 'selector' else ''}dst)",
                )
            if kind == "selector":
                src, symbol, action, dst = args
                if action not in ("keep", "drop"):
                    raise ParseError(number, f"action must be keep or drop, got {action!r}")
                edge = (src, symbol)
                transitions.append((src, symbol, action, dst))
            else:
                src, symbol, dst = args
                edge = (src, symbol)
                transitions.append((src, symbol, dst))
            if edge in seen_edges:
                raise ParseError(number, f"duplicate transition from {src} on {symbol}")
            seen_edges.add(edge)
        else:
            raise ParseError(number, f"unknown keyword {key!r}")
    for name, value in (("alphabet", alphabet), ("states", states), ("initial", initial)):
        if value is None:
            raise ParseError(0, f"missing {name} line")
    cls = Selector if kind == "selector" else Automaton
    try:
        machine = cls(alphabet, states, initial, transitions)
        machine.declare_labels(last_read=iota, last_selected=eta)
    except (ValidationError, UnknownSymbol) as exc:
        raise ParseError(0, str(exc)) from None
    return machine


def parse_selector_text(text: str) -> Selector:
    return _parse_machine_text(text, "selector")


def parse_automaton_text(text: str) -> Automaton:
    return _parse_machine_text(text, "automaton")


def _parse_rows_text(text: str, want_pi: bool):
    alphabet = None
    pi = None
    rows = []
    for number, fields in _lines(text):
        key, args = fields[0], fields[1:]
        if key == "alphabet":
            if alphabet is not None:
                raise ParseError(number, "duplicate alphabet line")
            try:
                alphabet = Alphabet(args)
            except ValidationError as exc:
                raise ParseError(number, str(exc)) from None
        elif key == "pi":
            if not want_pi:
                raise ParseError(number, "pi line not allowed in a matrix file")
            if pi is not None:
                raise ParseError(number, "duplicate pi line")
            pi = _floats(number, args)
        elif key == "row":
            rows.append((number, _floats(number, args)))
        else:
            raise ParseError(number, f"unknown keyword {key!r}")
    if alphabet is None:
        raise ParseError(0, "missing alphabet line")
    size = len(alphabet)
    if len(rows) != size:
        raise ParseError(0, f"expected {size} row lines, found {len(rows)}")
    for number, row in rows:
        if len(row) != size:
            raise ParseError(number, f"row needs {size} entries, found {len(row)}")
    matrix = np.array([row for _n, row in rows], dtype=float)
    if want_pi:
        if pi is None:
            raise ParseError(0, "missing pi line")
        if len(pi) != size:
            raise ParseError(0, f"pi needs {size} entries, found {len(pi)}")
    return alphabet, pi, matrix


def _floats(number, tokens):
    out = []
    for tok in tokens:
        try:
            out.append(float(tok))
        except ValueError:
            raise ParseError(number, f"not a decimal number: {tok!r}") from None
    return out


def parse_measure_text(text: str) -> MarkovMeasure:
    alphabet, pi, matrix = _parse_rows_text(text, want_pi=True)
    return MarkovMeasure(
        Distribution(alphabet, np.array(pi)), StochasticMatrix(alphabet, matrix)
    )


def parse_matrix_text(text: str) -> SftSpec:
    alphabet, _pi, matrix = _parse_rows_text(text, want_pi=False)
    return SftSpec(alphabet, matrix)


def parse_selector(path) -> Selector:
    return parse_selector_text(Path(path).read_text())


def parse_automaton(path) -> Automaton:
    return parse_automaton_text(Path(path).read_text())


def parse_measure(path) -> MarkovMeasure:
    return parse_measure_text(Path(path).read_text())


def parse_matrix(path) -> SftSpec:
    return parse_matrix_text(Path(path).read_text())


def _machine_header(machine):
    lines = [
        "alphabet " + " ".join(machine.alphabet.symbols),
        "states " + " ".join(str(q) for q in machine.states),
        f"initial {machine.initial}",
    ]
    for key, mapping in (
        ("iota", machine.declared_last_read),
        ("eta", machine.declared_last_selected),
    ):
        for q in machine.states:
            if q in mapping:
                lines.append(f"{key} {q} {mapping[q]}")
    return lines


def serialize_selector(selector: Selector) -> str:
    lines = _machine_header(selector)
    for src, symbol, action, dst in selector.transitions():
        lines.append(f"trans {src} {symbol} {action} {dst}")
    return "\n".join(lines) + "\n"


def serialize_automaton(automaton: Automaton) -> str:
    lines = _machine_header(automaton)
    for src, symbol, dst in automaton.transitions():
        lines.append(f"trans {src} {symbol} {dst}")
    return "\n".join(lines) + "\n"


def serialize_measure(mu: MarkovMeasure) -> str:
    lines = ["alphabet " + " ".join(mu.alphabet.symbols)]
    lines.append("pi " + " ".join(repr(float(x)) for x in mu.pi.weights))
    for row in mu.P.entries:
        lines.append("row " + " ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def serialize_matrix(spec: SftSpec) -> str:
    lines = ["alphabet " + " ".join(spec.alphabet.symbols)]
    for row in spec.M:
        lines.append("row " + " ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def machine_digest(machine) -> str:
    """Short provenance hash of a machine's canonical serialization."""
    if isinstance(machine, Selector):
        text = serialize_selector(machine)
    else:
        text = serialize_automaton(machine)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def read_symbol_text(alphabet: Alphabet, text: str) -> np.ndarray:
    """Parse raw sequence text: contiguous characters for single-character
    alphabets (whitespace ignored), whitespace-separated tokens otherwise."""
    if alphabet.single_char:
        stripped = "".join(text.split())
        return alphabet.encode(stripped)
    return alphabet.encode(text.split())


def write_symbol_text(alphabet: Alphabet, indices) -> str:
    return alphabet.text(indices)
