"""Brute-force enumeration oracles for the run-counting bounds.

Everything here enumerates runs outright (depth-first, lexicographic) and
checks the counting statements by direct inspection at small length, so
these functions double as independent references for the streaming and
chain machinery.  Enumerations are capped; past the cap the statistical
path is the right tool.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .alphabet import as_word
from .compat import CompatibilityWitness
from .errors import CapExceeded, NotCompatible, NotOblivious, NotStronglyConnected
from .machines import Automaton, Selector, is_oblivious, scc_decomposition
from .measures import MarkovMeasure, conditional_word_measure

DEFAULT_RUN_CAP = 1 << 20


@dataclass(frozen=True)
class RunEnumeration:
    """All realizable runs of one length from one state, in lexicographic
    input order: (input, output, end) triples."""

    start: object
    length: int
    runs: tuple

    @property
    def count(self) -> int:
        return len(self.runs)


def _check_cap(machine, n: int, cap: int):
    nominal = len(machine.alphabet) ** n
    if nominal > cap:
        raise CapExceeded(nominal, cap)


def _walk_runs(machine, start, n: int, weights=None) -> Iterator[tuple]:
    """Depth-first enumeration of the realizable length-n runs from ``start``.

    Yields (input, output, end, weight) with inputs in lexicographic order.
    ``weights(state, symbol)`` multiplies into the run weight per step; the
    weight is 1.0 when omitted.  Output is () for automata.
    """
    machine.state_index(start)
    if n == 0:
        yield (), (), start, 1.0
        return
    is_selector = isinstance(machine, Selector)
    symbols = machine.alphabet.symbols
    na = len(symbols)
    sym_idx = [0] * n
    states = [start] + [None] * n
    acc = [1.0] * (n + 1)
    kept = [False] * n
    inputs = [None] * n
    d = 0
    while d >= 0:
        if d == n:
            out = tuple(inputs[i] for i in range(n) if kept[i])
            yield tuple(inputs), out, states[n], acc[n]
            d -= 1
            continue
        i = sym_idx[d]
        if i >= na:
            sym_idx[d] = 0
            d -= 1
            continue
        sym_idx[d] = i + 1
        a = symbols[i]
        step = machine.step_or_none(states[d], a)
        if step is None:
            continue
        if is_selector:
            target, keeps = step
        else:
            target, keeps = step, False
        inputs[d] = a
        kept[d] = keeps
        states[d + 1] = target
        acc[d + 1] = acc[d] if weights is None else acc[d] * weights(states[d], a)
        d += 1


def enumerate_runs(machine, start, n: int, cap: int = DEFAULT_RUN_CAP) -> RunEnumeration:
    """Materialize every realizable length-n run from ``start`` with its
    output and end state, inputs in lexicographic order."""
    _check_cap(machine, n, cap)
    runs = tuple((u, v, end) for u, v, end, _w in _walk_runs(machine, start, n))
    return RunEnumeration(start=start, length=n, runs=runs)


@dataclass(frozen=True)
class LemmaCheckResult:
    """Outcome of one counting-bound check.

    ``value`` is the measured count or measure, checked against
    [lower, upper]; ``strict`` records whether the upper comparison held
    strictly (the stated bounds are strict except for degenerate base
    cases where both sides are equal)."""

    lemma: str
    state: object
    n: int
    word: tuple
    value: float
    upper: float
    lower: Optional[float] = None
    epsilon: Optional[float] = None
    passed: bool = False
    strict: bool = False


def _require_oblivious(selector: Selector):
    ok, witness = is_oblivious(selector)
    if not ok:
        raise NotOblivious(witness)


def count_output_prefix_runs(
    selector: Selector,
    start,
    n: int,
    word,
    cap: int = DEFAULT_RUN_CAP,
    require_oblivious: bool = True,
) -> tuple[int, LemmaCheckResult]:
    """Count length-n runs from ``start`` whose output begins with ``word``
    and check the count against #A**(n - |word|).

    The bound is stated for oblivious selectors; pass
    ``require_oblivious=False`` to probe individual states of a mixed-action
    machine anyway (the check then reports whatever holds empirically).
    """
    w = as_word(word)
    if len(w) > n:
        raise ValueError(f"|word| = {len(w)} exceeds run length {n}")
    if require_oblivious:
        _require_oblivious(selector)
    _check_cap(selector, n, cap)
    count = 0
    for _u, v, _end, _wt in _walk_runs(selector, start, n):
        if v[: len(w)] == w:
            count += 1
    bound = len(selector.alphabet) ** (n - len(w))
    result = LemmaCheckResult(
        lemma="count-upper",
        state=start,
        n=n,
        word=w,
        value=count,
        upper=bound,
        passed=count <= bound,
        strict=count < bound,
    )
    return count, result


def _read_step_weight(mu: MarkovMeasure, witness: CompatibilityWitness):
    entries = mu.P.entries
    alpha = mu.alphabet
    labels = {q: alpha.index(s) for q, s in witness.last_read.items()}

    def weight(state, a):
        return entries[labels[state], alpha.index(a)]

    return weight


def measure_output_prefix_runs(
    selector: Selector,
    mu: MarkovMeasure,
    witness: CompatibilityWitness,
    start,
    n: int,
    word,
    cap: int = DEFAULT_RUN_CAP,
    tol: float = 1e-12,
) -> tuple[float, LemmaCheckResult]:
    """Total conditional measure (given the last-read label of ``start``) of
    the length-n inputs whose output begins with ``word``, checked against
    the conditional measure of ``word`` after the last-selected label.

    The stated bound is strict except in degenerate base cases (n = 0 with
    the empty word makes both sides 1), so the check accepts equality and
    records strictness separately.
    """
    w = as_word(word)
    if len(w) > n:
        raise ValueError(f"|word| = {len(w)} exceeds run length {n}")
    _require_oblivious(selector)
    if witness.last_selected is None:
        raise NotCompatible(["witness lacks the last-selected labeling"])
    _check_cap(selector, n, cap)
    weight = _read_step_weight(mu, witness)
    value = 0.0
    for _u, v, _end, wt in _walk_runs(selector, start, n, weight):
        if v[: len(w)] == w:
            value += wt
    bound = conditional_word_measure(mu, witness.last_selected[start], w)
    result = LemmaCheckResult(
        lemma="measure-upper",
        state=start,
        n=n,
        word=w,
        value=value,
        upper=bound,
        passed=value <= bound + tol,
        strict=value < bound - tol,
    )
    return value, result


@dataclass(frozen=True)
class EquirunScanResult:
    """Least run length at which every (state, word) count sits inside the
    two-sided band, with the per-pair results at the reported length."""

    k: int
    epsilon: float
    witness_n: Optional[int]
    results: tuple

    @property
    def passed(self) -> bool:
        return self.witness_n is not None


def equirun_scan(
    selector: Selector,
    k: int,
    epsilon: float,
    n_max: int,
    mu: Optional[MarkovMeasure] = None,
    witness: Optional[CompatibilityWitness] = None,
    cap: int = DEFAULT_RUN_CAP,
    tol: float = 1e-12,
) -> EquirunScanResult:
    """Scan n = k..n_max for the least length at which, for every state p and
    every length-k word w, the runs outputting w first sit within
    [(1-epsilon) * bound, bound].

    Uniform mode bounds run counts by #A**(n-k); Markov mode (measure plus
    witness) bounds the conditional run measure by the conditional measure
    of w after the last-selected label of p.
    """
    _require_oblivious(selector)
    if not scc_decomposition(selector).strongly_connected:
        raise NotStronglyConnected("equirun scan expects a strongly connected selector")
    markov = mu is not None
    if markov and (witness is None or witness.last_selected is None):
        raise NotCompatible(["equirun scan in Markov mode needs a selector witness"])
    alpha = selector.alphabet
    words = list(alpha.words(k))
    weight = _read_step_weight(mu, witness) if markov else None

    last_results: tuple = ()
    for n in range(k, n_max + 1):
        _check_cap(selector, n, cap)
        results = []
        all_ok = True
        for p in selector.states:
            buckets: dict = {}
            for _u, v, _end, wt in _walk_runs(selector, p, n, weight):
                if len(v) >= k:
                    key = v[:k]
                    if markov:
                        buckets[key] = buckets.get(key, 0.0) + wt
                    else:
                        buckets[key] = buckets.get(key, 0) + 1
            for w in words:
                value = buckets.get(w, 0.0 if markov else 0)
                if markov:
                    upper = conditional_word_measure(mu, witness.last_selected[p], w)
                    lower = (1.0 - epsilon) * upper
                    ok = (lower - tol) <= value <= (upper + tol)
                else:
                    upper = len(alpha) ** (n - k)
                    lower = (1.0 - epsilon) * upper
                    ok = lower <= value <= upper
                all_ok = all_ok and ok
                results.append(
                    LemmaCheckResult(
                        lemma="equirun-measure" if markov else "equirun-count",
                        state=p,
                        n=n,
                        word=w,
                        value=value,
                        upper=upper,
                        lower=lower,
                        epsilon=epsilon,
                        passed=ok,
                        strict=value < upper,
                    )
                )
        last_results = tuple(results)
        if all_ok:
            return EquirunScanResult(
                k=k, epsilon=epsilon, witness_n=n, results=last_results
            )
    return EquirunScanResult(k=k, epsilon=epsilon, witness_n=None, results=last_results)


def brute_force_prefix_selection(x, dfa: Automaton, accepting) -> tuple:
    """Literal prefix selection: keep x[i] exactly when the DFA accepts
    x[1:i-1], deciding each prefix by a fresh run from the initial state.

    Quadratic on purpose; this is the definition-level reference for the
    selector machinery.
    """
    word = as_word(x)
    accepting = set(accepting)
    out = []
    for i in range(1, len(word) + 1):
        prefix = word[: i - 1]
        state = dfa.initial
        alive = True
        for a in prefix:
            state = dfa.step_or_none(state, a)
            if state is None:
                alive = False
                break
        if alive and state in accepting:
            out.append(word[i - 1])
    return tuple(out)
