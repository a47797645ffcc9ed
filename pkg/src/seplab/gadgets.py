"""Small hand-built automata used in tests, the acceptance suite and CLI examples."""
from __future__ import annotations

from seplab.presburger import parse
from seplab.regsep import DFA
from seplab.zvass import ParikhAutomaton, Transition, ZVass


def anbn_k(k: int = 1) -> ZVass:
    """{a^n b^(kn) : n >= 1} on one counter."""
    ts = (Transition("i", "a", (k,), "i"), Transition("i", "b", (-1,), "f"), Transition("f", "b", (-1,), "f"))
    return ZVass(("i", "f"), ("a", "b"), ts, "i", "f", 1)


def anbn() -> ZVass:
    return anbn_k(1)


def anb2n() -> ZVass:
    return anbn_k(2)


def anbnc() -> ZVass:
    """{a^n b^n c : n >= 1}."""
    V = anbn()
    ts = V.transitions + (Transition("f", "c", (0,), "g"),)
    return ZVass(("i", "f", "g"), ("a", "b", "c"), ts, "i", "g", 1)


def anbn_pa() -> ParikhAutomaton:
    """Deterministic PA for {a^n b^n : n >= 0}: count a and b, accept when equal."""
    ts = (Transition("p", "a", (1, 0), "p"), Transition("p", "b", (0, 1), "q"), Transition("q", "b", (0, 1), "q"))
    eq = parse("vars x y. x = y")
    return ParikhAutomaton(("p", "q"), ("a", "b"), ts, "p", {"p": eq, "q": eq}, 2, True)


def astar_pa() -> ParikhAutomaton:
    """Deterministic PA for a*: one state, every counter value accepted."""
    ts = (Transition("p", "a", (1,), "p"),)
    return ParikhAutomaton(("p",), ("a",), ts, "p", {"p": parse("vars x. x >= 0")}, 1, True)


def ends_in_dfa(letter: str, alphabet, negate: bool = False) -> DFA:
    """Two-state total DFA for the words ending in ``letter`` (or not, with negate)."""
    delta = {q: {a: ("yes" if a == letter else "no") for a in alphabet} for q in ("no", "yes")}
    acc = frozenset(["no"] if negate else ["yes"])
    return DFA(("no", "yes"), "no", acc, delta)
