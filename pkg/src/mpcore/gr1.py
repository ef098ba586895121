"""GR(1) objectives ``GF a1 & ... & GF am -> GF b1 & ... & GF bn``.

After ``GF`` comes a single Boolean primary: an atom, a constant, a negation
or a parenthesised expression. So ``GF l & GF r`` is a conjunction of two
objectives, and a compound condition is written ``GF (a & !b)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .game import Game, Lasso


class SpecSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        super().__init__(f"{msg} at position {pos}: {text[:pos]}^{text[pos:]}")
        self.pos = pos


# --- Boolean combinations -----------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: bool

    def holds(self, props) -> bool:
        return self.value

    def atoms(self) -> frozenset[str]:
        return frozenset()

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Atom:
    name: str

    def holds(self, props) -> bool:
        return self.name in props

    def atoms(self) -> frozenset[str]:
        return frozenset({self.name})

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    arg: object

    def holds(self, props) -> bool:
        return not self.arg.holds(props)

    def atoms(self):
        return self.arg.atoms()

    def __str__(self):
        return f"!{_wrap(self.arg)}"


@dataclass(frozen=True)
class And:
    left: object
    right: object

    def holds(self, props) -> bool:
        return self.left.holds(props) and self.right.holds(props)

    def atoms(self):
        return self.left.atoms() | self.right.atoms()

    def __str__(self):
        return f"{_wrap(self.left)} & {_wrap(self.right)}"


@dataclass(frozen=True)
class Or:
    left: object
    right: object

    def holds(self, props) -> bool:
        return self.left.holds(props) or self.right.holds(props)

    def atoms(self):
        return self.left.atoms() | self.right.atoms()

    def __str__(self):
        return f"{_wrap(self.left)} | {_wrap(self.right)}"


BoolCombo = Const | Atom | Not | And | Or


def _wrap(e) -> str:
    return f"({e})" if isinstance(e, (And, Or)) else str(e)


@dataclass(frozen=True)
class Gr1Spec:
    premises: tuple[BoolCombo, ...]
    guarantees: tuple[BoolCombo, ...]

    def atoms(self) -> frozenset[str]:
        return frozenset().union(*(b.atoms() for b in self.premises + self.guarantees))

    def __str__(self):
        def side(bs):
            return " & ".join(f"GF {_wrap(b)}" if isinstance(b, (And, Or)) else f"GF {b}" for b in bs) or "true"
        return f"{side(self.premises)} -> {side(self.guarantees)}"


@dataclass(frozen=True)
class Bundle:
    """A lasso requirement: its cycle meets every ``visit`` set and no ``avoid`` set."""

    visit: tuple[BoolCombo, ...]
    avoid: tuple[BoolCombo, ...]


# --- parser -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(->|GF|[()!&|]|[A-Za-z_][A-Za-z0-9_.]*)")
_TEMPORAL = {"G", "F", "X", "U", "W", "R", "M"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos
            while text[j].isspace():
                j += 1
            raise SpecSyntaxError(f"unexpected character {text[j]!r}", j, text)
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    toks.append(("<end>", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def pos(self) -> int:
        return self.toks[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            self.fail(f"expected {expected!r} but found {tok!r}")
        self.i += 1
        return tok

    def fail(self, msg: str):
        raise SpecSyntaxError(msg, self.pos(), self.text)

    def spec(self) -> Gr1Spec:
        prem = self.side()
        self.take("->")
        guar = self.side()
        if self.peek() != "<end>":
            self.fail(f"unexpected {self.peek()!r} after the guarantee list")
        return Gr1Spec(tuple(prem), tuple(guar))

    def side(self) -> list:
        if self.peek() == "true":
            self.take()
            return []
        items = [self.gf()]
        while self.peek() == "&":
            self.take()
            items.append(self.gf())
        return items

    def gf(self):
        if self.peek() != "GF":
            if self.peek() in _TEMPORAL:
                self.fail("only conjunctions of GF-objectives are supported (general LTL is out of scope)")
            self.fail(f"expected 'GF' but found {self.peek()!r}")
        self.take()
        return self.primary()

    def expr(self):
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.primary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.primary())
        return left

    def primary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.primary())
        if tok == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        if tok == "GF" or tok in _TEMPORAL:
            self.fail("temporal operators may not be nested inside a Boolean condition")
        if tok in ("->", ")", "&", "|", "<end>"):
            self.fail(f"expected a proposition but found {tok!r}")
        self.take()
        return Atom(tok)


def parse_gr1(text: str) -> Gr1Spec:
    return _Parser(text).spec()


def parse_bool(text: str) -> BoolCombo:
    p = _Parser(text)
    e = p.expr()
    if p.peek() != "<end>":
        p.fail(f"unexpected {p.peek()!r}")
    return e


# --- semantics ----------------------------------------------------------------

def check_atoms(g: Game, spec: Gr1Spec) -> None:
    unknown = spec.atoms() - g.propositions
    if unknown:
        raise ValueError(f"unknown propositions {sorted(unknown)}")


def sat_states(g: Game, b: BoolCombo) -> frozenset[int]:
    unknown = b.atoms() - g.propositions
    if unknown:
        raise ValueError(f"unknown propositions {sorted(unknown)}")
    return frozenset(s for s in range(len(g.states)) if b.holds(g.labels[s]))


def negate_gr1(spec: Gr1Spec) -> list[Bundle]:
    """Requirement bundles whose disjunction is the negated objective:
    every premise recurs and guarantee r eventually stops."""
    return [Bundle(spec.premises, (theta,)) for theta in spec.guarantees]


def holds_on_lasso(g: Game, spec: Gr1Spec, lasso: Lasso) -> bool:
    cyc = set(lasso.cycle)
    seen = lambda b: any(b.holds(g.labels[s]) for s in cyc)  # noqa: E731
    if all(seen(p) for p in spec.premises):
        return all(seen(t) for t in spec.guarantees)
    return True


def holds_unrolled(g: Game, spec: Gr1Spec, lasso: Lasso, repeats: int = 10) -> bool:
    """Evaluate on the finite word stem·cycle^repeats: ``GF b`` is read as
    "b occurs again after every position of the first repeats-1 periods"."""
    word = list(lasso.stem) + list(lasso.cycle) * repeats
    horizon = len(lasso.stem) + len(lasso.cycle) * (repeats - 1)

    def gf(b):
        nxt = None
        ok = True
        for i in range(len(word) - 1, -1, -1):
            if b.holds(g.labels[word[i]]):
                nxt = i
            if i < horizon and nxt is None:
                ok = False
        return ok

    if all(gf(p) for p in spec.premises):
        return all(gf(t) for t in spec.guarantees)
    return True
