"""Trimodal formula language and its Boolean fragment.

The primitive basis is negation and disjunction plus three modal node
kinds: a belief operator ``B``, a necessity operator ``[]`` and a
two-place conditional ``>``. Conjunction, material implication,
biconditional and the two constants are derived constructors that expand
into the basis, so structural equality is equality after expansion. The
constants expand over the reserved atom ``a0``.

Concrete syntax (recursive descent, all binary operators
right-associative, loosest to tightest):

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := or  ("->" or)*
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "B" unary | "[]" unary | atom
             | "(" formula ")" | "(" formula ">" formula ")"

The conditional appears only inside parentheses. Atom identifiers match
``[a-z][a-z0-9_]*``. Schema templates additionally use uppercase
metavariables: PHI, PSI, CHI range over Boolean formulas only; ALPHA,
BETA, GAMMA range over arbitrary formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "Atom", "Not", "Or", "Believes", "Box", "Cond", "MetaAtom", "Formula",
    "And", "Implies", "Iff", "Top", "Bottom", "RESERVED_ATOM",
    "METAVARIABLES", "mv", "Schema", "ParseError", "InstantiationError",
    "TautologyBudgetError", "parse", "parse_schema_text", "print_formula",
    "is_boolean", "atom_names", "metavariable_names", "opaque_atoms",
    "is_tautology", "instantiate",
]


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class Not:
    child: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Believes:
    child: "Formula"


@dataclass(frozen=True, slots=True)
class Box:
    child: "Formula"


@dataclass(frozen=True, slots=True)
class Cond:
    antecedent: "Formula"
    consequent: "Formula"


@dataclass(frozen=True, slots=True)
class MetaAtom:
    """Schema placeholder. ``boolean`` marks the Boolean-only sort."""

    name: str
    boolean: bool = True


Formula = Union[Atom, Not, Or, Believes, Box, Cond, MetaAtom]

RESERVED_ATOM = "a0"

# Metavariable sorts: True = may only be instantiated with Boolean
# formulas (the phi/psi/chi of the belief-change schemas), False = any
# formula (the alpha/beta/gamma of the base logic).
METAVARIABLES = {
    "PHI": True,
    "PSI": True,
    "CHI": True,
    "ALPHA": False,
    "BETA": False,
    "GAMMA": False,
}


def mv(name: str) -> MetaAtom:
    return MetaAtom(name, METAVARIABLES[name])


def And(left: Formula, right: Formula) -> Formula:
    return Not(Or(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Or(Not(left), right)


def Iff(left: Formula, right: Formula) -> Formula:
    return And(Implies(left, right), Implies(right, left))


def Top() -> Formula:
    return Or(Atom(RESERVED_ATOM), Not(Atom(RESERVED_ATOM)))


def Bottom() -> Formula:
    return And(Atom(RESERVED_ATOM), Not(Atom(RESERVED_ATOM)))


def is_boolean(f: Formula) -> bool:
    """True iff ``f`` contains no B, [] or > node.

    Boolean-sorted metavariables count as Boolean leaves (they can only
    ever be replaced by Boolean formulas); general-sorted ones do not.
    """
    match f:
        case Atom():
            return True
        case MetaAtom(_, boolean):
            return boolean
        case Not(child):
            return is_boolean(child)
        case Or(left, right):
            return is_boolean(left) and is_boolean(right)
        case _:
            return False


def atom_names(f: Formula) -> set[str]:
    match f:
        case Atom(name):
            return {name}
        case MetaAtom():
            return set()
        case Not(child) | Believes(child) | Box(child):
            return atom_names(child)
        case Or(left, right):
            return atom_names(left) | atom_names(right)
        case Cond(antecedent, consequent):
            return atom_names(antecedent) | atom_names(consequent)
    raise TypeError(f"not a formula node: {f!r}")


def metavariable_names(f: Formula) -> set[str]:
    match f:
        case MetaAtom(name, _):
            return {name}
        case Atom():
            return set()
        case Not(child) | Believes(child) | Box(child):
            return metavariable_names(child)
        case Or(left, right):
            return metavariable_names(left) | metavariable_names(right)
        case Cond(antecedent, consequent):
            return metavariable_names(antecedent) | metavariable_names(consequent)
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_IDENT_START = "abcdefghijklmnopqrstuvwxyz"
_IDENT_CONT = _IDENT_START + "0123456789_"
_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_UPPER_CONT = _UPPER + "0123456789_"


def _tokenize(text: str, schema_mode: bool) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "(":
            tokens.append(("LPAREN", c, i)); i += 1
        elif c == ")":
            tokens.append(("RPAREN", c, i)); i += 1
        elif c == "~":
            tokens.append(("NOT", c, i)); i += 1
        elif c == "&":
            tokens.append(("AND", c, i)); i += 1
        elif c == "|":
            tokens.append(("OR", c, i)); i += 1
        elif c == ">":
            tokens.append(("GT", c, i)); i += 1
        elif c == "-":
            if text[i:i + 2] != "->":
                raise ParseError("unknown operator '-'", i)
            tokens.append(("IMP", "->", i)); i += 2
        elif c == "<":
            if text[i:i + 3] != "<->":
                raise ParseError("unknown operator '<'", i)
            tokens.append(("IFF", "<->", i)); i += 3
        elif c == "[":
            if text[i:i + 2] != "[]":
                raise ParseError("unknown operator '['", i)
            tokens.append(("BOX", "[]", i)); i += 2
        elif c in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            tokens.append(("IDENT", text[i:j], i)); i = j
        elif c in _UPPER:
            j = i + 1
            while j < n and text[j] in _UPPER_CONT:
                j += 1
            word = text[i:j]
            if word == "B":
                tokens.append(("B", word, i))
            elif schema_mode and word in METAVARIABLES:
                tokens.append(("METAVAR", word, i))
            else:
                raise ParseError(f"unknown identifier {word!r}", i)
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, schema_mode: bool):
        self.tokens = _tokenize(text, schema_mode)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, found {tok[1]!r}" if tok[1]
                             else f"expected {what}, found end of input", tok[2])
        return tok

    def formula(self) -> Formula:
        return self._chain("IFF", Iff,
                           lambda: self._chain("IMP", Implies,
                           lambda: self._chain("OR", Or,
                           lambda: self._chain("AND", And, self.unary))))

    def _chain(self, kind, build, sub) -> Formula:
        parts = [sub()]
        while self.peek()[0] == kind:
            self.take()
            parts.append(sub())
        f = parts[-1]
        for g in reversed(parts[:-1]):
            f = build(g, f)
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "NOT":
            return Not(self.unary())
        if kind == "B":
            return Believes(self.unary())
        if kind == "BOX":
            return Box(self.unary())
        if kind == "IDENT":
            return Atom(value)
        if kind == "METAVAR":
            return mv(value)
        if kind == "LPAREN":
            f = self.formula()
            if self.peek()[0] == "GT":
                self.take()
                g = self.formula()
                self.expect("RPAREN", "')' closing conditional")
                return Cond(f, g)
            self.expect("RPAREN", "')'")
            return f
        if kind == "RPAREN":
            raise ParseError("unbalanced ')'", pos)
        raise ParseError(f"expected a formula, found {value!r}" if value
                         else "expected a formula, found end of input", pos)


def parse(text: str) -> Formula:
    """Parse concrete syntax into an AST. Inverse of print_formula."""
    p = _Parser(text, schema_mode=False)
    f = p.formula()
    kind, value, pos = p.peek()
    if kind != "END":
        raise ParseError(f"trailing input starting with {value!r}", pos)
    return f


def parse_schema_text(text: str) -> Formula:
    """Like parse, but uppercase metavariables are allowed as leaves."""
    p = _Parser(text, schema_mode=True)
    f = p.formula()
    kind, value, pos = p.peek()
    if kind != "END":
        raise ParseError(f"trailing input starting with {value!r}", pos)
    return f


# ---------------------------------------------------------------------------
# printing

_LVL_IFF, _LVL_IMP, _LVL_OR, _LVL_AND, _LVL_UNARY, _LVL_ATOM = 1, 2, 3, 4, 5, 6


def _match_implies(f: Formula):
    match f:
        case Or(Not(a), b):
            return a, b
    return None


def _match_and(f: Formula):
    match f:
        case Not(Or(Not(a), Not(b))):
            return a, b
    return None


def _match_iff(f: Formula):
    conj = _match_and(f)
    if conj is None:
        return None
    fwd = _match_implies(conj[0])
    bwd = _match_implies(conj[1])
    if fwd is not None and bwd is not None and fwd == (bwd[1], bwd[0]):
        return fwd
    return None


def _render(f: Formula, min_level: int) -> str:
    sugar = _match_iff(f)
    if sugar is not None:
        a, b = sugar
        s, level = f"{_render(a, _LVL_IFF + 1)} <-> {_render(b, _LVL_IFF)}", _LVL_IFF
    elif (sugar := _match_and(f)) is not None:
        a, b = sugar
        s, level = f"{_render(a, _LVL_AND + 1)} & {_render(b, _LVL_AND)}", _LVL_AND
    elif (sugar := _match_implies(f)) is not None:
        a, b = sugar
        s, level = f"{_render(a, _LVL_IMP + 1)} -> {_render(b, _LVL_IMP)}", _LVL_IMP
    else:
        match f:
            case Atom(name) | MetaAtom(name, _):
                s, level = name, _LVL_ATOM
            case Not(child):
                s, level = "~" + _render(child, _LVL_UNARY), _LVL_UNARY
            case Box(child):
                s, level = "[]" + _render(child, _LVL_UNARY), _LVL_UNARY
            case Believes(child):
                inner = _render(child, _LVL_UNARY)
                s = "B" + inner if inner.startswith("(") else "B " + inner
                level = _LVL_UNARY
            case Cond(antecedent, consequent):
                s = f"({_render(antecedent, _LVL_IFF)} > {_render(consequent, _LVL_IFF)})"
                level = _LVL_ATOM
            case Or(left, right):
                s = f"{_render(left, _LVL_OR + 1)} | {_render(right, _LVL_OR)}"
                level = _LVL_OR
            case _:
                raise TypeError(f"not a formula node: {f!r}")
    if level < min_level:
        return f"({s})"
    return s


def print_formula(f: Formula) -> str:
    """Minimal-parenthesization text that re-parses to ``f``.

    Expansions of &, -> and <-> are recognized and printed back in sugared
    form; conditionals always carry their mandatory parentheses.
    """
    return _render(f, 0)


# ---------------------------------------------------------------------------
# tautology oracle


class TautologyBudgetError(Exception):
    """Raised when a tautology check would need too many table rows."""


def opaque_atoms(f: Formula) -> list[Formula]:
    """Maximal modal subformulas plus atoms/metavariables, in
    first-occurrence order. These are the propositional unknowns of the
    modal-opaque truth table."""
    found: list[Formula] = []
    seen: set[Formula] = set()

    def walk(g: Formula) -> None:
        match g:
            case Not(child):
                walk(child)
            case Or(left, right):
                walk(left)
                walk(right)
            case _:
                if g not in seen:
                    seen.add(g)
                    found.append(g)

    walk(f)
    return found


def is_tautology(f: Formula, max_atoms: int = 20) -> bool:
    """Truth-table check treating B/[]/> subformulas as opaque atoms.

    This decides "has the form of a classical tautology", which is the
    only sense of tautology the base logic's proof rule needs.
    """
    leaves = opaque_atoms(f)
    if len(leaves) > max_atoms:
        raise TautologyBudgetError(
            f"{len(leaves)} opaque atoms exceed the bound of {max_atoms}")
    index = {leaf: i for i, leaf in enumerate(leaves)}

    def ev(g: Formula, row: int) -> bool:
        match g:
            case Not(child):
                return not ev(child, row)
            case Or(left, right):
                return ev(left, row) or ev(right, row)
            case _:
                return bool(row >> index[g] & 1)

    return all(ev(f, row) for row in range(1 << len(leaves)))


# ---------------------------------------------------------------------------
# schemas


class InstantiationError(ValueError):
    pass


@dataclass(frozen=True)
class Schema:
    """A formula template over metavariables, named by its axiom id."""

    id: str
    template: Formula

    def metavariables(self) -> set[str]:
        return metavariable_names(self.template)


def _substitute(f: Formula, binding: dict[str, Formula]) -> Formula:
    match f:
        case MetaAtom(name, _):
            return binding[name]
        case Atom():
            return f
        case Not(child):
            return Not(_substitute(child, binding))
        case Or(left, right):
            return Or(_substitute(left, binding), _substitute(right, binding))
        case Believes(child):
            return Believes(_substitute(child, binding))
        case Box(child):
            return Box(_substitute(child, binding))
        case Cond(antecedent, consequent):
            return Cond(_substitute(antecedent, binding),
                        _substitute(consequent, binding))
    raise TypeError(f"not a formula node: {f!r}")


def instantiate(s: Schema, binding: dict[str, Formula]) -> Formula:
    """Uniform substitution of ``binding`` into the schema template.

    Boolean-sorted metavariables only accept Boolean formulas; the
    general-sorted ones accept anything.
    """
    needed = s.metavariables()
    missing = needed - binding.keys()
    if missing:
        raise InstantiationError(
            f"schema {s.id}: missing binding for {', '.join(sorted(missing))}")
    for name in sorted(needed):
        if METAVARIABLES.get(name, True) and not is_boolean(binding[name]):
            raise InstantiationError(
                f"schema {s.id}: {name} is Boolean-only but bound to "
                f"{print_formula(binding[name])!r}")
    return _substitute(s.template, binding)
