"""Formulas, schemata, parsing/printing, and axiomatic-system files.

Grammar (ASCII):

    formula  :=  disj [ '->' formula ]          right-associative
    disj     :=  conj { '\\/' conj }             left-associative
    conj     :=  fus  { '/\\' fus }              left-associative
    fus      :=  neg  { 'o' neg }                left-associative
    neg      :=  '~' neg | primary
    primary  :=  '(' formula ')' | INT | 't' | IDENT | QUOTED

Precedence: ~  >  o  >  /\\  >  \\/  >  ->, parentheses always accepted.
Integer literals are numerals: 0 and 1 are the primitive constants, n+1
expands to (n o 1) and -n to ~n, so the core only ever sees primitive
connectives.  ``t`` is the fusion-unit constant.  ``o`` and ``t`` are
reserved words.

In *query* formulas every identifier is a concrete atom.  In *system files*
every bare identifier is a metavariable; a quoted identifier ``'x'`` is a
concrete atom (needed for systems whose axioms are specific formulas).

System files are line-oriented, ``#`` starts a comment:

    system BCI
    axiom I  : p -> p
    rule  mp : p -> q, p |- q

A symmetric system says ``system NAME symmetric``; its axiom lines carry a
multiset (``axiom a1 : p, q``) and its rules have multisets on both sides.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from .multiset import FMultiset


class ParseError(Exception):
    """Raised on malformed input; carries the offending position."""

    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        place = ""
        if line is not None:
            place = f" (line {line})"
        elif pos is not None:
            place = f" (at position {pos})"
        super().__init__(message + place)
        self.pos = pos
        self.line = line


class MissingBindingError(Exception):
    """A substitution did not cover every metavariable of the schema."""


# -- abstract syntax ---------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Var:
    """A metavariable; occurs only in schemata."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str  # one of "0", "1", "t"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    body: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class Fusion:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class Conj:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True)
class Disj:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return _show(self)


Formula = Union[Atom, Var, Const, Neg, Imp, Fusion, Conj, Disj]

# a schema is a formula whose leaves may be metavariables
Schema = Formula

ZERO = Const("0")
ONE = Const("1")
TRUTH = Const("t")

RESERVED = {"o", "t"}

# numerals expand to fusion towers, so structural operations on them scale
# with the magnitude; parsing caps the literal range to keep that safe
MAX_NUMERAL = 200


def numeral(n: int) -> Formula:
    """The defined numeral for an integer: 0, 1, n+1 = n o 1, -n = ~n."""
    if n == 0:
        return ZERO
    negative = n < 0
    out: Formula = ONE
    for _ in range(abs(n) - 1):
        out = Fusion(out, ONE)
    return Neg(out) if negative else out


def numeral_value(f: Formula) -> Optional[int]:
    """Inverse of numeral() on exactly the canonical expansions."""
    if f == ZERO:
        return 0
    negative = False
    if isinstance(f, Neg):
        negative = True
        f = f.body
    count = 0
    while isinstance(f, Fusion) and f.right == ONE:
        count += 1
        f = f.left
    if f != ONE:
        return None
    value = count + 1
    return -value if negative else value


def _walk_nodes(f: Formula) -> Iterator[Formula]:
    """All nodes of the formula tree, iteratively (numerals can be deep)."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Neg):
            stack.append(node.body)
        elif isinstance(node, (Imp, Fusion, Conj, Disj)):
            stack.append(node.left)
            stack.append(node.right)


def formula_size(f: Formula) -> int:
    """Node count of the formula tree."""
    return sum(1 for _ in _walk_nodes(f))


def subformulas(f: Formula) -> set:
    return set(_walk_nodes(f))


def atoms(f: Formula) -> set[str]:
    return {node.name for node in _walk_nodes(f) if isinstance(node, Atom)}


def metavars(f: Formula) -> set[str]:
    return {node.name for node in _walk_nodes(f) if isinstance(node, Var)}


# -- printing ----------------------------------------------------------------

# precedence levels: -> 1, \/ 2, /\ 3, o 4, ~ 5, primary 6
_PREC = {Imp: 1, Disj: 2, Conj: 3, Fusion: 4, Neg: 5}


def _show(f: Formula, prec: int = 0, schema: bool = False) -> str:
    n = numeral_value(f)
    if n is not None:
        return str(n)
    if isinstance(f, Atom):
        return f"'{f.name}'" if schema else f.name
    if isinstance(f, (Var, Const)):
        return f.name
    if isinstance(f, Neg):
        s = "~" + _show(f.body, 5, schema)
        return f"({s})" if prec > 5 else s
    ops = {Imp: "->", Disj: "\\/", Conj: "/\\", Fusion: "o"}
    my = _PREC[type(f)]
    if isinstance(f, Imp):
        # grammar is right-associative, but nested implications print with
        # explicit parentheses for readability
        s = f"{_show(f.left, my + 1, schema)} {ops[Imp]} {_show(f.right, my + 1, schema)}"
    else:  # left-associative
        s = f"{_show(f.left, my, schema)} {ops[type(f)]} {_show(f.right, my + 1, schema)}"
    return f"({s})" if prec > my else s


def print_formula(f: Formula) -> str:
    return _show(f)


def print_schema(f: Formula) -> str:
    """Like print_formula, but concrete atoms are quoted (system-file form)."""
    return _show(f, schema=True)


def print_multiset(m: FMultiset, schema: bool = False) -> str:
    return "[" + ", ".join(_show(f, schema=schema) for f in m) + "]"


# -- tokenizer / parser ------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<lpar>\() | (?P<rpar>\)) |
        (?P<lbrack>\[) | (?P<rbrack>\]) |
        (?P<comma>,) | (?P<colon>:) |
        (?P<turnstile>\|-) |
        (?P<arrow>->) |
        (?P<conj>/\\) | (?P<disj>\\/) |
        (?P<neg>~) |
        (?P<int>-?\d+) |
        (?P<quoted>'[A-Za-z_][A-Za-z0-9_]*') |
        (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", pos=pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, schema: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.schema = schema

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", pos=len(self.text))
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None or tok[0] != kind:
            got = tok[1] if tok else "end of input"
            pos = tok[2] if tok else len(self.text)
            raise ParseError(f"expected {kind}, found {got!r}", pos=pos)
        return self.next()

    def at(self, kind: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == kind

    # formula := disj ['->' formula]
    def formula(self) -> Formula:
        left = self.disj()
        if self.at("arrow"):
            self.next()
            return Imp(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("disj"):
            self.next()
            f = Disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.fus()
        while self.at("conj"):
            self.next()
            f = Conj(f, self.fus())
        return f

    def fus(self) -> Formula:
        f = self.neg()
        while self.at("ident") and self.peek()[1] == "o":
            self.next()
            f = Fusion(f, self.neg())
        return f

    def neg(self) -> Formula:
        if self.at("neg"):
            self.next()
            return Neg(self.neg())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", pos=len(self.text))
        kind, value, pos = tok
        if kind == "lpar":
            self.next()
            f = self.formula()
            self.expect("rpar")
            return f
        if kind == "int":
            self.next()
            k = int(value)
            if abs(k) > MAX_NUMERAL:
                raise ParseError(
                    f"numeral {k} out of supported range (|n| <= {MAX_NUMERAL})",
                    pos=pos)
            return numeral(k)
        if kind == "quoted":
            self.next()
            return Atom(value[1:-1])
        if kind == "ident":
            if value == "o":
                raise ParseError("'o' is the fusion operator, not an atom", pos=pos)
            self.next()
            if value == "t":
                return TRUTH
            return Var(value) if self.schema else Atom(value)
        raise ParseError(f"unexpected token {value!r}", pos=pos)

    def formula_list(self) -> list[Formula]:
        if self.peek() is None:
            return []
        out = [self.formula()]
        while self.at("comma"):
            self.next()
            out.append(self.formula())
        return out

    def end(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected trailing token {tok[1]!r}", pos=tok[2])


def parse_formula(text: str, schema: bool = False) -> Formula:
    p = _Parser(text, schema)
    f = p.formula()
    p.end()
    return f


def parse_multiset(text: str, schema: bool = False) -> FMultiset:
    """Parse ``[f1, f2, ...]`` (brackets optional) into an FMultiset."""
    p = _Parser(text, schema)
    if p.at("lbrack"):
        p.next()
        if p.at("rbrack"):
            p.next()
            p.end()
            return FMultiset()
        items = p.formula_list()
        p.expect("rbrack")
    else:
        items = p.formula_list()
    p.end()
    return FMultiset(items)


# -- substitution and matching ------------------------------------------------


def substitute(schema: Formula, subst: Mapping[str, Formula]) -> Formula:
    """Homomorphically replace metavariables; total on covered schemata."""
    if isinstance(schema, Var):
        if schema.name not in subst:
            raise MissingBindingError(f"no binding for metavariable {schema.name}")
        return subst[schema.name]
    if isinstance(schema, (Atom, Const)):
        return schema
    if isinstance(schema, Neg):
        return Neg(substitute(schema.body, subst))
    ctor = type(schema)
    return ctor(substitute(schema.left, subst), substitute(schema.right, subst))


def match(schema: Formula, formula: Formula,
          subst: Optional[dict[str, Formula]] = None) -> Optional[dict[str, Formula]]:
    """One-sided matching: the unique subst with substitute(schema)=formula, or None."""
    out = dict(subst) if subst else {}

    def go(s: Formula, f: Formula) -> bool:
        if isinstance(s, Var):
            if s.name in out:
                return out[s.name] == f
            out[s.name] = f
            return True
        if isinstance(s, (Atom, Const)):
            return s == f
        if type(s) is not type(f):
            return False
        if isinstance(s, Neg):
            return go(s.body, f.body)
        return go(s.left, f.left) and go(s.right, f.right)

    return out if go(schema, formula) else None


def match_multiset(schemas: FMultiset, formulas: FMultiset,
                   subst: Optional[dict[str, Formula]] = None) -> Iterator[dict[str, Formula]]:
    """All substitutions matching a schema multiset onto a formula multiset exactly."""
    if schemas.size != formulas.size:
        return
    base = dict(subst) if subst else {}

    slist = list(schemas)

    def go(i: int, remaining: FMultiset, sigma: dict) -> Iterator[dict]:
        if i == len(slist):
            yield dict(sigma)
            return
        for f in remaining.distinct():
            s2 = match(slist[i], f, sigma)
            if s2 is not None:
                yield from go(i + 1, remaining - FMultiset([f]), s2)

    yield from go(0, formulas, base)


def match_into(schemas: FMultiset, pool: FMultiset,
               subst: Optional[dict[str, Formula]] = None
               ) -> Iterator[tuple[dict[str, Formula], FMultiset]]:
    """All (subst, consumed) with consumed <= pool and substitute(schemas) = consumed."""
    base = dict(subst) if subst else {}
    slist = list(schemas)

    def go(i: int, remaining: FMultiset, sigma: dict, used: list) -> Iterator:
        if i == len(slist):
            yield dict(sigma), FMultiset(used)
            return
        seen = set()
        for f in remaining.distinct():
            if f in seen:
                continue
            seen.add(f)
            s2 = match(slist[i], f, sigma)
            if s2 is not None:
                used.append(f)
                yield from go(i + 1, remaining - FMultiset([f]), s2, used)
                used.pop()

    yield from go(0, pool, base, [])


def substitute_partial(schema: Formula, subst: Mapping[str, Formula]) -> Formula:
    """Like substitute, but unbound metavariables are left in place."""
    if isinstance(schema, Var):
        return subst.get(schema.name, schema)
    if isinstance(schema, (Atom, Const)):
        return schema
    if isinstance(schema, Neg):
        return Neg(substitute_partial(schema.body, subst))
    ctor = type(schema)
    return ctor(substitute_partial(schema.left, subst),
                substitute_partial(schema.right, subst))


def unify(a: Formula, b: Formula) -> Optional[dict[str, Formula]]:
    """Most general unifier of two schemata (shared metavariable namespace)."""
    subst: dict[str, Formula] = {}

    def walk(f: Formula) -> Formula:
        while isinstance(f, Var) and f.name in subst:
            f = subst[f.name]
        return f

    def occurs(name: str, f: Formula) -> bool:
        f = walk(f)
        if isinstance(f, Var):
            return f.name == name
        if isinstance(f, Neg):
            return occurs(name, f.body)
        if isinstance(f, (Imp, Fusion, Conj, Disj)):
            return occurs(name, f.left) or occurs(name, f.right)
        return False

    def go(x: Formula, y: Formula) -> bool:
        x, y = walk(x), walk(y)
        if isinstance(x, Var):
            if isinstance(y, Var) and y.name == x.name:
                return True
            if occurs(x.name, y):
                return False
            subst[x.name] = y
            return True
        if isinstance(y, Var):
            return go(y, x)
        if type(x) is not type(y):
            return False
        if isinstance(x, (Atom, Const)):
            return x == y
        if isinstance(x, Neg):
            return go(x.body, y.body)
        return go(x.left, y.left) and go(x.right, y.right)

    if not go(a, b):
        return None

    def resolve(f: Formula) -> Formula:
        f = walk(f)
        if isinstance(f, (Var, Atom, Const)):
            return f
        if isinstance(f, Neg):
            return Neg(resolve(f.body))
        return type(f)(resolve(f.left), resolve(f.right))

    return {name: resolve(Var(name)) for name in subst}


def alpha_variant(schema_a: Formula, schema_b: Formula) -> bool:
    """Whether two schemata differ only by a renaming of metavariables."""
    s1 = match(schema_a, _freeze(schema_b))
    s2 = match(schema_b, _freeze(schema_a))
    return s1 is not None and s2 is not None


def _freeze(schema: Formula) -> Formula:
    # metavariables become atoms with reserved-ish names, for variant checks
    if isinstance(schema, Var):
        return Atom("\x00" + schema.name)
    if isinstance(schema, (Atom, Const)):
        return schema
    if isinstance(schema, Neg):
        return Neg(_freeze(schema.body))
    return type(schema)(_freeze(schema.left), _freeze(schema.right))


# -- consecutions and axiomatic systems ---------------------------------------


@dataclass(frozen=True)
class Consecution:
    """A premise multiset and a single conclusion (single-conclusion form)."""

    left: FMultiset
    right: Formula

    def __str__(self) -> str:
        return f"{print_multiset(self.left, schema=True)} |- {print_schema(self.right)}"


@dataclass(frozen=True)
class SymConsecution:
    """A premise multiset and a conclusion multiset (symmetric form)."""

    left: FMultiset
    right: FMultiset

    def __str__(self) -> str:
        return (f"{print_multiset(self.left, schema=True)} |- "
                f"{print_multiset(self.right, schema=True)}")


@dataclass(frozen=True)
class NamedRule:
    name: str
    consecution: Consecution | SymConsecution

    @property
    def left(self) -> FMultiset:
        return self.consecution.left

    @property
    def right(self):
        return self.consecution.right

    @property
    def is_axiom(self) -> bool:
        return self.consecution.left.is_empty()


class AxiomaticSystem:
    """A named set of consecution schemata; axioms have empty left side."""

    def __init__(self, name: str, rules: list[NamedRule], symmetric: bool = False):
        self.name = name
        self.rules = tuple(rules)
        self.symmetric = symmetric
        seen = set()
        for r in rules:
            if r.name in seen:
                raise ValueError(f"duplicate rule name {r.name!r} in system {name}")
            seen.add(r.name)
        self._by_name = {r.name: r for r in rules}
        self._check_name_discipline()

    def _check_name_discipline(self) -> None:
        var_names: set[str] = set()
        atom_names: set[str] = set()
        for r in self.rules:
            parts = list(r.left)
            rhs = r.right
            parts.extend(rhs if isinstance(rhs, FMultiset) else [rhs])
            for f in parts:
                var_names |= metavars(f)
                atom_names |= atoms(f)
        clash = var_names & atom_names
        if clash:
            raise ValueError(
                f"system {self.name}: names used both as metavariable and atom: "
                + ", ".join(sorted(clash))
            )

    def __repr__(self) -> str:
        kind = "symmetric" if self.symmetric else "single-conclusion"
        return f"AxiomaticSystem({self.name!r}, {len(self.rules)} rules, {kind})"

    def get(self, name: str) -> NamedRule:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"system {self.name} has no rule named {name!r}") from None

    @property
    def axioms(self) -> list[NamedRule]:
        return [r for r in self.rules if r.is_axiom]

    @property
    def inference_rules(self) -> list[NamedRule]:
        return [r for r in self.rules if not r.is_axiom]

    def axiom_instance(self, f: Formula) -> Optional[tuple[str, dict[str, Formula]]]:
        """The first axiom schema (with its substitution) that ``f`` instantiates."""
        for ax in self.axioms:
            rhs = ax.right
            if isinstance(rhs, FMultiset):
                continue  # symmetric axioms are not single-formula instances
            sigma = match(rhs, f)
            if sigma is not None:
                return ax.name, sigma
        return None

    def is_axiom_instance(self, f: Formula) -> bool:
        return self.axiom_instance(f) is not None

    def lifted(self) -> "AxiomaticSystem":
        """The symmetric view: each rule Γ |- φ becomes Γ |- [φ]."""
        if self.symmetric:
            return self
        lifted_rules = [
            NamedRule(r.name, SymConsecution(r.left, FMultiset([r.right])))
            for r in self.rules
        ]
        return AxiomaticSystem(self.name, lifted_rules, symmetric=True)


# -- system files --------------------------------------------------------------


def parse_system(text: str) -> AxiomaticSystem:
    name = None
    symmetric = False
    rules: list[NamedRule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, _, rest = line.partition(" ")
            if head == "system":
                fields = rest.split()
                if not fields or len(fields) > 2:
                    raise ParseError("expected: system NAME [symmetric]")
                name = fields[0]
                if len(fields) == 2:
                    if fields[1] != "symmetric":
                        raise ParseError(f"unknown system modifier {fields[1]!r}")
                    symmetric = True
            elif head in ("axiom", "rule"):
                if name is None:
                    raise ParseError("missing 'system NAME' header line")
                rule_name, sep, body = rest.partition(":")
                if not sep:
                    raise ParseError(f"expected ':' in {head} line")
                rule_name = rule_name.strip()
                if not rule_name:
                    raise ParseError(f"{head} line is missing a name")
                rules.append(_parse_rule_body(head, rule_name, body.strip(), symmetric))
            else:
                raise ParseError(f"unknown directive {head!r}")
        except ParseError as e:
            raise ParseError(str(e), line=lineno) from None
    if name is None:
        raise ParseError("missing 'system NAME' header line")
    return AxiomaticSystem(name, rules, symmetric=symmetric)


def _parse_rule_body(kind: str, rule_name: str, body: str, symmetric: bool) -> NamedRule:
    if kind == "axiom":
        if symmetric:
            right = parse_multiset(body, schema=True)
            return NamedRule(rule_name, SymConsecution(FMultiset(), right))
        f = parse_formula(body, schema=True)
        return NamedRule(rule_name, Consecution(FMultiset(), f))
    lhs, sep, rhs = body.partition("|-")
    if not sep:
        raise ParseError("rule line needs '|-'")
    left = parse_multiset(lhs.strip(), schema=True)
    if left.is_empty():
        raise ParseError("a rule needs at least one premise; use 'axiom' instead")
    if symmetric:
        return NamedRule(rule_name, SymConsecution(left, parse_multiset(rhs.strip(), schema=True)))
    return NamedRule(rule_name, Consecution(left, parse_formula(rhs.strip(), schema=True)))


def load_system(path) -> AxiomaticSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_system(fh.read())


def print_system(system: AxiomaticSystem) -> str:
    header = f"system {system.name} symmetric" if system.symmetric else f"system {system.name}"
    lines = [header]
    width = max((len(r.name) for r in system.rules), default=0)
    for r in system.rules:
        label = "axiom" if r.is_axiom else "rule "
        rhs = r.right
        if r.is_axiom:
            body = (print_multiset(rhs, schema=True)
                    if isinstance(rhs, FMultiset) else print_schema(rhs))
        else:
            rstr = (print_multiset(rhs, schema=True)
                    if isinstance(rhs, FMultiset) else print_schema(rhs))
            lefts = ", ".join(print_schema(f) for f in r.left)
            body = f"{lefts} |- {rstr}"
        lines.append(f"{label} {r.name:<{width}} : {body}")
    return "\n".join(lines) + "\n"
