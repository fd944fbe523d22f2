"""Symmetric consecutions: multiset derivations, bounded derivation search,
symmetrization of asymmetric oracles, and proof-tree extraction.

A derivation of D from G in a symmetric system is a sequence of multisets
starting at G in which every step replaces an instantiated rule's left
multiset by its right multiset, in context:

    steps[i] = (steps[i-1] - P) + P'      for a rule instance P |- P'
    with P <= steps[i-1].

Axioms are rules with empty left side, so they may fire in any context.  The
derivation establishes D plainly when D <= last step, and *relevantly* when
the last step equals D: nothing was derived and then dropped.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Mapping, Optional

from .multiset import FMultiset
from .oracles import (
    FAILS,
    HOLDS,
    UNKNOWN,
    ConsequenceOracle,
    SymmetricOracle,
    Verdict,
)
from .syntax import (
    AxiomaticSystem,
    Formula,
    NamedRule,
    formula_size,
    match_into,
    match_multiset,
    parse_formula,
    parse_multiset,
    print_formula,
    print_multiset,
    subformulas,
    substitute,
)
from .treeproof import AxiomJust, PremiseJust, ProofTree, RuleJust


class DerivationVerdict(IntEnum):
    INVALID = 0
    PLAIN = 1
    RELEVANT = 2

    def __str__(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class RuleApp:
    rule: str
    subst: Optional[Mapping[str, Formula]] = None


@dataclass(frozen=True)
class Derivation:
    """A nonempty multiset sequence with one rule application per transition."""

    steps: tuple[FMultiset, ...]
    step_rules: tuple[RuleApp, ...] = ()

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a derivation has at least one step")
        if len(self.step_rules) != len(self.steps) - 1:
            raise ValueError("need exactly one rule application per transition")

    def __str__(self) -> str:
        parts = [print_multiset(self.steps[0])]
        for app, step in zip(self.step_rules, self.steps[1:]):
            parts.append(f"--{app.rule}--> {print_multiset(step)}")
        return " ".join(parts)


# -- checking -------------------------------------------------------------------


def _infer_step(rule: NamedRule, prev: FMultiset, cur: FMultiset,
                stored: Optional[Mapping[str, Formula]]) -> Optional[dict]:
    """A substitution under which the rule transforms prev into cur, if any."""
    right = rule.right
    right_ms = right if isinstance(right, FMultiset) else FMultiset([right])
    if stored is not None:
        sigma = dict(stored)
        try:
            consumed = FMultiset(substitute(s, sigma) for s in rule.left)
            produced = FMultiset(substitute(s, sigma) for s in right_ms)
        except Exception:
            return None
        if consumed <= prev and cur == (prev - consumed) + produced:
            return sigma
        return None
    for sigma, consumed in match_into(rule.left, prev):
        rest = prev - consumed
        if not (rest <= cur):
            continue
        needed = cur - rest
        for sigma2 in match_multiset(right_ms, needed, sigma):
            produced = FMultiset(substitute(s, sigma2) for s in right_ms)
            if cur == rest + produced:
                return sigma2
    return None


def check_derivation(derivation: Derivation, system: AxiomaticSystem,
                     premises: FMultiset, conclusions: FMultiset) -> DerivationVerdict:
    """Validate every transition and classify the derivation.

    PLAIN: starts at the premises, every transition is a legal rule
    application, and the conclusion multiset is contained in the last step.
    RELEVANT: additionally the last step *equals* the conclusion multiset.
    """
    sym = system.lifted()
    if derivation.steps[0] != premises:
        return DerivationVerdict.INVALID
    for i, app in enumerate(derivation.step_rules, start=1):
        try:
            rule = sym.get(app.rule)
        except KeyError:
            return DerivationVerdict.INVALID
        sigma = _infer_step(rule, derivation.steps[i - 1], derivation.steps[i],
                            app.subst)
        if sigma is None:
            return DerivationVerdict.INVALID
    last = derivation.steps[-1]
    if last == conclusions:
        return DerivationVerdict.RELEVANT
    if conclusions <= last:
        return DerivationVerdict.PLAIN
    return DerivationVerdict.INVALID


# -- bounded search ----------------------------------------------------------------


@dataclass
class DeriveResult:
    derivation: Optional[Derivation]
    status: str  # "found" | "exhausted" | "truncated"
    pruned_by: frozenset = frozenset()

    @property
    def found(self) -> bool:
        return self.derivation is not None


def derive_search(system: AxiomaticSystem, premises: FMultiset,
                  conclusions: FMultiset, max_steps: int = 12,
                  max_formula_size: int = 12,
                  max_multiset_size: Optional[int] = None,
                  max_states: int = 200_000) -> DeriveResult:
    """Breadth-first search for a relevant derivation of the conclusions.

    States are multisets, deduplicated, explored level by level.  The search
    space is the fragment in which every formula has size at most
    ``max_formula_size``, metavariables introduced by a rule's right side
    (axiom instantiations in particular) range over the subformula closure of
    the endpoints, and intermediate multisets stay within
    ``max_multiset_size``.  ``exhausted`` means the whole fragment was
    explored without finding the target: a genuine negative for the fragment;
    ``pruned_by`` records which caps actually cut anything off.  ``truncated``
    means the step or state budget ran out first and decides nothing.
    """
    sym = system.lifted()
    if max_multiset_size is None:
        max_multiset_size = max(premises.size, conclusions.size) + 2

    universe: set[Formula] = set()
    for f in list(premises) + list(conclusions):
        universe |= subformulas(f)
    cands = sorted((f for f in universe if formula_size(f) <= max_formula_size),
                   key=lambda f: (formula_size(f), str(f)))

    pruned: set[str] = set()
    visited = {premises}
    parent: dict[FMultiset, tuple[FMultiset, RuleApp]] = {}
    frontier = deque([premises])
    depth = 0
    found = premises == conclusions
    truncated = False
    while frontier and not found and not truncated:
        if depth >= max_steps:
            pruned.add("steps")
            truncated = True
            break
        depth += 1
        for _ in range(len(frontier)):
            state = frontier.popleft()
            for nxt, app in _moves(sym, state, cands, max_formula_size, pruned):
                if nxt.size > max_multiset_size:
                    pruned.add("multiset-size")
                    continue
                if nxt in visited:
                    continue
                if len(visited) >= max_states:
                    pruned.add("states")
                    truncated = True
                    break
                visited.add(nxt)
                parent[nxt] = (state, app)
                if nxt == conclusions:
                    found = True
                frontier.append(nxt)
            if found or truncated:
                break

    if found:
        steps = [conclusions]
        apps: list[RuleApp] = []
        cur = conclusions
        while cur != premises:
            prev, app = parent[cur]
            apps.append(app)
            steps.append(prev)
            cur = prev
        steps.reverse()
        apps.reverse()
        return DeriveResult(Derivation(tuple(steps), tuple(apps)), "found")
    status = "truncated" if truncated else "exhausted"
    return DeriveResult(None, status, frozenset(pruned))


def _moves(sym: AxiomaticSystem, state: FMultiset, cands: list[Formula],
           max_formula_size: int, pruned: set) -> Iterator[tuple[FMultiset, RuleApp]]:
    import itertools

    for rule in sym.rules:
        right_ms = rule.right
        for sigma, consumed in match_into(rule.left, state):
            free = sorted({v for s in right_ms for v in _schema_vars(s)} - set(sigma))
            for values in itertools.product(cands, repeat=len(free)):
                full = dict(sigma)
                full.update(zip(free, values))
                produced = FMultiset(substitute(s, full) for s in right_ms)
                if any(formula_size(f) > max_formula_size for f in produced.support):
                    pruned.add("formula-size")
                    continue
                yield (state - consumed) + produced, RuleApp(rule.name, full)


def _schema_vars(schema: Formula) -> set[str]:
    from .syntax import metavars

    return metavars(schema)


# -- symmetrization ------------------------------------------------------------------


def _ordered_partitions(gamma: FMultiset, n: int) -> Iterator[tuple[FMultiset, ...]]:
    elems = gamma.distinct()

    def compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, slots - 1):
                yield (first,) + rest

    def rec(i: int, parts: list[dict]) -> Iterator[tuple[FMultiset, ...]]:
        if i == len(elems):
            yield tuple(FMultiset.from_counts(p) for p in parts)
            return
        x = elems[i]
        for split in compositions(gamma.count(x), n):
            for j, c in enumerate(split):
                if c:
                    parts[j][x] = c
            yield from rec(i + 1, parts)
            for j in range(n):
                parts[j].pop(x, None)

    yield from rec(0, [dict() for _ in range(n)])


def partition_count(gamma: FMultiset, n: int) -> int:
    total = 1
    for x in gamma.support:
        total *= math.comb(gamma.count(x) + n - 1, n - 1)
    return total


def symmetrize_query(oracle: ConsequenceOracle, premises: FMultiset,
                     conclusions: FMultiset, partition_cap: int = 10 ** 6) -> Verdict:
    """Decide the symmetrization of an asymmetric oracle at one consecution.

    Nonempty conclusions: some ordered partition of the premises proves the
    conclusions componentwise.  For oracles declared monotone_contractive the
    componentwise rule uses the whole premise multiset for every conclusion
    (the appropriate definition for that case).  Empty conclusions delegate to
    the oracle's entails-every-theorem test.  Exceeding the partition cap is
    reported as UNKNOWN, never guessed.
    """
    if conclusions.is_empty():
        return oracle.entails_all_theorems(premises)
    targets = list(conclusions)
    if oracle.monotone_contractive:
        out = HOLDS
        for chi in targets:
            v = oracle.entails(premises, chi)
            if v is FAILS:
                return FAILS
            if v is UNKNOWN:
                out = UNKNOWN
        return out
    n = len(targets)
    if partition_count(premises, n) > partition_cap:
        return UNKNOWN
    blocked = False
    for parts in _ordered_partitions(premises, n):
        all_hold = True
        none_failed = True
        for part, chi in zip(parts, targets):
            v = oracle.entails(part, chi)
            if v is not HOLDS:
                all_hold = False
            if v is FAILS:
                none_failed = False
                break
        if all_hold:
            return HOLDS
        if none_failed:
            blocked = True
    return UNKNOWN if blocked else FAILS


class Symmetrization(SymmetricOracle):
    """The symmetrized relation of an asymmetric oracle, as an oracle."""

    def __init__(self, base: ConsequenceOracle, partition_cap: int = 10 ** 6):
        self.base = base
        self.partition_cap = partition_cap
        self.name = f"{base.name}^s"
        self.monotone_contractive = base.monotone_contractive
        self._cache: dict = {}

    def entails(self, premises: FMultiset, conclusions: FMultiset) -> Verdict:
        key = (premises, conclusions)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = symmetrize_query(
                self.base, premises, conclusions, self.partition_cap)
        return hit


def asymmetric_query(oracle: SymmetricOracle, premises: FMultiset,
                     conclusion: Formula) -> Verdict:
    """The asymmetric part: premises |- [conclusion]."""
    return oracle.entails(premises, FMultiset([conclusion]))


class AsymmetricPart(ConsequenceOracle):
    """The asymmetric part of a symmetric oracle, as an oracle.

    The entails-every-theorem test needs extra knowledge: either a declared
    finite theorem basis, or ``empty_via_base=True`` for relations whose
    empty-right-side clause *is* that test (symmetrized relations are built
    that way); otherwise it reports UNKNOWN.
    """

    def __init__(self, base: SymmetricOracle,
                 theorem_basis: Optional[list[Formula]] = None,
                 empty_via_base: bool = False):
        self.base = base
        self.name = f"{base.name}^a"
        self.monotone_contractive = base.monotone_contractive
        self.theorem_basis = theorem_basis
        self.empty_via_base = empty_via_base

    def entails(self, premises: FMultiset, conclusion: Formula) -> Verdict:
        return self.base.entails(premises, FMultiset([conclusion]))

    def entails_all_theorems(self, premises: FMultiset) -> Verdict:
        if self.theorem_basis is not None:
            return super().entails_all_theorems(premises)
        if self.empty_via_base:
            return self.base.entails(premises, FMultiset())
        return UNKNOWN


class DerivationOracle(SymmetricOracle):
    """Relevant derivability in an axiomatic system, within search bounds."""

    def __init__(self, system: AxiomaticSystem, max_steps: int = 10,
                 max_formula_size: int = 12):
        self.system = system
        self.max_steps = max_steps
        self.max_formula_size = max_formula_size
        self.name = f"derive:{system.name}"
        self._cache: dict = {}

    def entails(self, premises: FMultiset, conclusions: FMultiset) -> Verdict:
        key = (premises, conclusions)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        result = derive_search(self.system, premises, conclusions,
                               self.max_steps, self.max_formula_size)
        if result.found:
            out = HOLDS
        elif result.status == "exhausted":
            out = FAILS
        else:
            out = UNKNOWN
        self._cache[key] = out
        return out


class TreeSearchOracle(ConsequenceOracle):
    """Relevant tree-provability in a single-conclusion system, within bounds.

    Positive answers are exact (the witness verifies); negatives are UNKNOWN
    because the node bound is not a disproof.
    """

    def __init__(self, system: AxiomaticSystem, max_nodes: int = 9,
                 max_formula_size: int = 12):
        from .treeproof import search

        self.system = system
        self.max_nodes = max_nodes
        self.max_formula_size = max_formula_size
        self.name = f"search:{system.name}"
        self._search = search
        self._cache: dict = {}

    def entails(self, premises: FMultiset, conclusion: Formula) -> Verdict:
        key = (premises, conclusion)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        tree = self._search(self.system, premises, conclusion,
                            self.max_nodes, self.max_formula_size)
        out = HOLDS if tree is not None else UNKNOWN
        self._cache[key] = out
        return out


# -- tree extraction -------------------------------------------------------------


class ExtractionError(Exception):
    pass


@dataclass
class _Occurrence:
    label: Formula
    # how this occurrence came to be at its level:
    #   ("start",)           level-1 premise occurrence
    #   ("copy", j)          survived from position j of the previous level
    #   ("rule", app, [js])  produced by the step's rule from positions js
    origin: tuple = ("start",)


@dataclass
class Extraction:
    premises_used: FMultiset      # premises feeding the extracted tree
    tree: ProofTree               # relevant proof of the chosen formula
    premises_rest: FMultiset      # the remaining premises
    residual: Derivation          # relevant derivation of the rest


def extract_tree(derivation: Derivation, system: AxiomaticSystem,
                 premises: FMultiset, conclusions: FMultiset,
                 phi: Formula) -> Extraction:
    """Split a relevant derivation at one conclusion occurrence.

    Rebuilds the derivation as a forest over formula occurrences: rule edges
    connect consumed occurrences to the produced one, copy edges track
    survivors across steps.  The subtree rooted at the first final-level
    occurrence of ``phi`` collapses (along copy edges) to a relevant tree
    proof of phi from the level-1 leaves it touches; deleting the tree's
    occurrences from every level and dropping stuttering steps leaves a
    relevant derivation of the remaining conclusions from the remaining
    premises.
    """
    if check_derivation(derivation, system, premises, conclusions) \
            is not DerivationVerdict.RELEVANT:
        raise ExtractionError("extraction needs a relevant derivation")
    if phi not in conclusions.support:
        raise ExtractionError(
            f"{print_formula(phi)} is not among the conclusions")
    if system.symmetric:
        raise ExtractionError("extraction expects a single-conclusion system")
    sym = system.lifted()

    levels: list[list[_Occurrence]] = [
        [_Occurrence(f) for f in derivation.steps[0]]]
    for i, app in enumerate(derivation.step_rules, start=1):
        rule = sym.get(app.rule)
        prev_ms, cur_ms = derivation.steps[i - 1], derivation.steps[i]
        sigma = _infer_step(rule, prev_ms, cur_ms, app.subst)
        consumed = FMultiset(substitute(s, sigma) for s in rule.left)
        produced = FMultiset(substitute(s, sigma) for s in rule.right)
        prev_list = [o.label for o in levels[-1]]
        consumed_ix = _first_positions(prev_list, consumed)
        cur_list = list(cur_ms)
        produced_ix = _last_positions(cur_list, produced)
        survivors_prev = [j for j in range(len(prev_list)) if j not in consumed_ix]
        survivors_cur = [j for j in range(len(cur_list)) if j not in produced_ix]
        pairing = _pair_by_label(prev_list, survivors_prev, cur_list, survivors_cur)
        # lifted single-conclusion rules produce exactly one formula, so the
        # produced occurrence is the unique parent of all consumed positions
        level: list[Optional[_Occurrence]] = [None] * len(cur_list)
        for j in produced_ix:
            level[j] = _Occurrence(cur_list[j], ("rule", app, tuple(sorted(consumed_ix))))
        for j_cur, j_prev in pairing.items():
            level[j_cur] = _Occurrence(cur_list[j_cur], ("copy", j_prev))
        assert all(o is not None for o in level)
        levels.append(level)

    last = len(levels) - 1
    root_index = next(j for j, o in enumerate(levels[last])
                      if o.label == phi)

    in_tree: set[tuple[int, int]] = set()

    def build(level_ix: int, pos: int) -> ProofTree:
        in_tree.add((level_ix, pos))
        occ = levels[level_ix][pos]
        if occ.origin[0] == "start":
            return ProofTree(occ.label, PremiseJust())
        if occ.origin[0] == "copy":
            return build(level_ix - 1, occ.origin[1])
        _, app, consumed_ix = occ.origin
        rule = sym.get(app.rule)
        if not consumed_ix:
            sigma = app.subst if app.subst is not None else None
            return ProofTree(occ.label, AxiomJust(rule.name, sigma))
        children = tuple(build(level_ix - 1, j) for j in consumed_ix)
        return ProofTree(occ.label, RuleJust(rule.name, app.subst), children)

    tree = build(last, root_index)

    used = FMultiset(levels[0][j].label
                     for j in range(len(levels[0])) if (0, j) in in_tree)
    rest = premises - used

    residual_steps = [FMultiset(
        o.label for j, o in enumerate(levels[0]) if (0, j) not in in_tree)]
    residual_apps: list[RuleApp] = []
    for i in range(1, len(levels)):
        step = FMultiset(o.label for j, o in enumerate(levels[i])
                         if (i, j) not in in_tree)
        if step != residual_steps[-1]:
            residual_steps.append(step)
            residual_apps.append(derivation.step_rules[i - 1])
    residual = Derivation(tuple(residual_steps), tuple(residual_apps))
    return Extraction(used, tree, rest, residual)


def _first_positions(labels: list[Formula], wanted: FMultiset) -> set[int]:
    need = wanted.counts()
    out: set[int] = set()
    for j, label in enumerate(labels):
        if need.get(label, 0) > 0:
            out.add(j)
            need[label] -= 1
    if any(c > 0 for c in need.values()):
        raise ExtractionError("internal bookkeeping error: consumed not present")
    return out


def _last_positions(labels: list[Formula], wanted: FMultiset) -> set[int]:
    need = wanted.counts()
    out: set[int] = set()
    for j in range(len(labels) - 1, -1, -1):
        label = labels[j]
        if need.get(label, 0) > 0:
            out.add(j)
            need[label] -= 1
    if any(c > 0 for c in need.values()):
        raise ExtractionError("internal bookkeeping error: produced not present")
    return out


def _pair_by_label(prev_list, survivors_prev, cur_list, survivors_cur) -> dict[int, int]:
    by_label_prev: dict[Formula, list[int]] = {}
    for j in survivors_prev:
        by_label_prev.setdefault(prev_list[j], []).append(j)
    pairing: dict[int, int] = {}
    for j in survivors_cur:
        bucket = by_label_prev.get(cur_list[j])
        if not bucket:
            raise ExtractionError("internal bookkeeping error: survivor mismatch")
        pairing[j] = bucket.pop(0)
    return pairing


# -- derivation files ---------------------------------------------------------------


def derivation_to_data(derivation: Derivation) -> list[dict]:
    out = [{"multiset": print_multiset(derivation.steps[0])}]
    for app, step in zip(derivation.step_rules, derivation.steps[1:]):
        entry: dict = {"multiset": print_multiset(step), "by": {"rule": app.rule}}
        if app.subst is not None:
            entry["by"]["subst"] = {
                v: print_formula(f) for v, f in sorted(app.subst.items())}
        out.append(entry)
    return out


def derivation_from_data(data: list[dict]) -> Derivation:
    if not data:
        raise ValueError("a derivation file needs at least one record")
    steps = [parse_multiset(rec["multiset"]) for rec in data]
    apps: list[RuleApp] = []
    for rec in data[1:]:
        by = rec.get("by")
        if not isinstance(by, dict) or "rule" not in by:
            raise ValueError(f"record {rec!r} is missing its rule")
        subst = by.get("subst")
        parsed = ({v: parse_formula(s) for v, s in subst.items()}
                  if subst is not None else None)
        apps.append(RuleApp(by["rule"], parsed))
    if "by" in data[0]:
        raise ValueError("the first record carries no rule")
    return Derivation(tuple(steps), tuple(apps))


def dump_derivation(derivation: Derivation) -> str:
    return json.dumps(derivation_to_data(derivation), indent=2)


def load_derivation(text: str) -> Derivation:
    return derivation_from_data(json.loads(text))
