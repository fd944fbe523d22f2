"""Tree proofs: verification with relevance classification, Cut composition,
the weakening pump, bounded backward search, and the implication-discharge
transformer for BCI-style systems.

A proof of ``goal`` from a premise multiset ``premises`` in a
single-conclusion system is a finite formula-labelled tree such that

  1. the root is labelled by ``goal``;
  2. every leaf label is an axiom instance or lies in the premise support;
  3. every internal node instantiates a rule: its label is the instantiated
     conclusion and its children's labels form the instantiated premise
     multiset;
  4. every formula that is *not* an axiom instance labels at most
     ``premises(f)`` leaves.

Writing ``leaves`` for the leaf-label multiset, the tree is additionally

  - weakly relevant  if every element of premises - leaves is an axiom
    instance (non-axiom premises are used exactly as often as listed);
  - relevant         if premises <= leaves (every listed occurrence is used);
  - strongly relevant if premises == leaves.

``verify`` reports the strongest class that holds.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterator, Mapping, Optional

from .multiset import EMPTY, FMultiset
from .syntax import (
    AxiomaticSystem,
    Conj,
    Disj,
    Formula,
    Fusion,
    Imp,
    Neg,
    Var,
    _freeze,
    formula_size,
    match,
    match_multiset,
    metavars,
    parse_formula,
    print_formula,
    print_multiset,
    subformulas,
    substitute,
    substitute_partial,
    unify,
)


class RelevanceVerdict(IntEnum):
    INVALID = 0
    PLAIN = 1
    WEAKLY_RELEVANT = 2
    RELEVANT = 3
    STRONGLY_RELEVANT = 4

    def __str__(self) -> str:
        return self.name.lower()


class NoPremiseLeafError(Exception):
    """cut_compose found no premise leaf labelled by the cut formula."""


class RulesAbsentError(Exception):
    """The system lacks a rule of the shape an operation requires."""


class UnsupportedSystemError(Exception):
    """The system is not of the BCI(+fusion) form the transformer handles."""


class NotRelevantError(Exception):
    """An operation required a relevant input proof."""


# -- proof trees ---------------------------------------------------------------


@dataclass(frozen=True)
class PremiseJust:
    def __str__(self) -> str:
        return "premise"


@dataclass(frozen=True)
class AxiomJust:
    name: str
    subst: Optional[Mapping[str, Formula]] = None

    def __str__(self) -> str:
        return f"axiom {self.name}"


@dataclass(frozen=True)
class RuleJust:
    name: str
    subst: Optional[Mapping[str, Formula]] = None

    def __str__(self) -> str:
        return f"rule {self.name}"


Justification = PremiseJust | AxiomJust | RuleJust


@dataclass(frozen=True)
class ProofTree:
    formula: Formula
    by: Justification
    children: tuple["ProofTree", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def leaves(self) -> Iterator["ProofTree"]:
        if self.is_leaf:
            yield self
        else:
            for c in self.children:
                yield from c.leaves()


def premise_leaf(f: Formula) -> ProofTree:
    return ProofTree(f, PremiseJust())


def axiom_leaf(f: Formula, name: str, subst: Optional[dict] = None) -> ProofTree:
    return ProofTree(f, AxiomJust(name, subst))


def leaf_multiset(tree: ProofTree) -> FMultiset:
    """The multiset of leaf labels, counted with multiplicity."""
    return FMultiset(leaf.formula for leaf in tree.leaves())


# -- verification ---------------------------------------------------------------


@dataclass
class VerifyReport:
    verdict: RelevanceVerdict
    problems: list[str] = field(default_factory=list)
    leaf_labels: FMultiset = EMPTY
    surplus: FMultiset = EMPTY  # leaves - premises, shown in diagnostics


def _rule_instance(system: AxiomaticSystem, just: RuleJust,
                   conclusion: Formula, child_labels: FMultiset) -> Optional[dict]:
    """A substitution making the named rule produce this node, if any."""
    try:
        rule = system.get(just.name)
    except KeyError:
        return None
    if rule.is_axiom or isinstance(rule.right, FMultiset):
        return None
    if just.subst is not None:
        sigma = dict(just.subst)
        try:
            if substitute(rule.right, sigma) != conclusion:
                return None
            if FMultiset(substitute(s, sigma) for s in rule.left) != child_labels:
                return None
        except Exception:
            return None
        return sigma
    sigma0 = match(rule.right, conclusion)
    if sigma0 is None:
        return None
    for sigma in match_multiset(rule.left, child_labels, sigma0):
        return sigma
    return None


def verify_report(tree: ProofTree, system: AxiomaticSystem,
                  premises: FMultiset, goal: Formula) -> VerifyReport:
    """Check the four proof conditions and classify the relevance of the tree."""
    if system.symmetric:
        raise ValueError("verify expects a single-conclusion system")
    problems: list[str] = []
    leaves = leaf_multiset(tree)

    if tree.formula != goal:
        problems.append(
            f"root is {print_formula(tree.formula)}, goal is {print_formula(goal)}")

    def walk(node: ProofTree) -> None:
        if node.is_leaf:
            if isinstance(node.by, RuleJust):
                problems.append(
                    f"leaf {print_formula(node.formula)} carries a rule justification")
                return
            if isinstance(node.by, AxiomJust):
                inst = _leaf_axiom_ok(system, node)
                if not inst:
                    problems.append(
                        f"leaf {print_formula(node.formula)} is not an instance "
                        f"of axiom {node.by.name}")
                    return
            if not (system.is_axiom_instance(node.formula)
                    or node.formula in premises.support):
                problems.append(
                    f"leaf {print_formula(node.formula)} is neither an axiom "
                    f"instance nor a premise")
            return
        if not isinstance(node.by, RuleJust):
            problems.append(
                f"internal node {print_formula(node.formula)} lacks a rule justification")
            return
        child_labels = FMultiset(c.formula for c in node.children)
        if _rule_instance(system, node.by, node.formula, child_labels) is None:
            problems.append(
                f"node {print_formula(node.formula)} does not instantiate rule "
                f"{node.by.name} from {print_multiset(child_labels)}")
        for c in node.children:
            walk(c)

    walk(tree)

    # condition 4: non-axiom formulas label at most premises(f) leaves
    for f in leaves.support:
        if not system.is_axiom_instance(f) and leaves.count(f) > premises.count(f):
            problems.append(
                f"{print_formula(f)} labels {leaves.count(f)} leaves but occurs "
                f"{premises.count(f)} times among the premises")

    surplus = leaves - premises
    if problems:
        return VerifyReport(RelevanceVerdict.INVALID, problems, leaves, surplus)

    verdict = RelevanceVerdict.PLAIN
    if all(system.is_axiom_instance(f) for f in (premises - leaves).support):
        verdict = RelevanceVerdict.WEAKLY_RELEVANT
        if premises <= leaves:
            verdict = RelevanceVerdict.RELEVANT
            if premises == leaves:
                verdict = RelevanceVerdict.STRONGLY_RELEVANT
    return VerifyReport(verdict, [], leaves, surplus)


def _leaf_axiom_ok(system: AxiomaticSystem, node: ProofTree) -> bool:
    try:
        ax = system.get(node.by.name)
    except KeyError:
        return False
    if not ax.is_axiom or isinstance(ax.right, FMultiset):
        return False
    if node.by.subst is not None:
        try:
            return substitute(ax.right, dict(node.by.subst)) == node.formula
        except Exception:
            return False
    return match(ax.right, node.formula) is not None


def verify(tree: ProofTree, system: AxiomaticSystem,
           premises: FMultiset, goal: Formula) -> RelevanceVerdict:
    return verify_report(tree, system, premises, goal).verdict


# -- Cut composition and the weakening pump -------------------------------------


def cut_compose(tree: ProofTree, sub: ProofTree, system: AxiomaticSystem,
                cut_formula: Formula) -> ProofTree:
    """Replace a premise leaf labelled ``cut_formula`` in ``tree`` by ``sub``.

    For relevant inputs for (G + [f], goal) and (D, f) the result is a
    relevant proof for (G + D, goal): the leaf multiset loses one occurrence
    of the cut formula and gains all of sub's leaves.
    """
    done = False

    def go(node: ProofTree) -> ProofTree:
        nonlocal done
        if done:
            return node
        if node.is_leaf:
            if isinstance(node.by, PremiseJust) and node.formula == cut_formula:
                done = True
                return sub
            return node
        new_children = []
        for c in node.children:
            new_children.append(go(c))
        return ProofTree(node.formula, node.by, tuple(new_children))

    out = go(tree)
    if not done:
        raise NoPremiseLeafError(
            f"no premise leaf labelled {print_formula(cut_formula)}")
    return out


# shapes used to recognise the rules pump_use and deduction_transform need
_V0, _V1, _V2 = Var("\x01a"), Var("\x01b"), Var("\x01c")
MP_SHAPE = (FMultiset([Imp(_V0, _V1), _V0]), _V1)
WEAKENING_SHAPE = (FMultiset([_V0]), Imp(_V1, _V0))
I_SHAPE = Imp(_V0, _V0)
B_SHAPE = Imp(Imp(_V0, _V1), Imp(Imp(_V2, _V0), Imp(_V2, _V1)))
C_SHAPE = Imp(Imp(_V0, Imp(_V1, _V2)), Imp(_V1, Imp(_V0, _V2)))


def _one_way(left_a, right_a, left_b, right_b) -> bool:
    frozen_left = FMultiset(_freeze(f) for f in left_b)
    frozen_right = _freeze(right_b)
    sigma0 = match(right_a, frozen_right)
    if sigma0 is None:
        return False
    return next(match_multiset(FMultiset(left_a), frozen_left, sigma0), None) is not None


def rule_has_shape(rule, shape: tuple[FMultiset, Formula]) -> bool:
    """Whether a single-conclusion rule equals the shape up to renaming."""
    if isinstance(rule.right, FMultiset):
        return False
    return (_one_way(list(rule.left), rule.right, list(shape[0]), shape[1])
            and _one_way(list(shape[0]), shape[1], list(rule.left), rule.right))


def axiom_has_shape(rule, shape: Formula) -> bool:
    if not rule.is_axiom or isinstance(rule.right, FMultiset):
        return False
    return (_one_way([], rule.right, [], shape)
            and _one_way([], shape, [], rule.right))


def _find_rule(system: AxiomaticSystem, shape, axiom: bool, what: str) -> str:
    for r in system.rules:
        if axiom and axiom_has_shape(r, shape):
            return r.name
        if not axiom and not r.is_axiom and rule_has_shape(r, shape):
            return r.name
    raise RulesAbsentError(f"system {system.name} has no {what}")


def _instance(system: AxiomaticSystem, name: str, f: Formula) -> ProofTree:
    sigma = match(system.get(name).right, f)
    return axiom_leaf(f, name, sigma)


def pump_use(tree: ProofTree, extra: Formula, system: AxiomaticSystem,
             mp_rule: Optional[str] = None,
             weakening_rule: Optional[str] = None) -> ProofTree:
    """Grow a proof so that it also uses one new premise occurrence ``extra``.

    Requires modus ponens and weakening rules.  The root proves the same
    formula; the leaf multiset gains exactly one occurrence of ``extra``.
    """
    mp = mp_rule or _find_rule(system, MP_SHAPE, False, "modus ponens rule")
    wk = weakening_rule or _find_rule(system, WEAKENING_SHAPE, False, "weakening rule")
    if not rule_has_shape(system.get(mp), MP_SHAPE):
        raise RulesAbsentError(f"rule {mp} does not have the modus ponens shape")
    if not rule_has_shape(system.get(wk), WEAKENING_SHAPE):
        raise RulesAbsentError(f"rule {wk} does not have the weakening shape")
    goal = tree.formula
    weakened = ProofTree(Imp(extra, goal), RuleJust(wk), (tree,))
    return ProofTree(goal, RuleJust(mp), (weakened, premise_leaf(extra)))


# -- the implication-discharge transformer --------------------------------------


def deduction_transform(tree: ProofTree, system: AxiomaticSystem,
                        premises: FMultiset, phi: Formula) -> ProofTree:
    """Turn a relevant proof of psi from G + [phi] into one of phi -> psi from G.

    Follows the proof-complexity induction: walk to the distinguished premise
    occurrence of phi (leftmost in depth-first order) and rebuild along the
    modus ponens spine.  When the occurrence sits below the minor premise the
    prefixing axiom composes the recursive result with the untouched major
    subtree; when it sits below the major premise the permutation axiom
    re-orders the discharged antecedent past the minor premise.  The base case
    phi = psi is the identity axiom.
    """
    if system.symmetric:
        raise UnsupportedSystemError("transformer expects a single-conclusion system")
    if premises.count(phi) < 1:
        raise ValueError(f"{print_formula(phi)} does not occur among the premises")
    report = verify_report(tree, system, premises, tree.formula)
    if report.verdict < RelevanceVerdict.RELEVANT:
        raise NotRelevantError(
            f"input proof verifies as {report.verdict}; surplus {report.surplus}")
    mp = _find_rule(system, MP_SHAPE, False, "modus ponens rule")
    ax_i = _find_rule(system, I_SHAPE, True, "identity axiom")
    ax_b = _find_rule(system, B_SHAPE, True, "prefixing axiom")
    ax_c = _find_rule(system, C_SHAPE, True, "permutation axiom")
    for rule in system.inference_rules:
        if rule.name != mp:
            raise UnsupportedSystemError(
                f"system {system.name} has a rule beyond modus ponens: {rule.name}")

    path = _leftmost_occurrence(tree, phi)
    if path is None:
        raise NotRelevantError(f"no leaf labelled {print_formula(phi)}")

    def rebuild(node: ProofTree, path: tuple[int, ...]) -> ProofTree:
        if not path:
            return _instance(system, ax_i, Imp(phi, phi))
        major_ix, minor_ix = _split_mp(node)
        major, minor = node.children[major_ix], node.children[minor_ix]
        chi, psi = minor.formula, node.formula
        branch, rest = path[0], path[1:]
        if branch == minor_ix and not rest:
            # identity case: the discharged occurrence is the whole minor
            # premise, so the major subtree already proves phi -> psi
            return major
        if branch == minor_ix:
            # phi is used to prove the minor premise chi
            lifted = rebuild(minor, rest)  # proves phi -> chi
            b_inst = _instance(
                system, ax_b,
                Imp(Imp(chi, psi), Imp(Imp(phi, chi), Imp(phi, psi))))
            step = ProofTree(Imp(Imp(phi, chi), Imp(phi, psi)),
                             RuleJust(mp), (b_inst, major))
            return ProofTree(Imp(phi, psi), RuleJust(mp), (step, lifted))
        # phi is used to prove the major premise chi -> psi
        lifted = rebuild(major, rest)  # proves phi -> (chi -> psi)
        c_inst = _instance(
            system, ax_c,
            Imp(Imp(phi, Imp(chi, psi)), Imp(chi, Imp(phi, psi))))
        step = ProofTree(Imp(chi, Imp(phi, psi)), RuleJust(mp), (c_inst, lifted))
        return ProofTree(Imp(phi, psi), RuleJust(mp), (step, minor))

    return rebuild(tree, path)


def _leftmost_occurrence(tree: ProofTree, phi: Formula) -> Optional[tuple[int, ...]]:
    best_any = None

    def go(node: ProofTree, path: tuple[int, ...]):
        nonlocal best_any
        if node.is_leaf:
            if node.formula == phi:
                if isinstance(node.by, PremiseJust):
                    return path
                if best_any is None:
                    best_any = path
            return None
        for i, c in enumerate(node.children):
            hit = go(c, path + (i,))
            if hit is not None:
                return hit
        return None

    found = go(tree, ())
    return found if found is not None else best_any


def _split_mp(node: ProofTree) -> tuple[int, int]:
    """Indexes of (major, minor) among an mp node's two children."""
    if len(node.children) != 2:
        raise UnsupportedSystemError("modus ponens node must have two children")
    a, b = node.children
    if a.formula == Imp(b.formula, node.formula):
        return 0, 1
    if b.formula == Imp(a.formula, node.formula):
        return 1, 0
    raise UnsupportedSystemError(
        f"node {print_formula(node.formula)} is not a modus ponens application")


# -- bounded backward search -----------------------------------------------------


def _system_constructors(system: AxiomaticSystem, seed_formulas) -> list:
    present = set()

    def scan(f: Formula):
        if isinstance(f, Neg):
            present.add(Neg)
            scan(f.body)
        elif isinstance(f, (Imp, Fusion, Conj, Disj)):
            present.add(type(f))
            scan(f.left)
            scan(f.right)

    for r in system.rules:
        for s in list(r.left) + (list(r.right) if isinstance(r.right, FMultiset)
                                 else [r.right]):
            scan(s)
    for f in seed_formulas:
        scan(f)
    return [c for c in (Neg, Imp, Fusion, Conj, Disj) if c in present]


def _grow_universe(base: list[Formula], constructors, layers: int,
                   max_size: int, cap: int = 3000) -> list[Formula]:
    seen = set(base)
    ordered = list(base)
    frontier = list(base)
    for _ in range(layers):
        if len(ordered) >= cap or not frontier:
            break
        new: list[Formula] = []
        for ctor in constructors:
            if ctor is Neg:
                for f in frontier:
                    g = Neg(f)
                    if formula_size(g) <= max_size and g not in seen:
                        seen.add(g)
                        new.append(g)
            else:
                for f in ordered:
                    for g in ordered:
                        h = ctor(f, g)
                        if formula_size(h) <= max_size and h not in seen:
                            seen.add(h)
                            new.append(h)
        new.sort(key=lambda f: (formula_size(f), str(f)))
        ordered.extend(new)
        frontier = new
    return ordered[:cap]


def search(system: AxiomaticSystem, premises: FMultiset, goal: Formula,
           max_nodes: int = 16, max_formula_size: int = 12,
           universe_layers: int = 1, universe_cap: int = 600) -> Optional[ProofTree]:
    """Bounded search for a proof that verifies as relevant for (premises, goal).

    Iterative deepening over the tree node count; free rule metavariables are
    instantiated from the subformula closure of the premises and the goal,
    extended by one connective layer per deepening step (saturating at
    ``universe_layers``) and capped by ``max_formula_size``.  The first witness
    under the canonical branch order is returned, so the result is
    deterministic and node-minimal.  ``None`` means no proof within the
    bounds; it is not a disproof.
    """
    if system.symmetric:
        raise ValueError("search expects a single-conclusion system")
    base = set()
    for f in list(premises) + [goal]:
        base |= subformulas(f)
    base_list = sorted(base, key=lambda f: (formula_size(f), str(f)))
    constructors = _system_constructors(system, base_list)

    if premises.size > max_nodes:
        return None  # every premise occurrence needs its own leaf
    state: Optional[_SearchState] = None
    prev_universe: Optional[list[Formula]] = None
    for budget in range(1, max_nodes + 1):
        universe = _grow_universe(base_list, constructors,
                                  min(budget - 1, universe_layers),
                                  max_formula_size, universe_cap)
        if state is None or universe != prev_universe:
            # failure caching is only sound while the universe is unchanged
            state = _SearchState(system, universe)
            prev_universe = universe
        for tree, used in state.prove(goal, premises, budget):
            if used == premises and tree.node_count() == budget:
                return tree
    return None


def _vars_of(schema: Formula) -> set[str]:
    if isinstance(schema, Var):
        return {schema.name}
    if isinstance(schema, Neg):
        return _vars_of(schema.body)
    if isinstance(schema, (Imp, Fusion, Conj, Disj)):
        return _vars_of(schema.left) | _vars_of(schema.right)
    return set()


def _rename_vars(schema: Formula) -> Formula:
    """Push a schema's metavariables into a private namespace before unifying."""
    if isinstance(schema, Var):
        return Var("\x02" + schema.name)
    if isinstance(schema, Neg):
        return Neg(_rename_vars(schema.body))
    if isinstance(schema, (Imp, Fusion, Conj, Disj)):
        return type(schema)(_rename_vars(schema.left), _rename_vars(schema.right))
    return schema


class _SearchState:
    def __init__(self, system: AxiomaticSystem, universe: list[Formula]):
        self.system = system
        self.universe = universe
        self.fruitless: dict[tuple, int] = {}
        self._axiom_rights = [
            (ax, _rename_vars(ax.right)) for ax in system.axioms
            if not isinstance(ax.right, FMultiset)]

    def prove(self, goal: Formula, avail: FMultiset,
              budget: int) -> Iterator[tuple[ProofTree, FMultiset]]:
        if budget < 1:
            return
        key = (goal, avail)
        if self.fruitless.get(key, 0) >= budget:
            return
        yielded = False
        for result in self._prove_raw(goal, avail, budget):
            yielded = True
            yield result
        if not yielded:
            self.fruitless[key] = max(self.fruitless.get(key, 0), budget)

    def _prove_raw(self, goal, avail, budget):
        if goal in avail:
            yield premise_leaf(goal), FMultiset([goal])
        for ax in self.system.axioms:
            if isinstance(ax.right, FMultiset):
                continue
            sigma = match(ax.right, goal)
            if sigma is not None:
                yield axiom_leaf(goal, ax.name, sigma), EMPTY
        if budget < 2:
            return
        for rule in self.system.inference_rules:
            if isinstance(rule.right, FMultiset):
                continue
            sigma0 = match(rule.right, goal)
            if sigma0 is None:
                continue
            free = sorted({v for s in rule.left for v in _vars_of(s)} - set(sigma0))
            for sigma in self._instantiations(rule, sigma0, free, avail):
                # most-constrained (largest) subgoal first fails fastest
                subgoals = sorted((substitute(s, sigma) for s in rule.left),
                                  key=lambda f: (-formula_size(f), str(f)))
                for children, used in self._prove_seq(subgoals, avail, budget - 1):
                    yield (ProofTree(goal, RuleJust(rule.name, sigma), children), used)

    def _instantiations(self, rule, sigma0: dict, free: list[str],
                        avail: FMultiset) -> Iterator[dict]:
        """Ground assignments for the rule metavariables the goal leaves open.

        Candidate values are harvested, per variable, from matching the open
        subgoal schemata against the available premises and unifying them
        against axiom heads; the instantiation universe is the fallback tier.
        """
        if not free:
            yield dict(sigma0)
            return
        candidates: dict[str, list[Formula]] = {v: [] for v in free}
        seen: dict[str, set] = {v: set() for v in free}

        def harvest(bindings: Optional[dict]) -> None:
            if not bindings:
                return
            for v in free:
                value = bindings.get(v)
                if value is not None and not metavars(value) and value not in seen[v]:
                    seen[v].add(value)
                    candidates[v].append(value)

        open_schemas = [substitute_partial(s, sigma0) for s in rule.left]
        for schema in open_schemas:
            if not metavars(schema):
                continue
            for f in avail.distinct():
                harvest(match(schema, f))
            for _, renamed in self._axiom_rights:
                harvest(unify(schema, renamed))
        for v in free:
            for f in self.universe:
                if f not in seen[v]:
                    seen[v].add(f)
                    candidates[v].append(f)
        for values in itertools.product(*(candidates[v] for v in free)):
            sigma = dict(sigma0)
            sigma.update(zip(free, values))
            yield sigma

    def _prove_seq(self, subgoals: list[Formula], avail: FMultiset,
                   budget: int) -> Iterator[tuple[tuple[ProofTree, ...], FMultiset]]:
        if not subgoals:
            yield (), EMPTY
            return
        head, rest = subgoals[0], subgoals[1:]
        # reserve at least one node per remaining subgoal
        for t1, u1 in self.prove(head, avail, budget - len(rest)):
            n1 = t1.node_count()
            for ts, u2 in self._prove_seq(rest, avail - u1, budget - n1):
                yield (t1,) + ts, u1 + u2


# -- proof files -----------------------------------------------------------------


def proof_to_data(tree: ProofTree) -> dict:
    out: dict = {"formula": print_formula(tree.formula)}
    by = tree.by
    if isinstance(by, PremiseJust):
        out["by"] = "premise"
    elif isinstance(by, AxiomJust):
        entry: dict = {"axiom": by.name}
        if by.subst is not None:
            entry["subst"] = {v: print_formula(f) for v, f in sorted(by.subst.items())}
        out["by"] = entry
    else:
        entry = {"rule": by.name}
        if by.subst is not None:
            entry["subst"] = {v: print_formula(f) for v, f in sorted(by.subst.items())}
        out["by"] = entry
    if tree.children:
        out["children"] = [proof_to_data(c) for c in tree.children]
    return out


def proof_from_data(data: dict) -> ProofTree:
    formula = parse_formula(data["formula"])
    by = data.get("by", "premise")
    if by == "premise":
        just: Justification = PremiseJust()
    elif isinstance(by, dict) and "axiom" in by:
        just = AxiomJust(by["axiom"], _subst_from(by.get("subst")))
    elif isinstance(by, dict) and "rule" in by:
        just = RuleJust(by["rule"], _subst_from(by.get("subst")))
    else:
        raise ValueError(f"bad justification entry: {by!r}")
    children = tuple(proof_from_data(c) for c in data.get("children", []))
    return ProofTree(formula, just, children)


def _subst_from(entry) -> Optional[dict]:
    if entry is None:
        return None
    return {v: parse_formula(s) for v, s in entry.items()}


def dump_proof(tree: ProofTree) -> str:
    return json.dumps(proof_to_data(tree), indent=2)


def load_proof(text: str) -> ProofTree:
    return proof_from_data(json.loads(text))
