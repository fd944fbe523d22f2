"""A law battery for consequence oracles.

Asymmetric laws (oracle between multisets and formulas):

    Reflexivity              [f] |- f
    Cut                      G+[g] |- f  and  D |- g   =>   G+D |- f
    Monotonicity             G |- f   =>   G+D |- f
    Contraction              G+[g,g] |- f   =>   G+[g] |- f
    GeneralizedReflexivity   G+[f] |- f
    RelevantCut              [c1..cn] |- f and Di |- ci  =>  D1+..+Dn |- f
    TheoremRemoval           G+D |- f  =>  G |- f   (D a multiset of theorems)

Symmetric laws (oracle between multisets):

    Reflexivity              G |- G
    Transitivity             G |- D and D |- P   =>   G |- P
    Compatibility            G |- D   =>   G+P |- D+P
    Monotonicity             G |- D   =>   G+P |- D
    Contraction              G+[g,g] |- D   =>   G+[g] |- D
    rContraction             G |- D+[g,g]   =>   G |- D+[g]
    GeneralizedReflexivity   G+D |- G
    TheoremReflexivity       G |- []
    MultiCut                 G |- D and D+P |- F   =>   G+P |- F
    TheoremRemoval           [] |- D and D+P |- F   =>   P |- F

Each law is checked instance-by-instance over a finite sample domain,
exhaustively when the instance count fits the cap and by seeded sampling
above it.  A counterexample is a fully concrete violating instance; UNKNOWN
oracle answers make a check inconclusive rather than failed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .multiset import FMultiset, submultisets
from .oracles import (
    FAILS,
    HOLDS,
    UNKNOWN,
    ConsequenceOracle,
    SymmetricOracle,
    Verdict,
)
from .syntax import Formula, print_formula, print_multiset


@dataclass
class SampleDomain:
    """A finite formula universe with a multiset size bound.

    Enumeration is canonical (sizes ascending, elements in universe order)
    and reproducible; sampling above the cap draws from the seeded generator.
    """

    formulas: tuple[Formula, ...]
    max_size: int = 3
    seed: int = 0
    exhaustive_cap: int = 100_000
    sample_count: int = 4000

    def multisets(self) -> list[FMultiset]:
        out = []
        for size in range(self.max_size + 1):
            for combo in itertools.combinations_with_replacement(self.formulas, size):
                out.append(FMultiset(combo))
        return out


@dataclass
class LawResult:
    law: str
    status: str  # "passed" | "counterexample" | "inconclusive"
    witness: Optional[dict] = None
    exhaustive: bool = True
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "passed"

    def witness_str(self) -> str:
        if not self.witness:
            return ""
        return "; ".join(f"{k}={_show_part(v)}" for k, v in self.witness.items())


def _show_part(v) -> str:
    if isinstance(v, FMultiset):
        return print_multiset(v)
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_show_part(x) for x in v) + ")"
    return print_formula(v)


# A law is a quantifier prefix ("M" multiset, "F" formula) plus a predicate
# mapping the bound values and the oracle to HOLDS / FAILS / UNKNOWN.


@dataclass(frozen=True)
class LawSpec:
    name: str
    symmetric: bool
    prefix: str  # e.g. "MMFF": one letter per bound variable
    names: tuple[str, ...]
    predicate: Callable


def _law(registry, name, symmetric, prefix, names):
    def wrap(fn):
        registry[name] = LawSpec(name, symmetric, prefix, tuple(names), fn)
        return fn
    return wrap


ASYM_LAWS: dict[str, LawSpec] = {}
SYM_LAWS: dict[str, LawSpec] = {}


def _implies(*antecedents, conclusion) -> Verdict:
    """Truth value of an instance of a conditional law.

    Antecedents are thunks evaluated left to right; a failing antecedent
    settles the instance without touching the conclusion.
    """
    unknown = False
    for ant in antecedents:
        v = ant()
        if v is FAILS:
            return HOLDS  # antecedent fails, instance vacuously fine
        if v is UNKNOWN:
            unknown = True
    out = conclusion()
    if out is HOLDS:
        return HOLDS
    return UNKNOWN if unknown or out is UNKNOWN else FAILS


@_law(ASYM_LAWS, "Reflexivity", False, "F", ("f",))
def _refl(o, f):
    return o.entails(FMultiset([f]), f)


@_law(ASYM_LAWS, "Cut", False, "MMFF", ("G", "D", "f", "g"))
def _cut(o, G, D, f, g):
    return _implies(lambda: o.entails(G + FMultiset([g]), f),
                    lambda: o.entails(D, g),
                    conclusion=lambda: o.entails(G + D, f))


@_law(ASYM_LAWS, "Monotonicity", False, "MFM", ("G", "f", "D"))
def _mono(o, G, f, D):
    return _implies(lambda: o.entails(G, f),
                    conclusion=lambda: o.entails(G + D, f))


@_law(ASYM_LAWS, "Contraction", False, "MFF", ("G", "g", "f"))
def _contr(o, G, g, f):
    return _implies(lambda: o.entails(G + FMultiset([g, g]), f),
                    conclusion=lambda: o.entails(G + FMultiset([g]), f))


@_law(ASYM_LAWS, "GeneralizedReflexivity", False, "MF", ("G", "f"))
def _genrefl(o, G, f):
    return o.entails(G + FMultiset([f]), f)


@_law(ASYM_LAWS, "RelevantCut", False, "special", ("G", "f", "Ds"))
def _relcut(o, G, f, Ds):
    # G = [c1..cn] nonempty, Ds = one multiset per ci (in canonical order)
    parts = list(G)
    ants = [lambda: o.entails(G, f)]
    total = FMultiset()
    for Di, ci in zip(Ds, parts):
        ants.append(lambda Di=Di, ci=ci: o.entails(Di, ci))
        total = total + Di
    return _implies(*ants, conclusion=lambda total=total: o.entails(total, f))


@_law(ASYM_LAWS, "TheoremRemoval", False, "special", ("G", "D", "f"))
def _thremoval(o, G, D, f):
    # D ranges over multisets drawn from the declared theorem basis
    return _implies(lambda: o.entails(G + D, f),
                    conclusion=lambda: o.entails(G, f))


@_law(SYM_LAWS, "Reflexivity", True, "M", ("G",))
def _srefl(o, G):
    return o.entails(G, G)


@_law(SYM_LAWS, "Transitivity", True, "MMM", ("G", "D", "P"))
def _strans(o, G, D, P):
    return _implies(lambda: o.entails(G, D), lambda: o.entails(D, P),
                    conclusion=lambda: o.entails(G, P))


@_law(SYM_LAWS, "Compatibility", True, "MMM", ("G", "D", "P"))
def _scompat(o, G, D, P):
    return _implies(lambda: o.entails(G, D),
                    conclusion=lambda: o.entails(G + P, D + P))


@_law(SYM_LAWS, "Monotonicity", True, "MMM", ("G", "D", "P"))
def _smono(o, G, D, P):
    return _implies(lambda: o.entails(G, D),
                    conclusion=lambda: o.entails(G + P, D))


@_law(SYM_LAWS, "Contraction", True, "MFM", ("G", "g", "D"))
def _scontr(o, G, g, D):
    return _implies(lambda: o.entails(G + FMultiset([g, g]), D),
                    conclusion=lambda: o.entails(G + FMultiset([g]), D))


@_law(SYM_LAWS, "rContraction", True, "MFM", ("G", "g", "D"))
def _srcontr(o, G, g, D):
    return _implies(lambda: o.entails(G, D + FMultiset([g, g])),
                    conclusion=lambda: o.entails(G, D + FMultiset([g])))


@_law(SYM_LAWS, "GeneralizedReflexivity", True, "MM", ("G", "D"))
def _sgenrefl(o, G, D):
    return o.entails(G + D, G)


@_law(SYM_LAWS, "TheoremReflexivity", True, "M", ("G",))
def _sthrefl(o, G):
    return o.entails(G, FMultiset())


@_law(SYM_LAWS, "MultiCut", True, "MMMM", ("G", "D", "P", "F"))
def _smulticut(o, G, D, P, F):
    return _implies(lambda: o.entails(G, D), lambda: o.entails(D + P, F),
                    conclusion=lambda: o.entails(G + P, F))


@_law(SYM_LAWS, "TheoremRemoval", True, "MMM", ("D", "P", "F"))
def _sthremoval(o, D, P, F):
    return _implies(lambda: o.entails(FMultiset(), D),
                    lambda: o.entails(D + P, F),
                    conclusion=lambda: o.entails(P, F))


def law_names(symmetric: bool) -> list[str]:
    return list((SYM_LAWS if symmetric else ASYM_LAWS).keys())


def _instances(law: LawSpec, oracle, dom: SampleDomain) -> tuple[Iterator[tuple], Optional[int]]:
    """Canonical instance stream and its total count (None when unbounded)."""
    multisets = dom.multisets()
    formulas = list(dom.formulas)
    if law.prefix == "special":
        if law.name == "RelevantCut":
            def gen():
                for G in multisets:
                    parts = list(G)
                    if not parts:
                        continue
                    for f in formulas:
                        for Ds in itertools.product(multisets, repeat=len(parts)):
                            yield (G, f, Ds)
            count = sum(len(formulas) * len(multisets) ** G.size
                        for G in multisets if G.size)
            return gen(), count
        if law.name == "TheoremRemoval":
            basis = tuple(getattr(oracle, "theorem_basis", None) or ())
            theorem_dom = SampleDomain(basis, dom.max_size) if basis else None

            def gen():
                if theorem_dom is None:
                    return
                tms = theorem_dom.multisets()
                for G in multisets:
                    for D in tms:
                        for f in formulas:
                            yield (G, D, f)
            count = (0 if theorem_dom is None
                     else len(multisets) * len(theorem_dom.multisets()) * len(formulas))
            return gen(), count
        raise ValueError(f"unknown special law {law.name}")
    pools = [multisets if c == "M" else formulas for c in law.prefix]
    count = 1
    for p in pools:
        count *= len(p)
    return itertools.product(*pools), count


def _sample_instances(law: LawSpec, oracle, dom: SampleDomain) -> Iterator[tuple]:
    rng = random.Random(dom.seed)
    multisets = dom.multisets()
    formulas = list(dom.formulas)
    for _ in range(dom.sample_count):
        if law.prefix == "special":
            if law.name == "RelevantCut":
                G = rng.choice([m for m in multisets if len(list(m))])
                f = rng.choice(formulas)
                Ds = tuple(rng.choice(multisets) for _ in list(G))
                yield (G, f, Ds)
            else:  # TheoremRemoval
                basis = tuple(getattr(oracle, "theorem_basis", None) or ())
                if not basis:
                    return
                tms = SampleDomain(basis, dom.max_size).multisets()
                yield (rng.choice(multisets), rng.choice(tms), rng.choice(formulas))
        else:
            yield tuple(rng.choice(multisets) if c == "M" else rng.choice(formulas)
                        for c in law.prefix)


def check_law(oracle, law_name: str, dom: SampleDomain) -> LawResult:
    """Test one law over the domain; returns the first violating instance."""
    registry = SYM_LAWS if getattr(oracle, "symmetric", False) else ASYM_LAWS
    if law_name not in registry:
        raise KeyError(f"no law named {law_name!r} for this oracle kind")
    law = registry[law_name]
    if (law.name == "TheoremRemoval" and not law.symmetric
            and getattr(oracle, "theorem_basis", None) is None):
        return LawResult(law.name, "inconclusive", None, False, 0)
    stream, count = _instances(law, oracle, dom)
    exhaustive = count is not None and count <= dom.exhaustive_cap
    if not exhaustive:
        stream = _sample_instances(law, oracle, dom)
    checked = 0
    sawunknown = False
    for instance in stream:
        checked += 1
        v = law.predicate(oracle, *instance)
        if v is FAILS:
            witness = dict(zip(law.names, instance))
            return LawResult(law.name, "counterexample", witness, exhaustive, checked)
        if v is UNKNOWN:
            sawunknown = True
    if sawunknown:
        return LawResult(law.name, "inconclusive", None, exhaustive, checked)
    return LawResult(law.name, "passed", None, exhaustive, checked)


def check_laws(oracle, dom: SampleDomain,
               names: Optional[Sequence[str]] = None) -> dict[str, LawResult]:
    selected = names or law_names(getattr(oracle, "symmetric", False))
    return {n: check_law(oracle, n, dom) for n in selected}


# -- the monotonic companion ------------------------------------------------------


def monotonic_companion(oracle: ConsequenceOracle, premises: FMultiset,
                        conclusion: Formula) -> Verdict:
    """The least monotone extension: some submultiset of the premises entails."""
    saw_unknown = False
    for sub in submultisets(premises):
        v = oracle.entails(sub, conclusion)
        if v is HOLDS:
            return HOLDS
        if v is UNKNOWN:
            saw_unknown = True
    return UNKNOWN if saw_unknown else FAILS


class MonotonicCompanion(ConsequenceOracle):
    def __init__(self, base: ConsequenceOracle):
        self.base = base
        self.name = f"{base.name}_m"
        self.theorem_basis = base.theorem_basis
        self._cache: dict = {}

    def entails(self, premises: FMultiset, conclusion: Formula) -> Verdict:
        key = (premises, conclusion)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = monotonic_companion(self.base, premises, conclusion)
        return hit


class SymmetricMonotonicCompanion(SymmetricOracle):
    def __init__(self, base: SymmetricOracle):
        self.base = base
        self.name = f"{base.name}_m"

    def entails(self, premises: FMultiset, conclusions: FMultiset) -> Verdict:
        saw_unknown = False
        for sub in submultisets(premises):
            v = self.base.entails(sub, conclusions)
            if v is HOLDS:
                return HOLDS
            if v is UNKNOWN:
                saw_unknown = True
        return UNKNOWN if saw_unknown else FAILS


# -- classification -----------------------------------------------------------------


@dataclass
class ClassifyReport:
    oracle_name: str
    symmetric: bool
    results: dict[str, LawResult]
    consistency_errors: list[str] = field(default_factory=list)

    def _ok(self, name: str) -> bool:
        r = self.results.get(name)
        return bool(r and r.passed)

    @property
    def is_consequence_relation(self) -> bool:
        if self.symmetric:
            return (self._ok("Reflexivity") and self._ok("Transitivity")
                    and self._ok("Compatibility"))
        return self._ok("Reflexivity") and self._ok("Cut")

    @property
    def is_monotone(self) -> bool:
        return self._ok("Monotonicity")

    @property
    def is_contractive(self) -> bool:
        if self.symmetric:
            return self._ok("Contraction") and self._ok("rContraction")
        return self._ok("Contraction")

    @property
    def is_tarskian(self) -> bool:
        return self.is_consequence_relation and self.is_monotone and self.is_contractive

    def summary(self) -> str:
        kind = "SCR" if self.symmetric else "CR"
        bits = [f"{kind}: {'yes' if self.is_consequence_relation else 'no'}",
                f"monotone: {'yes' if self.is_monotone else 'no'}",
                f"contractive: {'yes' if self.is_contractive else 'no'}",
                f"tarskian: {'yes' if self.is_tarskian else 'no'}"]
        return ", ".join(bits)


# The derived-law network: each entry says the conjunction of the premise
# laws forces the conclusion law.  Used as an internal cross-check.
SYM_IMPLICATIONS: tuple[tuple[tuple[str, ...], str], ...] = (
    (("Reflexivity", "Monotonicity"), "GeneralizedReflexivity"),
    (("GeneralizedReflexivity", "Transitivity"), "Monotonicity"),
    (("TheoremReflexivity", "Compatibility"), "GeneralizedReflexivity"),
    (("MultiCut",), "Transitivity"),
    (("MultiCut",), "TheoremRemoval"),
    (("MultiCut", "Reflexivity"), "Compatibility"),
    (("Transitivity", "Compatibility"), "MultiCut"),
)

ASYM_IMPLICATIONS: tuple[tuple[tuple[str, ...], str], ...] = (
    (("Reflexivity", "Cut", "Monotonicity"), "GeneralizedReflexivity"),
    (("Reflexivity", "Cut", "GeneralizedReflexivity"), "Monotonicity"),
    (("Reflexivity", "Cut"), "RelevantCut"),
    (("Reflexivity", "Cut"), "TheoremRemoval"),
)


def classify(oracle, dom: SampleDomain) -> ClassifyReport:
    """Run the full battery and cross-check the derived-law network."""
    symmetric = bool(getattr(oracle, "symmetric", False))
    results = check_laws(oracle, dom)
    report = ClassifyReport(getattr(oracle, "name", "oracle"), symmetric, results)
    network = SYM_IMPLICATIONS if symmetric else ASYM_IMPLICATIONS
    for premises_names, conclusion_name in network:
        rs = [results[n] for n in premises_names if n in results]
        conc = results.get(conclusion_name)
        if conc is None or len(rs) != len(premises_names):
            continue
        if all(r.passed for r in rs) and conc.status == "counterexample":
            report.consistency_errors.append(
                f"{' & '.join(premises_names)} passed but {conclusion_name} "
                f"failed at {conc.witness_str()}")
    return report
