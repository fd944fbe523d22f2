"""Consequence oracles: three-valued decision procedures for entailment.

An asymmetric oracle decides premise-multiset |- formula queries, a symmetric
one decides multiset |- multiset queries.  UNKNOWN is reserved for honestly
bound-limited answers; everything else is exact.

Oracles may declare a finite theorem basis or a sound decision hook for the
"entails every theorem" test that empty-conclusion symmetrization needs, and
may declare themselves monotone_contractive (Tarskian), which switches the
symmetrization to the componentwise rule appropriate for that case.
"""

from __future__ import annotations

from enum import Enum
from typing import Optional, Sequence

from .multiset import FMultiset
from .syntax import Formula


class Verdict(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value

    def __bool__(self) -> bool:
        return self is Verdict.HOLDS


HOLDS = Verdict.HOLDS
FAILS = Verdict.FAILS
UNKNOWN = Verdict.UNKNOWN


def verdict(b: bool) -> Verdict:
    return HOLDS if b else FAILS


class ConsequenceOracle:
    """Base for asymmetric oracles: entails(premises, conclusion) -> Verdict."""

    name = "oracle"
    symmetric = False
    monotone_contractive = False
    theorem_basis: Optional[Sequence[Formula]] = None

    def entails(self, premises: FMultiset, conclusion: Formula) -> Verdict:
        raise NotImplementedError

    def entails_all_theorems(self, premises: FMultiset) -> Verdict:
        """Decide 'premises entail every theorem'; UNKNOWN when undecided.

        The default folds over a declared finite theorem basis and is exact
        only relative to that declaration.
        """
        if self.theorem_basis is None:
            return UNKNOWN
        out = HOLDS
        for theorem in self.theorem_basis:
            v = self.entails(premises, theorem)
            if v is FAILS:
                return FAILS
            if v is UNKNOWN:
                out = UNKNOWN
        return out


class SymmetricOracle:
    """Base for symmetric oracles: entails(premises, conclusions) -> Verdict."""

    name = "oracle"
    symmetric = True
    monotone_contractive = False

    def entails(self, premises: FMultiset, conclusions: FMultiset) -> Verdict:
        raise NotImplementedError


class CachedOracle(ConsequenceOracle):
    """Memoizing wrapper; safe because oracles are pure."""

    def __init__(self, base: ConsequenceOracle):
        self.base = base
        self.name = base.name
        self.monotone_contractive = base.monotone_contractive
        self.theorem_basis = base.theorem_basis
        self._cache: dict = {}

    def entails(self, premises: FMultiset, conclusion: Formula) -> Verdict:
        key = (premises, conclusion)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self.base.entails(premises, conclusion)
        return hit

    def entails_all_theorems(self, premises: FMultiset) -> Verdict:
        return self.base.entails_all_theorems(premises)


class CachedSymmetricOracle(SymmetricOracle):
    def __init__(self, base: SymmetricOracle):
        self.base = base
        self.name = base.name
        self.monotone_contractive = base.monotone_contractive
        self._cache: dict = {}

    def entails(self, premises: FMultiset, conclusions: FMultiset) -> Verdict:
        key = (premises, conclusions)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self.base.entails(premises, conclusions)
        return hit
