"""relcon: relevant (multiset-based) consequence relations.

Tree-proof checking and bounded search in axiomatic systems, symmetric
multiset derivations, integer and finite-matrix semantic oracles, a law
battery for consequence relations, and the monoid of principal theories.
"""

from .multiset import EMPTY, FMultiset, msum, submultisets
from .oracles import FAILS, HOLDS, UNKNOWN, ConsequenceOracle, SymmetricOracle, Verdict
from .syntax import (
    Atom,
    AxiomaticSystem,
    Conj,
    Consecution,
    Const,
    Disj,
    Formula,
    Fusion,
    Imp,
    NamedRule,
    Neg,
    ONE,
    ParseError,
    Schema,
    SymConsecution,
    TRUTH,
    Var,
    ZERO,
    load_system,
    match,
    numeral,
    parse_formula,
    parse_multiset,
    parse_system,
    print_formula,
    print_multiset,
    print_schema,
    print_system,
    substitute,
)
from .treeproof import (
    AxiomJust,
    NoPremiseLeafError,
    NotRelevantError,
    PremiseJust,
    ProofTree,
    RelevanceVerdict,
    RuleJust,
    RulesAbsentError,
    UnsupportedSystemError,
    axiom_leaf,
    cut_compose,
    deduction_transform,
    dump_proof,
    leaf_multiset,
    load_proof,
    premise_leaf,
    pump_use,
    search,
    verify,
    verify_report,
)
from .symmetric import (
    AsymmetricPart,
    Derivation,
    DerivationOracle,
    DerivationVerdict,
    DeriveResult,
    Extraction,
    RuleApp,
    Symmetrization,
    TreeSearchOracle,
    asymmetric_query,
    check_derivation,
    derive_search,
    dump_derivation,
    extract_tree,
    load_derivation,
    symmetrize_query,
)
from .semantics import (
    AbelianOracle,
    AbelianSymmetricOracle,
    EvalError,
    IdentityOracle,
    LinearForm,
    Matrix,
    MatrixOracle,
    SingleAtomThresholdOracle,
    countermodel_search,
    int_eval,
    linear_form,
    load_matrix,
    matrix_eval,
    parse_matrix,
    print_matrix,
)
from .laws import (
    ClassifyReport,
    LawResult,
    MonotonicCompanion,
    SampleDomain,
    SymmetricMonotonicCompanion,
    check_law,
    check_laws,
    classify,
    law_names,
    monotonic_companion,
)
from .theory import (
    OracleMismatchError,
    PreconditionError,
    QuotientReport,
    TheoryHandle,
    UnionTheoryReport,
    interderivable,
    quotient_check,
    th_add,
    th_contains,
    th_eq,
    th_leq,
    th_zero,
    theory,
    union_theory_check,
)

__version__ = "0.1.0"
