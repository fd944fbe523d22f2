import random

import pytest

from relcon import (
    Derivation,
    DerivationVerdict,
    FMultiset,
    HOLDS,
    FAILS,
    UNKNOWN,
    Imp,
    RelevanceVerdict,
    RuleApp,
    check_derivation,
    derive_search,
    dump_derivation,
    extract_tree,
    load_derivation,
    parse_formula,
    parse_multiset,
    symmetrize_query,
    verify,
)
from relcon.semantics import AbelianSymmetricOracle
from relcon.symmetric import (
    AsymmetricPart,
    DerivationOracle,
    ExtractionError,
    Symmetrization,
    TreeSearchOracle,
    asymmetric_query,
    partition_count,
    _ordered_partitions,
)
from conftest import (
    random_concrete_system,
    random_relevant_derivation,
)

a, b, c, xx = map(parse_formula, ["a", "b", "c", "x"])
ms = parse_multiset


def five_premise_derivation():
    return Derivation(
        (ms("[a->b, a->c, a, a, a]"), ms("[a->c, a, a, b]"), ms("[a, b, c]")),
        (RuleApp("mp"), RuleApp("mp")),
    )


# -- derivation checking ---------------------------------------------------------


def test_five_premise_example(bci):
    d = five_premise_derivation()
    assert check_derivation(d, bci, ms("[a->b, a->c, a, a, a]"),
                            ms("[a, b, c]")) is DerivationVerdict.RELEVANT


def test_axiom_in_context(bci):
    d = Derivation((ms("[a]"), ms("[a, a -> a]")), (RuleApp("I"),))
    assert check_derivation(d, bci, ms("[a]"),
                            ms("[a -> a, a]")) is DerivationVerdict.RELEVANT


def test_plain_when_conclusions_submultiset(bci):
    d = five_premise_derivation()
    assert check_derivation(d, bci, ms("[a->b, a->c, a, a, a]"),
                            ms("[b, c]")) is DerivationVerdict.PLAIN


def test_invalid_cases(bci):
    d = five_premise_derivation()
    # wrong starting multiset
    assert check_derivation(d, bci, ms("[a->b, a->c, a, a]"),
                            ms("[a, b, c]")) is DerivationVerdict.INVALID
    # conclusions not contained in the last step
    assert check_derivation(d, bci, ms("[a->b, a->c, a, a, a]"),
                            ms("[a, b, c, c]")) is DerivationVerdict.INVALID
    # an illegal transition
    bad = Derivation((ms("[a]"), ms("[b]")), (RuleApp("mp"),))
    assert check_derivation(bad, bci, ms("[a]"), ms("[b]")) is DerivationVerdict.INVALID
    # unknown rule name
    bad2 = Derivation((ms("[a]"), ms("[a, a -> a]")), (RuleApp("nope"),))
    assert check_derivation(bad2, bci, ms("[a]"),
                            ms("[a -> a, a]")) is DerivationVerdict.INVALID


def test_stored_subst_validated(bci):
    good = Derivation((ms("[a]"), ms("[a, a -> a]")), (RuleApp("I", {"p": a}),))
    assert check_derivation(good, bci, ms("[a]"),
                            ms("[a -> a, a]")) is DerivationVerdict.RELEVANT
    bad = Derivation((ms("[a]"), ms("[a, a -> a]")), (RuleApp("I", {"p": b}),))
    assert check_derivation(bad, bci, ms("[a]"),
                            ms("[a -> a, a]")) is DerivationVerdict.INVALID


def test_one_step_reflexivity(bci):
    d = Derivation((ms("[x, y]"),), ())
    assert check_derivation(d, bci, ms("[x, y]"),
                            ms("[y, x]")) is DerivationVerdict.RELEVANT


# -- derivation search ------------------------------------------------------------


def test_derive_mp(bci):
    result = derive_search(bci, ms("[a->b, a]"), ms("[b]"))
    assert result.found and len(result.derivation.steps) == 2
    assert check_derivation(result.derivation, bci, ms("[a->b, a]"),
                            ms("[b]")) is DerivationVerdict.RELEVANT


def test_derive_axiom_in_context(bci):
    result = derive_search(bci, ms("[a]"), ms("[a -> a, a]"))
    assert result.found
    assert check_derivation(result.derivation, bci, ms("[a]"),
                            ms("[a -> a, a]")) is DerivationVerdict.RELEVANT


def test_derive_trivial_equality(toy_xy):
    result = derive_search(toy_xy, ms("[x, y]"), ms("[y, x]"))
    assert result.found and len(result.derivation.steps) == 1


def test_derive_five_premise(bci):
    premises, conclusions = ms("[a->b, a->c, a, a, a]"), ms("[a, b, c]")
    result = derive_search(bci, premises, conclusions, max_steps=6)
    assert result.found
    assert check_derivation(result.derivation, bci, premises,
                            conclusions) is DerivationVerdict.RELEVANT


def test_derive_four_premise_negative(bci):
    premises, conclusions = ms("[a->b, a->c, a, a]"), ms("[a, b, c]")
    result = derive_search(bci, premises, conclusions,
                           max_steps=8, max_formula_size=7)
    assert not result.found
    assert result.status == "exhausted"
    # independent certificate: the integer-sum relation contains lifted BCI
    # and refutes this consecution
    zs = AbelianSymmetricOracle()
    assert zs.entails(premises, conclusions) is FAILS
    assert zs.entails(ms("[a->b, a->c, a, a, a]"), conclusions) is HOLDS


def test_derive_truncation_reported(bci):
    result = derive_search(bci, ms("[a->b, a->c, a, a]"), ms("[a, b, c]"),
                           max_steps=1, max_formula_size=7)
    assert not result.found and result.status == "truncated"
    assert "steps" in result.pruned_by


# -- symmetrization ----------------------------------------------------------------


def test_partition_enumeration():
    gamma = ms("[x, x, y]")
    parts = list(_ordered_partitions(gamma, 2))
    assert len(parts) == partition_count(gamma, 2) == 6
    for g1, g2 in parts:
        assert g1 + g2 == gamma


def test_symmetrize_threshold_relation(ex54_asym):
    assert asymmetric_query(ex54_asym.base, ms("[x]"), xx) is HOLDS
    assert asymmetric_query(ex54_asym.base, ms("[x, x]"), xx) is FAILS
    assert symmetrize_query(ex54_asym, ms("[x, x, x]"), ms("[x, x]")) is FAILS


def test_symmetrize_integer_sum(z_oracle):
    assert symmetrize_query(z_oracle, ms("[]"), ms("[1, -1]")) is FAILS
    assert symmetrize_query(z_oracle, ms("[1, 2]"), ms("[1, 2]")) is HOLDS


def test_symmetrize_reflexive_split(z_oracle):
    # any reflexive oracle accepts a multiset split into its own singletons
    gamma = ms("[1, -2, 3]")
    assert symmetrize_query(z_oracle, gamma, gamma) is HOLDS


def test_symmetrize_empty_conclusions(z_oracle):
    # the entails-every-theorem clause, decided by the oracle hook
    assert symmetrize_query(z_oracle, ms("[-1]"), ms("[]")) is HOLDS
    assert symmetrize_query(z_oracle, ms("[1]"), ms("[]")) is FAILS


def test_symmetrize_empty_without_hook_is_unknown(ex54):
    bare = AsymmetricPart(ex54)  # no declared theorem basis
    assert symmetrize_query(bare, ms("[x]"), ms("[]")) is UNKNOWN


def test_symmetrize_partition_cap(z_oracle):
    gamma = FMultiset([parse_formula(str(k)) for k in range(-3, 4)] * 3)
    conclusions = ms("[0, 0, 0, 0, 0]")
    assert partition_count(gamma, 5) > 10 ** 3
    assert symmetrize_query(z_oracle, gamma, conclusions,
                            partition_cap=10 ** 3) is UNKNOWN


def test_symmetrization_oracle_wrapper(z_oracle):
    sym = Symmetrization(z_oracle)
    assert sym.entails(ms("[]"), ms("[1, -1]")) is FAILS
    assert sym.entails(ms("[1, 1]"), ms("[2]")) is HOLDS


def test_asymmetric_part(zsym, z_oracle):
    za = AsymmetricPart(zsym)
    for premises, conclusion in [("[1]", "1"), ("[1, 1]", "1"), ("[]", "0"),
                                 ("[1]", "0"), ("[-2, 1]", "-1")]:
        assert za.entails(ms(premises), parse_formula(conclusion)) is \
            z_oracle.entails(ms(premises), parse_formula(conclusion))


def test_asymmetric_part_reflexive_on_every_scr(zsym, psym, ex54):
    # [f] |- f holds for the asymmetric part of each bundled symmetric oracle
    for oracle, formulas in [(zsym, ["1", "-2", "p", "p -> q"]),
                             (psym, ["1", "-2", "0"]),
                             (ex54, ["x"])]:
        part = AsymmetricPart(oracle)
        for text in formulas:
            f = parse_formula(text)
            assert part.entails(FMultiset([f]), f) is HOLDS, (oracle.name, text)


# -- closure properties of derivability (sampled) -----------------------------------


def test_derivability_reflexivity_compatibility_transitivity(bci):
    rng = random.Random(23)
    for i in range(30):
        system = random_concrete_system(rng, f"C{i}")
        d = random_relevant_derivation(rng, system)
        start, end = d.steps[0], d.steps[-1]
        assert check_derivation(d, system, start, end) is DerivationVerdict.RELEVANT
        # compatibility: lift every step by a context
        pi = FMultiset([a, Imp(a, b)])
        lifted = Derivation(tuple(s + pi for s in d.steps), d.step_rules)
        assert check_derivation(lifted, system, start + pi,
                                end + pi) is DerivationVerdict.RELEVANT
    # transitivity: concatenate two relevant derivations sharing the middle
    d1 = derive_search(bci, ms("[a->b, a]"), ms("[b]")).derivation
    d2 = Derivation((ms("[b]"), ms("[b, b -> b]")), (RuleApp("I"),))
    joined = Derivation(d1.steps + d2.steps[1:], d1.step_rules + d2.step_rules)
    assert check_derivation(joined, bci, ms("[a->b, a]"),
                            ms("[b -> b, b]")) is DerivationVerdict.RELEVANT


# -- tree extraction -----------------------------------------------------------------


def test_extract_bci_example(bci):
    d = five_premise_derivation()
    premises, conclusions = ms("[a->b, a->c, a, a, a]"), ms("[a, b, c]")
    ext = extract_tree(d, bci, premises, conclusions, b)
    assert ext.premises_used == ms("[a->b, a]")
    assert ext.premises_rest == ms("[a->c, a, a]")
    assert ext.premises_used + ext.premises_rest == premises
    assert verify(ext.tree, bci, ext.premises_used, b) >= RelevanceVerdict.RELEVANT
    assert check_derivation(ext.residual, bci, ext.premises_rest,
                            ms("[a, c]")) is DerivationVerdict.RELEVANT


def test_extract_one_step(bci):
    d = Derivation((ms("[x]"),), ())
    ext = extract_tree(d, bci, ms("[x]"), ms("[x]"), xx)
    assert ext.premises_used == ms("[x]")
    assert ext.tree.node_count() == 1
    assert ext.premises_rest == FMultiset()
    assert ext.residual.steps == (FMultiset(),)


def test_extract_preconditions(bci):
    d = five_premise_derivation()
    premises, conclusions = ms("[a->b, a->c, a, a, a]"), ms("[a, b, c]")
    with pytest.raises(ExtractionError):
        extract_tree(d, bci, premises, ms("[b, c]"), b)  # not relevant for these
    with pytest.raises(ExtractionError):
        extract_tree(d, bci, premises, conclusions, parse_formula("q"))


def test_extract_random_derivations():
    rng = random.Random(31)
    done = 0
    for i in range(150):
        system = random_concrete_system(rng, f"S{i}")
        d = random_relevant_derivation(rng, system)
        conclusions = d.steps[-1]
        if conclusions.size == 0:
            continue
        premises = d.steps[0]
        phi = rng.choice(conclusions.distinct())
        ext = extract_tree(d, system, premises, conclusions, phi)
        assert ext.premises_used + ext.premises_rest == premises
        assert verify(ext.tree, system, ext.premises_used, phi) >= RelevanceVerdict.RELEVANT
        assert check_derivation(ext.residual, system, ext.premises_rest,
                                conclusions - FMultiset([phi])) is DerivationVerdict.RELEVANT
        done += 1
    assert done >= 100


# -- genuinely symmetric systems -----------------------------------------------------


SWAP_SYSTEM = """
system Swap symmetric
axiom pair : p, q -> p
rule  dup  : p, p |- p, p, p
"""


def test_symmetric_system_derivations():
    from relcon import parse_system

    system = parse_system(SWAP_SYSTEM)
    # the axiom introduces a two-formula multiset in context
    d = Derivation((ms("[c]"), ms("[a, b -> a, c]")),
                   (RuleApp("pair", {"p": a, "q": b}),))
    assert check_derivation(d, system, ms("[c]"),
                            ms("[a, b -> a, c]")) is DerivationVerdict.RELEVANT
    # a rule with a multi-formula right side
    d2 = Derivation((ms("[a, a]"), ms("[a, a, a]")), (RuleApp("dup"),))
    assert check_derivation(d2, system, ms("[a, a]"),
                            ms("[a, a, a]")) is DerivationVerdict.RELEVANT
    # inferred substitution for the axiom
    d3 = Derivation((ms("[c]"), ms("[a, b -> a, c]")), (RuleApp("pair"),))
    assert check_derivation(d3, system, ms("[c]"),
                            ms("[a, b -> a, c]")) is DerivationVerdict.RELEVANT


def test_symmetric_system_derive_search():
    from relcon import parse_system

    system = parse_system(SWAP_SYSTEM)
    result = derive_search(system, ms("[b, b]"), ms("[b, b, b]"), max_steps=3)
    assert result.found
    assert check_derivation(result.derivation, system, ms("[b, b]"),
                            ms("[b, b, b]")) is DerivationVerdict.RELEVANT


# -- oracles backed by search ----------------------------------------------------------


def test_derivation_oracle(bci):
    oracle = DerivationOracle(bci, max_steps=6)
    assert oracle.entails(ms("[a->b, a]"), ms("[b]")) is HOLDS
    assert oracle.entails(ms("[a]"), ms("[a -> a, a]")) is HOLDS


def test_tree_search_oracle(bci):
    oracle = TreeSearchOracle(bci, max_nodes=6)
    assert oracle.entails(ms("[a->b, a]"), b) is HOLDS
    assert oracle.entails(ms("[a]"), b) is UNKNOWN  # bounded: not a disproof


def test_symmetrized_tree_search_agrees_with_derive(bci):
    # single-conclusion systems: partitioned tree provability matches
    # derivation search on small positive instances
    tree_oracle = TreeSearchOracle(bci, max_nodes=4)
    samples = [
        ("[a->b, a]", "[b]"),
        ("[a]", "[a -> a, a]"),
        ("[a->b, a->c, a, a, a]", "[a, b, c]"),
        ("[a, b]", "[b, a]"),
    ]
    for premises, conclusions in samples:
        via_partition = symmetrize_query(tree_oracle, ms(premises), ms(conclusions))
        via_derivation = derive_search(bci, ms(premises), ms(conclusions),
                                       max_steps=6).found
        assert via_partition is HOLDS
        assert via_derivation


# -- derivation files ---------------------------------------------------------------------


def test_derivation_json_roundtrip(bci):
    d = five_premise_derivation()
    text = dump_derivation(d)
    again = load_derivation(text)
    assert again == d
    assert dump_derivation(again) == text


def test_derivation_json_rules_required():
    with pytest.raises(ValueError):
        load_derivation('[{"multiset": "[a]"}, {"multiset": "[a, b]"}]')
    with pytest.raises(ValueError):
        load_derivation('[]')
