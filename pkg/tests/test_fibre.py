import random

import pytest

from subdirect.fibre import (
    Classification,
    FibreSpec,
    SubdirectElement,
    classify_two_factor,
    coset_index,
    example_fixtures,
    generators,
    member,
    normality_test,
    random_word,
    sb_family,
    sb_restriction_check,
    three_factor_kernel,
)
from subdirect.intlin import AbelianGroup
from subdirect.presentations import FiniteGroup
from subdirect.stallings import NotSurjectiveError, fold_from_generators, member as graph_member
from subdirect.words import Alphabet, parse_word

FX = example_fixtures()


def E(spec, *texts):
    return SubdirectElement(parse_word(t, A) for t, A in zip(texts, spec.factors))


def test_example1_generators():
    g = generators(FX["example1"])
    assert [str(t) for t in g.tuples()] == ["(c1, d1)", "(c2, d2)", "(c2, 1)", "(1, d2)"]
    assert all(member(FX["example1"], t) for t in g.tuples())


def test_example2_generators_contain_commutator():
    spec = FX["example2"]
    ts = generators(spec).tuples()
    assert E(spec, "A1A2a1a2", "") in ts
    assert all(member(spec, t) for t in ts)


def test_examples_classify():
    got = {k: classify_two_factor(v).kind for k, v in FX.items()}
    assert got == {
        "example1": Classification.FG_NOT_FP,
        "example2": Classification.UNKNOWN,
        "example3": Classification.NOT_FG,
        "example4": Classification.UNKNOWN,
        "example5": Classification.UNKNOWN,
    }


def test_membership():
    spec = FX["example1"]
    assert member(spec, E(spec, "c1c2c2", "d2d1"))
    assert not member(spec, E(spec, "c1", "d2"))


@pytest.mark.parametrize("name", sorted(FX))
def test_json_roundtrip(name):
    spec = FX[name]
    back = FibreSpec.from_json(spec.to_json())
    assert back.to_json() == spec.to_json()


def test_surjectivity_checked():
    with pytest.raises(NotSurjectiveError):
        FibreSpec((Alphabet(2), Alphabet(2)), AbelianGroup(1), (((2,), (0,)), ((1,), (0,))))


def test_untwisted_checked():
    with pytest.raises(ValueError):
        FibreSpec((Alphabet(1), Alphabet(1)), AbelianGroup(1), (((1,),), ((-1,),)), untwisted=True)


def test_finite_quotient_index():
    Q = AbelianGroup.from_orders([2, 2])
    spec = FibreSpec((Alphabet(2), Alphabet(2)), Q, (((1, 0), (0, 1)),) * 2, untwisted=True)
    g = generators(spec)
    assert g.exact and len(g.tuples()) == 12
    D = [SubdirectElement((w, spec.factors[1].identity())) for w in spec.factors[0].gens]
    D += [SubdirectElement((spec.factors[0].identity(), w)) for w in spec.factors[1].gens]
    assert coset_index(D, lambda e: member(spec, e)) == 4
    K = [fold_from_generators(ws, A) for ws, A in zip(g.kernel, spec.factors)]
    in_L = lambda e: all(graph_member(k, w) for k, w in zip(K, e))
    assert coset_index(g.tuples(), in_L) == 4


def test_nonabelian_quotient_not_normal():
    S3 = FiniteGroup.symmetric(3)
    s, r = S3.element((1, 0, 2)), S3.element((1, 2, 0))
    spec = FibreSpec((Alphabet(2), Alphabet(2)), S3, ((s, r), (r, s)))
    assert not normality_test(spec)
    assert normality_test(FX["example1"])
    rng = random.Random(3)
    ts = generators(spec).tuples()
    assert all(member(spec, t) for t in ts)
    for _ in range(50):
        w = SubdirectElement((random_word(spec.factors[0], 5, rng), random_word(spec.factors[1], 5, rng)))
        if member(spec, w):
            assert all(member(spec, w * t) for t in ts)


def test_sb_family():
    spec, gens = sb_family(3)
    assert spec.kernel_mode and len(gens) == 3 + 2 * 3
    assert all(member(spec, g) for g in gens.values())
    assert sb_restriction_check(3, samples=200)


def test_three_factor_report():
    A = [Alphabet(2, (f"a{i}", f"b{i}")) for i in (1, 2, 3)]
    rep = three_factor_kernel(A, AbelianGroup(0, (3,)), [[(1,), (0,)], [(1,), (1,)], [(2,), (0,)]], samples=100)
    assert rep.passed
    assert all(rep.member(c) for c in rep.candidates)


def test_kernel_mode_needs_abelian():
    S3 = FiniteGroup.symmetric(3)
    s, r = S3.element((1, 0, 2)), S3.element((1, 2, 0))
    with pytest.raises(ValueError):
        FibreSpec((Alphabet(2),) * 3, S3, ((s, r),) * 3, kernel_mode=True)
