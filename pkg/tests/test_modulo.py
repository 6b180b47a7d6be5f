import json
import random
from pathlib import Path

import pytest

from hurwitz_residues import modulo
from hurwitz_residues.modulo import (
    ConstructionError,
    PrimeModulus,
    ResidueTable,
    choose_branch,
    class_key,
    entries_from_sequence,
    left_congruent,
    mu,
    mu1,
    mu2,
    residue_table,
    right_congruent,
    two_component_primes,
    verify_anchors,
    verify_bijection,
    verify_homomorphism,
    verify_symmetry,
    verify_two_component_collapse,
)
from hurwitz_residues.quaternion import HurwitzInt, find_primes_with_norm, parse_quaternion

GOLDEN = json.loads((Path(__file__).parent / "golden" / "worked_tables.json").read_text())
SAMPLE_MODULI = ["5/2+3/2i+3/2j+3/2k", "3+2i", "3+i+j", "1+i", "2+i+j+k", "7/2+1/2i+1/2j+1/2k",
                 "1/2+3/2i-5/2j+3/2k", "-4+i", "2-3i+2j"]


def P(text: str) -> PrimeModulus:
    return PrimeModulus(parse_quaternion(text))


def test_modulus_must_be_prime():
    with pytest.raises(ValueError, match="not prime"):
        P("2+2i")
    assert P("3+2i").n == 13


def test_min_rule():
    assert choose_branch(4, 1, 2) == 1
    assert choose_branch(3, 2, 1) == 2
    assert choose_branch(2, 3, 3) == 1
    assert choose_branch(3, 3, 3) == 2


@pytest.mark.parametrize("alpha", ["5/2+3/2i+3/2j+3/2k", "3+2i"])
def test_worked_tables_match_transcription(alpha):
    m, g = P(alpha), GOLDEN[alpha]
    for z in range(m.n):
        assert mu1(m, z) == parse_quaternion(g["branch_one"][z])
        assert mu2(m, z) == parse_quaternion(g["branch_two"][z])
        e = mu(m, z)
        assert [e.branch, e.residue] == [g["chosen"][z][0], parse_quaternion(g["chosen"][z][1])]


def test_third_worked_table():
    m, g = P("3+i+j"), GOLDEN["3+i+j"]
    for z in range(m.n):
        assert mu1(m, z) == parse_quaternion(g["branch_one"][z])
        e = mu(m, z)
        assert [e.branch, e.residue] == [g["chosen"][z][0], parse_quaternion(g["chosen"][z][1])]
    mismatched = [z for z in range(m.n) if mu2(m, z) != parse_quaternion(g["branch_two"][z])]
    assert mismatched == [7]


def test_printed_branch_two_at_7_is_outside_the_class_of_7():
    # every branch-two value is 7 - alpha*h for a Hurwitz h, so it must be left-congruent to 7
    m = P("3+i+j")
    seven = HurwitzInt.from_ints(7)
    printed = parse_quaternion(GOLDEN["3+i+j"]["branch_two"][7])
    computed = mu2(m, 7)
    assert computed == parse_quaternion("3/2-1/2i+1/2j-3/2k")
    assert left_congruent(computed, seven, m)
    assert not left_congruent(printed, seven, m)
    assert right_congruent(printed, seven, m)
    assert (printed - computed) == HurwitzInt.from_ints(0, 0, 0, 3)


def test_congruence_side_matters():
    m = P("3+i+j")
    left_bad = [z for z in range(m.n) if not left_congruent(mu(m, z).residue, HurwitzInt.from_ints(z), m)]
    right_bad = [z for z in range(m.n) if not right_congruent(mu(m, z).residue, HurwitzInt.from_ints(z), m)]
    assert left_bad == []
    assert len(right_bad) == 2
    # a homomorphism check against the other side fails too
    table = residue_table(m)
    res = table.residues
    bad = sum(
        not right_congruent(res[(a * b) % m.n], res[a] * res[b], m)
        for a in range(m.n) for b in range(m.n)
    )
    assert bad > 0


def test_class_key_agrees_with_congruence():
    rng = random.Random(3)
    for text in SAMPLE_MODULI:
        m = P(text)
        for _ in range(300):
            odd = rng.randint(0, 1)
            a = HurwitzInt(*(2 * rng.randint(-9, 9) + odd for _ in range(4)))
            odd = rng.randint(0, 1)
            b = HurwitzInt(*(2 * rng.randint(-9, 9) + odd for _ in range(4)))
            assert (class_key(a, m) == class_key(b, m)) == left_congruent(a, b, m)
            h = HurwitzInt(*(2 * rng.randint(-9, 9) + odd for _ in range(4)))
            assert class_key(a + m.alpha * h, m) == class_key(a, m)


@pytest.mark.parametrize("alpha", SAMPLE_MODULI)
def test_oracles_pass_on_sample_moduli(alpha):
    m = P(alpha)
    t = residue_table(m)
    for rep in (verify_bijection(m, t), verify_homomorphism(m, t), verify_symmetry(m, t),
                verify_anchors(m)):
        assert rep.passed, rep.summary()
        assert rep.failures == 0 and rep.checked > 0


def test_anchor_details():
    m = P("3+2i")
    rep = verify_anchors(m)
    assert rep.details["mu1_at_n"] == "0"
    m = P("5/2+3/2i+3/2j+3/2k")
    assert verify_anchors(m).details["mu2_at_n"] == "0"
    assert mu2(m, 0).norm() == m.n


def test_construction_error_names_the_pair(monkeypatch):
    m = P("3+2i")
    real = modulo.mu

    def broken(mm, z):
        e = real(mm, z)
        if z == 5:
            return modulo.ResidueEntry(5, e.branch, real(mm, 4).residue, e.norms, e.mu1, e.mu2)
        return e

    monkeypatch.setattr(modulo, "mu", broken)
    with pytest.raises(ConstructionError) as err:
        residue_table(m)
    assert err.value.pair == (5, 5)
    assert "bijectivity" in str(err.value)


def test_oracles_report_injected_faults():
    m = P("5/2+3/2i+3/2j+3/2k")
    res = residue_table(m).residues
    swapped = list(res)
    swapped[2], swapped[3] = swapped[3], swapped[2]
    t = entries_from_sequence(m, swapped)
    bij = verify_bijection(m, t)
    assert not bij.passed and {w["z"] for w in bij.counterexamples if "z" in w} == {2, 3}
    assert not verify_homomorphism(m, t).passed
    assert not verify_symmetry(m, t).passed
    # moving a residue within its class keeps every congruence property
    shifted = list(res)
    shifted[4] = shifted[4] + m.alpha * HurwitzInt.from_ints(0, 1)
    t = entries_from_sequence(m, shifted)
    assert verify_bijection(m, t).passed
    assert verify_homomorphism(m, t).passed
    # a duplicate value is caught even though it is congruent to itself
    dup = list(res)
    dup[5] = dup[6]
    rep = verify_bijection(m, entries_from_sequence(m, dup))
    assert rep.failures >= 3


def test_witness_list_is_capped():
    m = P("3+2i")
    junk = [HurwitzInt.from_ints(1)] * m.n
    rep = verify_homomorphism(m, entries_from_sequence(m, junk))
    assert rep.failures > modulo.MAX_WITNESSES
    assert len(rep.counterexamples) == modulo.MAX_WITNESSES


def test_two_component_primes():
    ps = two_component_primes(13)
    assert all(p.nonzero_count() == 2 and p.is_lipschitz for p in ps)
    assert len([p for p in ps if p.norm() == 2]) == 24
    assert len([p for p in ps if p.norm() == 13]) == 48
    expected = {h for n in (2, 5, 13) for h in find_primes_with_norm(n, "integer")
                if h.nonzero_count() == 2}
    assert set(ps) == expected


def test_two_component_collapse_holds_for_odd_norms():
    moduli = [p for p in two_component_primes(61) if p.norm() > 2]
    rep = verify_two_component_collapse(61, moduli)
    assert rep.passed, rep.summary()


def test_two_component_collapse_breaks_at_norm_two():
    # both branches have norm 1 at z = 1; odd z sends the tie to branch two
    rep = verify_two_component_collapse(2)
    assert rep.failures == 24
    assert {w["z"] for w in rep.counterexamples} == {1}
    m = P("1+i")
    e = mu(m, 1)
    assert e.norms == (1, 1) and e.branch == 2 and e.residue == parse_quaternion("-k")


@pytest.mark.parametrize("alpha", ["3+i+j", "5/2+3/2i+3/2j+3/2k"])
def test_table_serialization_round_trip(alpha):
    t = residue_table(P(alpha))
    assert ResidueTable.from_json(t.to_json()) == t
    assert ResidueTable.from_csv(t.to_csv()) == t
    assert t.to_csv().splitlines()[0] == ",".join(ResidueTable.CSV_FIELDS)


def test_table_deserialization_checks_norm():
    data = residue_table(P("3+2i")).to_dict()
    data["norm"] = 11
    with pytest.raises(ValueError):
        ResidueTable.from_dict(data)
