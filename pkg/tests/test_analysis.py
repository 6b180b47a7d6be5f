import json
from fractions import Fraction

import pytest

from hurwitz_residues.analysis import (
    average_energy,
    balanced_representatives,
    code_rate,
    render_decimal,
    table1,
    table1_csv,
    table1_markdown,
)
from hurwitz_residues.modulo import PrimeModulus
from hurwitz_residues.quaternion import find_primes_with_norm, is_prime_int, parse_quaternion


def E(text: str) -> Fraction:
    return average_energy(PrimeModulus(parse_quaternion(text))).average_energy


def test_worked_energies():
    assert E("5/2+3/2i+3/2j+3/2k") == Fraction(24, 13)
    assert E("3+2i") == Fraction(28, 13)
    assert E("3+i+j") == Fraction(24, 11)


def test_half_integer_class_beats_3_plus_2i():
    assert E("5/2+3/2i+3/2j+3/2k") < E("3+2i")


def test_report_fields():
    rep = average_energy(parse_quaternion("3+2i"))
    assert rep.total_norm == 28
    assert rep.decimal == "2.1539"
    assert rep.text() == "28/13 ≈ 2.1539"
    assert json.loads(rep.to_json()) == {
        "alpha": "3+2i", "norm": 13, "total_norm": 28, "average_energy": "28/13",
        "decimal": "2.1539",
    }


@pytest.mark.parametrize(
    "x, text",
    [
        (Fraction(24, 13), "1.8462"),
        (Fraction(28, 13), "2.1539"),
        (Fraction(24, 11), "2.1818"),
        (Fraction(6, 7), "0.8571"),
        (Fraction(48, 19), "2.5263"),
        (Fraction(132, 31), "4.2581"),
        (Fraction(186, 37), "5.0270"),
        (Fraction(6), "6.0000"),
        (Fraction(1, 8), "0.1250"),
        (Fraction(-1, 3), "-0.3333"),
    ],
)
def test_render_decimal(x, text):
    assert render_decimal(x) == text


def test_render_decimal_stays_within_rounding_distance():
    for den in range(1, 400):
        for num in range(0, 3 * den):
            x = Fraction(num, den)
            assert abs(Fraction(render_decimal(x)) - x) <= Fraction(1, 10**4) * Fraction(11, 20)


def test_energy_bounds_on_small_moduli():
    for p in (2, 3, 5, 7, 11, 13):
        for a in find_primes_with_norm(p)[::7]:
            e = E(str(a))
            assert 0 < e < p


def test_balanced_representatives():
    assert [str(h) for h in balanced_representatives(13, "integer")] == ["2+2i+2j+k"]
    assert [str(h) for h in balanced_representatives(13, "half-integer")] == [
        "5/2+3/2i+3/2j+3/2k", "7/2+1/2i+1/2j+1/2k"]


def test_table1_rows():
    rows = table1(50)
    assert [r.n for r in rows] == [7, 13, 19, 31, 37, 43]
    assert [r.decimal for r in rows] == ["0.8571", "1.8462", "2.5263", "4.2581", "5.0270",
                                         "6.0000"]
    for r in rows:
        assert len(set(r.half_energies)) == 1
        assert len(r.integer_reps) == 1 and len(r.half_reps) == 2
        assert r.integer_class_agrees


def test_table1_outputs():
    rows = table1(20)
    md = table1_markdown(rows)
    assert md.splitlines()[2].startswith("| 7 | 2+i+j+k |")
    csv_text = table1_csv(rows)
    assert csv_text.splitlines()[1].startswith("7,2+i+j+k,3/2+3/2i+3/2j+1/2k;5/2+1/2i+1/2j+1/2k,6/7")
    with pytest.raises(ValueError):
        table1(6)


@pytest.mark.parametrize(
    "p, k, n, rate",
    [(73, 1, 3, Fraction(1, 3)), (97, 1, 4, Fraction(1, 4)), (73, 2, 222, Fraction(1, 111)),
     (193, 1, 8, Fraction(1, 8))],
)
def test_code_rate(p, k, n, rate):
    r = code_rate(p, k)
    assert (r.n, r.rate) == (n, rate)
    assert 24 * r.n + 1 == p**k


def test_code_rate_identity_for_all_admissible_primes():
    for p in range(2, 2000):
        if is_prime_int(p) and p % 24 == 1:
            for k in (1, 2, 3):
                r = code_rate(p, k)
                assert 24 * r.n + 1 == p**k and r.rate == Fraction(24 * k, p**k - 1)


def test_code_rate_rejections():
    with pytest.raises(ValueError, match="not 1 mod 24"):
        code_rate(71)
    with pytest.raises(ValueError, match="not prime"):
        code_rate(25)
    with pytest.raises(ValueError):
        code_rate(73, 0)
    assert code_rate(73).text() == "(3,1)-code, R = 1/3"
    assert json.loads(code_rate(97).to_json()) == {"p": 97, "k": 1, "n": 4, "rate": "1/4"}
