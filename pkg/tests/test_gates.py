import itertools

import pytest
from hypothesis import given, strategies as st

from revram.gates import (
    PAPER_GATES,
    CatalogError,
    apply_gate,
    builtin_gate,
    catalog_names,
    inverse_table,
    is_bijective,
    parity_gate,
)


@pytest.mark.parametrize("name", PAPER_GATES)
def test_paper_gates_bijective(name):
    assert is_bijective(builtin_gate(name))


@pytest.mark.parametrize("name", ["MFRG1_PRINTED", "MFRG2_PRINTED"])
def test_printed_variants_collide(name):
    spec = builtin_gate(name)
    assert not is_bijective(spec)
    assert not spec.reversible_expected
    # A=1 forces Q=0, so C is lost
    assert apply_gate(spec, (1, 0, 0)) == apply_gate(spec, (1, 0, 1))


def test_printed_mfrg1_exact_collision():
    spec = builtin_gate("mf1p")
    assert apply_gate(spec, (1, 0, 0)) == apply_gate(spec, (1, 0, 1)) == (1, 0, 0)


@pytest.mark.parametrize(
    "name, bits, expected",
    [
        ("TG", (1, 1, 0), (1, 1, 1)),
        ("FG", (0, 0), (0, 0)),
        ("FRG", (1, 0, 1), (1, 1, 0)),
        ("DFG", (0, 1, 1), (0, 1, 1)),
        ("MFRG2", (1, 1, 0), (0, 0, 1)),
        ("PG", (1, 1, 0), (1, 0, 1)),
        ("NOT", (0,), (1,)),
    ],
)
def test_apply_examples(name, bits, expected):
    assert apply_gate(builtin_gate(name), bits) == expected


def test_mfrg1_full_table():
    expected = {
        (0, 0, 0): (0, 0, 0), (0, 0, 1): (0, 1, 1), (0, 1, 0): (0, 1, 0), (0, 1, 1): (0, 0, 1),
        (1, 0, 0): (1, 0, 0), (1, 0, 1): (1, 1, 0), (1, 1, 0): (1, 0, 1), (1, 1, 1): (1, 1, 1),
    }
    spec = builtin_gate("MFRG1")
    for bits, out in expected.items():
        assert apply_gate(spec, bits) == out


def test_mfrg2_is_mfrg1_with_inverted_p():
    m1, m2 = builtin_gate("MFRG1"), builtin_gate("MFRG2")
    for bits in itertools.product((0, 1), repeat=3):
        p1, q1, r1 = apply_gate(m1, bits)
        p2, q2, r2 = apply_gate(m2, bits)
        assert (1 - p1, q1, r1) == (p2, q2, r2)


@pytest.mark.parametrize("name", ["NOT", "FG", "DFG", "TG", "FRG"])
def test_self_inverse(name):
    spec = builtin_gate(name)
    assert inverse_table(spec) == spec.permutation


def test_lookup_by_mnemonic_and_alias():
    assert builtin_gate("t3") is builtin_gate("TG")
    assert builtin_gate("Toffoli").name == "TG"
    assert builtin_gate("mf2").name == "MFRG2"
    with pytest.raises(CatalogError):
        builtin_gate("XYZ")
    assert set(PAPER_GATES) <= set(catalog_names())


def test_quantum_costs():
    costs = {name: builtin_gate(name).quantum_cost for name in PAPER_GATES}
    assert costs == {"FG": 1, "DFG": 2, "TG": 5, "FRG": 5, "PG": 4, "MFRG1": 4, "MFRG2": 5}


def test_bad_width_rejected():
    with pytest.raises(ValueError):
        apply_gate(builtin_gate("TG"), (1, 0))


@given(st.integers(2, 9), st.data())
def test_parity_gate(width, data):
    spec = parity_gate(width)
    assert is_bijective(spec)
    assert spec.quantum_cost == width
    bits = tuple(data.draw(st.lists(st.integers(0, 1), min_size=width, max_size=width)))
    out = apply_gate(spec, bits)
    assert out[:-1] == bits[:-1]
    assert out[-1] == sum(bits) % 2
    assert builtin_gate(f"mfg{width}") == spec
