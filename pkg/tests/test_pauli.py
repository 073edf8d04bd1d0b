"""Pauli algebra against a dense Kronecker oracle, plus group-law and
serialization properties."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import kron_chain, string_to_dense, sum_to_dense
from ttmap.pauli import (PauliError, PauliString, PauliSum, commutator,
                         format_string, format_sum, parse_string, parse_sum)

LETTERS = "IXYZ"


def word_string(word):
    """Build a PauliString letter by letter from a word like 'XIZ'."""
    n = len(word)
    p = PauliString.identity(n)
    for q, letter in enumerate(word):
        p = p * PauliString.from_letter(n, q, letter)
    return p


# -- exhaustive oracle comparison, n <= 3 --------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_words_match_dense_oracle(n):
    for word in itertools.product(LETTERS, repeat=n):
        word = "".join(word)
        p = word_string(word)
        assert np.allclose(string_to_dense(p), kron_chain(word))


@pytest.mark.parametrize("n", [1, 2])
def test_products_match_dense_oracle(n):
    words = ["".join(w) for w in itertools.product(LETTERS, repeat=n)]
    for wa in words:
        for wb in words:
            pa, pb = word_string(wa), word_string(wb)
            assert np.allclose(string_to_dense(pa * pb),
                               kron_chain(wa) @ kron_chain(wb))


def test_adjoint_matches_dense_oracle():
    for word in itertools.product(LETTERS, repeat=2):
        p = word_string("".join(word)).with_phase(1j)
        assert np.allclose(string_to_dense(p.adjoint()),
                           string_to_dense(p).conj().T)


def test_commutes_with_matches_dense_oracle():
    words = ["".join(w) for w in itertools.product(LETTERS, repeat=2)]
    for wa in words:
        for wb in words:
            a, b = kron_chain(wa), kron_chain(wb)
            expected = np.allclose(a @ b, b @ a)
            assert word_string(wa).commutes_with(word_string(wb)) == expected


def test_phase_conventions():
    n = 2
    y0 = PauliString.from_letter(n, 0, "Y")
    assert y0.phase == 1
    assert y0.is_hermitian
    x0 = PauliString.from_letter(n, 0, "X")
    z0 = PauliString.from_letter(n, 0, "Z")
    # XZ = -iY on the same qubit
    assert (x0 * z0).phase == -1j
    assert (z0 * x0).phase == 1j
    assert (x0 * z0).key == y0.key


def test_qubit_zero_is_most_significant():
    # Z on qubit 0 of two qubits: diag(+1, +1, -1, -1)
    z0 = PauliString.from_letter(2, 0, "Z")
    assert np.allclose(np.diag(string_to_dense(z0)), [1, 1, -1, -1])


# -- hypothesis group laws ----------------------------------------------

def strings(n):
    mask = st.integers(min_value=0, max_value=(1 << n) - 1)
    return st.builds(PauliString, st.just(n), mask, mask,
                     st.integers(min_value=0, max_value=3))


@given(strings(12), strings(12), strings(12))
@settings(max_examples=200, deadline=None)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(strings(12))
@settings(max_examples=100, deadline=None)
def test_identity_and_inverse(p):
    e = PauliString.identity(12)
    assert p * e == p and e * p == p
    inv = p.adjoint()
    prod = p * inv
    assert prod.key == (0, 0) and prod.phase == 1


@given(strings(10), strings(10))
@settings(max_examples=100, deadline=None)
def test_strings_commute_or_anticommute(a, b):
    ab, ba = a * b, b * a
    assert ab.key == ba.key
    if a.commutes_with(b):
        assert ab == ba
    else:
        assert (ab.phase_pow - ba.phase_pow) % 4 == 2


@given(strings(8))
@settings(max_examples=100, deadline=None)
def test_format_parse_roundtrip(p):
    assert parse_string(format_string(p), 8) == p


def test_parse_rejects_malformed():
    for bad in ["X0Y0", "Q3", "X0 Z1", "X12garbage", "X9"]:
        with pytest.raises(PauliError):
            parse_string(bad, 8)


def test_parse_examples():
    p = parse_string("-iX0Z2", 3)
    assert p.phase == -1j
    assert p.letter(0) == "X" and p.letter(1) == "I" and p.letter(2) == "Z"
    assert format_string(p) == "-iX0Z2"
    assert parse_string("", 2) == PauliString.identity(2)


def test_scalar_multiply_raises():
    with pytest.raises(PauliError):
        PauliString.from_letter(2, 0, "X") * 2.0


# -- PauliSum ------------------------------------------------------------

def test_sum_collects_and_prunes():
    n = 2
    s = PauliSum(n)
    x0 = PauliString.from_letter(n, 0, "X")
    s.add_string(x0, 0.5)
    s.add_string(x0.with_phase(-1), 0.5)     # cancels exactly
    assert s.is_zero()
    s.add_string(x0, 1e-15)
    assert s.is_zero()                        # below prune threshold


def test_sum_algebra_matches_dense_oracle():
    n = 2
    rng = np.random.default_rng(3)
    words = ["".join(w) for w in itertools.product(LETTERS, repeat=n)]
    a = PauliSum(n)
    b = PauliSum(n)
    for w in rng.choice(words, 5):
        a.add_string(word_string(w), complex(*rng.standard_normal(2)))
    for w in rng.choice(words, 5):
        b.add_string(word_string(w), complex(*rng.standard_normal(2)))
    da, db = sum_to_dense(a), sum_to_dense(b)
    assert np.allclose(sum_to_dense(a + b), da + db)
    assert np.allclose(sum_to_dense(a - b), da - db)
    assert np.allclose(sum_to_dense(a * b), da @ db)
    assert np.allclose(sum_to_dense(a * 2.5j), 2.5j * da)
    assert np.allclose(sum_to_dense(a.adjoint()), da.conj().T)
    assert np.allclose(sum_to_dense(commutator(a, b)), da @ db - db @ da)


def test_sum_serialization_roundtrip():
    n = 3
    rng = np.random.default_rng(11)
    s = PauliSum(n)
    words = ["".join(w) for w in itertools.product(LETTERS, repeat=n)]
    for w in rng.choice(words, 12, replace=False):
        s.add_string(word_string(w), complex(*rng.standard_normal(2)))
    back = parse_sum(format_sum(s))
    assert back.n_qubits == n
    assert set(back.terms) == set(s.terms)
    for key in s.terms:
        assert back.terms[key] == pytest.approx(s.terms[key], abs=1e-16)


def test_parse_sum_rejects_bad_input():
    with pytest.raises(PauliError):
        parse_sum("X0 1.0 0.0\n")                  # missing header
    with pytest.raises(PauliError):
        parse_sum("n_qubits 2\nX0 1.0\n")          # short record
