import numpy as np
import pytest
from hypothesis import given, strategies as st

from foldaut.free_group import (EndoMap, K, K3, Permutation, S, TypeTwo, abelianize, apply,
                                as_permutation, commutator, compose, cyclically_reduce,
                                exponent_vector, fixes_up_to_conjugacy, format_word, inverse,
                                is_reduced, multiply, nielsen, reduce, rho, whitehead_apply)

letters = st.integers(-4, 4).filter(bool)
raw_words = st.lists(letters, max_size=30)


def slow_reduce(w):
    """Cancel one adjacent pair per pass until nothing changes."""
    w = list(w)
    while True:
        for k in range(len(w) - 1):
            if w[k] == -w[k + 1]:
                del w[k:k + 2]
                break
        else:
            return tuple(w)


def test_reduce_examples():
    assert reduce([1, -1]) == ()
    assert reduce([1, 2, -2, 3]) == (1, 3)
    assert reduce([1, -2, 2, -2]) == (1, -2)


@given(raw_words)
def test_reduce_matches_repeated_scan(w):
    r = reduce(w)
    assert r == slow_reduce(w)
    assert is_reduced(r)
    assert reduce(r) == r


@given(raw_words, raw_words)
def test_inverse_cancels(u, v):
    u = reduce(u)
    assert multiply(u, inverse(u)) == ()
    assert inverse(multiply(u, v)) == multiply(inverse(v), inverse(u))


def test_cyclically_reduce_examples():
    assert cyclically_reduce((2, 1, -2)) == ((1,), (2,))
    assert cyclically_reduce((1,)) == ((1,), ())
    assert cyclically_reduce((1, 2, 3, -2, -1)) == ((3,), (1, 2))
    assert cyclically_reduce(()) == ((), ())


@given(raw_words)
def test_cyclic_reduction_recombines(w):
    w = reduce(w)
    core, c = cyclically_reduce(w)
    assert multiply(c, core, inverse(c)) == w
    assert len(core) <= 1 or core[0] != -core[-1]


def test_apply_examples():
    assert apply(EndoMap.identity(2), (1, 2)) == (1, 2)
    assert apply(EndoMap(((1, 2), (2,))), (1, -2)) == (1,)
    assert apply(EndoMap(((2, 1, -2), (2,))), (-1,)) == (2, -1, -2)


def test_compose_examples():
    f = rho(1, 2, 2)
    assert compose(EndoMap.identity(2), f) == f
    assert compose(S(1, 2), S(1, 2)).is_identity()
    assert compose(f, f).images == ((1, 2, 2), (2,))


def test_composition_applies_right_factor_first():
    f, g = rho(1, 2, 2), K(2, 1, 2)
    w = (1, 2, -1)
    assert (f * g)(w) == f(g(w))


def test_rank_mismatch():
    with pytest.raises(ValueError):
        EndoMap.identity(2) * EndoMap.identity(3)


def test_bad_letters_rejected():
    with pytest.raises(ValueError):
        EndoMap(((1,), (3,)))
    with pytest.raises(ValueError):
        EndoMap(((0,),))


def test_type_two_examples():
    W = TypeTwo({1, 2}, 1)
    assert whitehead_apply(W, 3).images == ((1,), (1, 2), (3,))
    assert TypeTwo({1, 2, -2}, 1).to_map(2).images == ((1,), (1, 2, -1))
    assert TypeTwo({1}, 1).to_map(3).is_identity()
    assert TypeTwo({1}, 1).is_identity()


def test_type_two_validation():
    with pytest.raises(ValueError):
        TypeTwo({2}, 1)
    with pytest.raises(ValueError):
        TypeTwo({1, -1}, 1)


@given(st.data())
def test_type_two_inverse(data):
    n = data.draw(st.integers(2, 5))
    a = data.draw(st.sampled_from([x for i in range(1, n + 1) for x in (i, -i)]))
    others = [x for i in range(1, n + 1) if i != abs(a) for x in (i, -i)]
    A = {a} | set(data.draw(st.lists(st.sampled_from(others), unique=True)))
    W = TypeTwo(A, a)
    assert (W.to_map(n) * W.inverse().to_map(n)).is_identity()


def test_permutation():
    P = Permutation((2, 1), (1, -1))
    assert P.to_map().images == ((2,), (-1,))
    assert (P.to_map() * P.inverse().to_map()).is_identity()
    assert as_permutation(P.to_map()) == P
    assert as_permutation(rho(1, 2, 2)) is None
    with pytest.raises(ValueError):
        Permutation((1, 1), (1, 1))


def test_nielsen_examples():
    assert rho(1, 2, 2).images == ((1, 2), (2,))
    assert K(1, 2, 2).images == ((2, 1, -2), (2,))
    assert K3(1, 2, 3, 3).images == ((1, 2, 3, -2, -3), (2,), (3,))
    assert nielsen("S", 2, n=2).images == ((1,), (-2,))
    with pytest.raises(ValueError):
        nielsen("T", 1, n=2)
    with pytest.raises(ValueError):
        rho(1, 1, 2)


def test_abelianize_examples():
    assert np.array_equal(abelianize(EndoMap.identity(3)), np.eye(3))
    E21 = np.eye(2, dtype=np.int64)
    E21[1, 0] = 1
    assert np.array_equal(abelianize(rho(1, 2, 2)), E21)
    assert np.array_equal(abelianize(K(1, 2, 2)), np.eye(2))
    assert list(exponent_vector((1, -2, 1), 2)) == [2, -1]


def test_fixes_up_to_conjugacy():
    assert fixes_up_to_conjugacy(K(2, 1, 2), 2)
    assert not fixes_up_to_conjugacy(rho(1, 2, 2), 1)
    assert all(fixes_up_to_conjugacy(EndoMap.identity(3), j) for j in (1, 2, 3))


def test_format():
    assert format_word(()) == "1"
    assert format_word((1, -2)) == "x1 x2^-1"
    assert str(TypeTwo({1, -2}, 1)) == "(A={x1, x2^-1}, a=x1)"
    assert str(rho(1, 2, 2)) == "x1->x1 x2, x2->x2"


def test_commutator():
    assert commutator((1,), (2,)) == (1, 2, -1, -2)
    assert commutator((1,), (1,)) == ()
