import pytest
from hypothesis import given, settings, strategies as st

from fcorr.gradedalg import (FormSection, koszul_perm_sign, merge_sign, parse_form, parse_tensor,
                             perm_parity, render_form, render_tensor)
from fcorr.randgen import rand_form, rand_section, rng

seeds = st.integers(0, 10 ** 6)


def test_merge_sign():
    assert merge_sign((1,), (0,)) == (-1, (0, 1))
    assert merge_sign((0, 2), (1,)) == (-1, (0, 1, 2))
    assert merge_sign((0,), (0,))[0] == 0


def test_perm_signs():
    assert perm_parity((1, 0, 2)) == -1
    assert koszul_perm_sign((1, 1), (1, 0)) == -1
    assert koszul_perm_sign((1, 2), (1, 0)) == 1


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_wedge_graded_commutative_and_associative(seed, scenes):
    s = scenes["quad4"]
    r = rng(seed)
    p, q = r.randint(0, 2), r.randint(0, 2)
    a, b, c = rand_form(r, s, p), rand_form(r, s, q), rand_form(r, s, r.randint(0, 2))
    assert a * b == (b * a if (p * q) % 2 == 0 else -(b * a))
    assert (a * b) * c == a * (b * c)


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_form_roundtrip(seed, scenes):
    s = scenes["quad4"]
    r = rng(seed)
    w = rand_form(r, s, r.randint(0, 2)) + rand_form(r, s, r.randint(0, 2))
    assert parse_form(render_form(w), s.coords, s.f) == w


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_tensor_roundtrip(seed, scenes):
    s = scenes["tilt3"]
    r = rng(seed)
    t = rand_section(r, s, 1, 1, r.randint(0, 1))
    names = {"zeta[%d]" % (a + 1): ("co", a) for a in range(s.b)}
    names.update({"Z[%d]" % (a + 1): ("vec", a) for a in range(s.b)})
    assert parse_tensor(render_tensor(t), t.new(terms={}), names) == t


def test_permute_and_contract(scenes):
    s = scenes["tilt3"]
    t = s.section(1, 1, {(0, 1): s.xi(0), (1, 1): s.form(1)})
    assert t.permute((1, 0)).permute((1, 0)) == t
    tr = t.contract_adjacent(0)
    assert tr.kinds == () and tr.terms == {(): s.form(1)}


def test_alt_kills_symmetric(scenes):
    s = scenes["tilt3"]
    t = s.section(2, 0, {(0, 1): s.form(1), (1, 0): s.form(1)})
    assert t.alt() == 0
