from fractions import Fraction

import pytest
import sympy

from fcorr.classes import (RoutesDisagree, atiyah_pair, ber_route_a, ber_route_b, compute_classes,
                           connection_suite, induced_connection, m_sequence, random_dg_connection,
                           s_of, todd_coefficients)
from fcorr.coeffring import Poly
from fcorr.dgvec import frame_of
from fcorr.liepair import CORPUS
from fcorr.randgen import rng


def k_oracle(Q, r):
    """Degree-r part of prod_i Q(x_i) over r variables, as a sympy expression."""
    xs = sympy.symbols("x1:%d" % (r + 1))
    t = sympy.Symbol("t")
    prod = 1
    for x in xs:
        prod *= sympy.series(Q(t * x), t, 0, r + 1).removeO()
    prod = sympy.expand(prod)
    return xs, sympy.expand(prod).coeff(t, r)


def k_as_sympy(K, xs):
    ps = [sum(x ** k for x in xs) for k in range(1, len(K.vars) + 1)]
    out = 0
    for e, c in K.terms.items():
        m = sympy.Rational(c.numerator, c.denominator)
        for p, n in zip(ps, e):
            m *= p ** n
        out += m
    return sympy.expand(out)


def test_todd_coefficients_match_series():
    x = sympy.Symbol("x")
    ser = sympy.series(x / (1 - sympy.exp(-x)), x, 0, 7).removeO()
    b = todd_coefficients(6)
    for k in range(7):
        c = ser.coeff(x, k)
        assert b[k] == Fraction(int(c.p), int(c.q))


def test_k_values():
    K = m_sequence(todd_coefficients(2), 2)
    p1, p2 = Poly.var(K[1].vars, "p1"), Poly.var(K[1].vars, "p2")
    assert K[1] == p1 * Fraction(1, 2)
    assert K[2] == p1 * p1 * Fraction(1, 8) - p2 * Fraction(1, 24)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_todd_sequence_oracle(r):
    K = m_sequence(todd_coefficients(r), r)
    xs, want = k_oracle(lambda y: y / (1 - sympy.exp(-y)), r)
    assert k_as_sympy(K[r], xs) == want


@pytest.mark.parametrize("r", [1, 2, 3])
def test_newton_identities(r):
    K = m_sequence([Fraction(1), Fraction(1)] + [Fraction(0)] * r, r)
    xs, want = k_oracle(lambda y: 1 + y, r)
    assert k_as_sympy(K[r], xs) == want


def test_tilt3_curvature(scenes):
    s = scenes["tilt3"]
    R = atiyah_pair(s, induced_connection(s))
    x, z = (Poly.var(s.coords, v) for v in ("x", "z"))
    want = s.section(2, 1, {(0, 0, 0): s.xi(0) * x, (0, 0, 1): s.xi(0) * (-z)})
    assert R == want


def test_flat2_trivial(scenes):
    rep = compute_classes(scenes["flat2"])
    assert rep.ok
    assert not rep.atiyah_pair
    assert all(not v for v in rep.c_pair.values())


def test_contact3_c2_vanishes(scenes):
    rep = compute_classes(scenes["contact3"], k_max=2)
    assert rep.ok
    assert not rep.c_pair[2] and not rep.c_dg[2]


@pytest.mark.parametrize("name", CORPUS)
def test_certificates(name, scenes):
    rep = compute_classes(scenes[name])
    bad = [c.name for c in rep.certificates if not c.ok]
    assert not bad


@pytest.mark.parametrize("name", ["tilt3", "quad4"])
def test_random_connection_certificates(name, scenes):
    s = scenes[name]
    r = rng(11)
    for _ in range(3):
        rep = compute_classes(s, random_dg_connection(r, frame_of(s)), k_max=s_of(s) + 1)
        assert [c.name for c in rep.certificates if not c.ok] == []


@pytest.mark.parametrize("name", CORPUS)
def test_connection_suite(name, scenes):
    for res in connection_suite(scenes[name], 20, 0):
        assert res.ok and res.checked >= 20


def test_two_routes_agree_on_random_input(scenes):
    s = scenes["quad4"]
    from fcorr.classes import atiyah_dg
    r = rng(2)
    b = todd_coefficients(3)
    for _ in range(3):
        A = atiyah_dg(s, random_dg_connection(r, frame_of(s)))
        assert ber_route_a(A, b, 2) == ber_route_b(A, b, 2)
