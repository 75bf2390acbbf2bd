from hypothesis import given, settings, strategies as st

from fcorr.dgvec import (Polyvector, frame_of, lie_derivative, lie_derivative_pv, schouten,
                         vf_bracket)
from fcorr.randgen import rand_field, rand_polyvector, rand_tensor, rng

seeds = st.integers(0, 10 ** 6)
NAMES = ("flat2", "tilt3", "contact3", "cplx1", "quad4")


def sgn(e):
    return -1 if e % 2 else 1


def test_Q_is_homological(scenes):
    for s in scenes.values():
        Q = frame_of(s).Q
        assert vf_bracket(Q, Q).is_zero()


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_LQ_squared_on_tensors(seed, scenes):
    r = rng(seed)
    for name in NAMES:
        fr = frame_of(scenes[name])
        T = rand_tensor(r, fr, ("co", "vec"), r.randint(-1, 1))
        assert lie_derivative(lie_derivative(T)) == 0


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_frame_lie_derivative_matches_bracket(seed, scenes):
    r = rng(seed)
    for name in NAMES:
        fr = frame_of(scenes[name])
        X = rand_field(r, fr, r.randint(-1, 1))
        assert fr.to_tensor(vf_bracket(fr.Q, X)) == lie_derivative(fr.to_tensor(X))


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_vector_field_jacobi(seed, scenes):
    r = rng(seed)
    fr = frame_of(scenes["quad4"])
    d = [r.randint(-1, 0) for _ in range(3)]
    X, Y, Z = [rand_field(r, fr, k) for k in d]
    lhs = vf_bracket(X, vf_bracket(Y, Z))
    rhs = vf_bracket(vf_bracket(X, Y), Z)
    t = vf_bracket(Y, vf_bracket(X, Z))
    rhs = rhs + (t if (d[0] * d[1]) % 2 == 0 else -t)
    assert (lhs - rhs).is_zero()


@settings(max_examples=12, deadline=None)
@given(seed=seeds)
def test_gerstenhaber_axioms(seed, scenes):
    r = rng(seed)
    for name in ("tilt3", "contact3", "cplx1"):
        fr = frame_of(scenes[name])
        da, db, dc = [r.randint(0, 3) for _ in range(3)]
        A, B, C = [rand_polyvector(r, fr, d) for d in (da, db, dc)]
        assert schouten(A, B) == schouten(B, A).scale(-sgn((da - 1) * (db - 1)))
        assert schouten(A, schouten(B, C)) == (schouten(schouten(A, B), C)
                                               + schouten(B, schouten(A, C)).scale(sgn((da - 1) * (db - 1))))
        assert schouten(A, B * C) == schouten(A, B) * C + (B * schouten(A, C)).scale(sgn((da - 1) * db))
        assert A * B == (B * A).scale(sgn(da * db))


@settings(max_examples=8, deadline=None)
@given(seed=seeds)
def test_LQ_squared_on_polyvectors(seed, scenes):
    r = rng(seed)
    for name in ("tilt3", "quad4"):
        P = rand_polyvector(r, frame_of(scenes[name]), r.randint(0, 3))
        assert lie_derivative_pv(lie_derivative_pv(P)) == 0


def test_schouten_example(scenes):
    s = scenes["contact3"]
    fr = frame_of(s)
    from fcorr.coeffring import Poly
    z = Polyvector.form(fr, s.form(Poly.var(s.coords, "z")))
    x = s.form(Poly.var(s.coords, "x"))
    P = Polyvector.gen(fr, fr.psiZ(0)) * Polyvector.gen(fr, fr.psiZ(1))
    assert schouten(P, z) == Polyvector.gen(fr, fr.psiZ(0), x)
