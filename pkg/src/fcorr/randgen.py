"""Seeded random elements for property checks (stdlib `random` only)."""

import itertools
import random
from fractions import Fraction

from .coeffring import GaussianRational, Poly
from .gradedalg import FormElement


def rng(seed):
    return random.Random(seed)


def rand_scalar(r, field="Q"):
    q = Fraction(r.randint(-3, 3), r.choice((1, 1, 2, 3)))
    if field == "Qi" and r.random() < 0.3:
        return GaussianRational(q, r.randint(-2, 2)) if q else q
    return q


def rand_poly(r, vars, deg=2, nterms=3, field="Q"):
    terms = {}
    for _ in range(nterms):
        e = [0] * len(vars)
        for _ in range(r.randint(0, deg)):
            e[r.randrange(len(vars))] += 1
        terms[tuple(e)] = rand_scalar(r, field)
    return Poly(vars, terms)


def rand_form(r, scene, degree, deg=2, nterms=2):
    """Homogeneous form of exterior degree `degree` (zero if out of range)."""
    if degree < 0 or degree > scene.f:
        return scene.form(0)
    idx = list(itertools.combinations(range(scene.f), degree))
    terms = {}
    for _ in range(nterms):
        terms[r.choice(idx)] = rand_poly(r, scene.coords, deg, 2, scene.field)
    return FormElement(scene.coords, scene.f, terms)


def rand_section(r, scene, m, n, degree, nterms=3, deg=2):
    """Random element of Omega_F^degree(T_m^n B)."""
    t = scene.section(m, n)
    terms = {}
    for _ in range(nterms):
        w = tuple(r.randrange(scene.b) for _ in range(m + n))
        terms[w] = rand_form(r, scene, degree, deg)
    return t.new(terms=terms)


def rand_tensor(r, frame, kinds, degree, nterms=3, deg=2):
    """Random homogeneous DGTensor of total degree `degree`."""
    from .dgvec import DGTensor
    terms = {}
    proto = DGTensor(frame, kinds)
    for _ in range(nterms * 3):
        w = tuple(r.randrange(frame.N) for _ in kinds)
        fd = degree - proto.word_deg(w)
        if 0 <= fd <= frame.f:
            terms[w] = rand_form(r, frame.scene, fd, deg)
            if len(terms) >= nterms:
                break
    return DGTensor(frame, kinds, terms)


def rand_field(r, frame, degree, nterms=3, deg=2):
    return frame.to_field(rand_tensor(r, frame, ("vec",), degree, nterms, deg), degree)


def rand_polyvector(r, frame, degree, nterms=2, deg=1, max_arity=2):
    """Random homogeneous polyvector of total degree `degree`."""
    from .dgvec import Polyvector
    out = Polyvector(frame)
    for _ in range(nterms * 4):
        ar = r.randint(0, max_arity)
        gens = [r.randrange(frame.N) for _ in range(ar)]
        gd = sum(frame.fdeg[g] + 1 for g in gens)
        fd = degree - gd
        if not 0 <= fd <= frame.scene.f:
            continue
        t = Polyvector.form(frame, rand_form(r, frame.scene, fd, deg, 1))
        for g in gens:
            t = t * Polyvector.gen(frame, g)
        out = out + t
    return out
