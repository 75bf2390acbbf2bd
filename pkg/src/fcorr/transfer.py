"""Transferred brackets lambda_k on Omega_F(wedge B) from the Schouten algebra
of polyvector fields on F[1], through the contraction (Phi, Psi, H).

Conventions (symmetric braces): a polyvector of total degree |A| carries the
Koszul parity |A|; the binary operation is l(A, B) = (-1)^{|A|-1} [A, B]_SN and
the homotopy enters as -H.  Then lambda_1 = d_B and
    d_B l2(a, b) + l2(d_B a, b) + (-1)^{|a|} l2(a, d_B b) = 0.
Only arity <= 1 in the wedge direction is needed: on generator inputs every
intermediate polyvector is a form or a single vector field.
"""

import itertools
from dataclasses import dataclass

from .contraction import CheckResult, contraction_of
from .dgvec import DGTensor, Polyvector, frame_of, schouten
from .gradedalg import FormElement, FormSection, render_form, render_tensor


class TransferError(ValueError):
    pass


@dataclass
class BElem:
    """Element of Omega_F + Omega_F(B): a form part and a B-vector part."""
    form: FormElement
    vec: FormSection

    def __add__(self, other):
        return BElem(self.form + other.form, self.vec + other.vec)

    def __neg__(self):
        return BElem(-self.form, -self.vec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        return BElem(self.form * q, self.vec.scale(q))

    def is_zero(self):
        return not self.form and self.vec == 0

    def __eq__(self, other):
        return isinstance(other, BElem) and (self - other).is_zero()

    __hash__ = None

    @property
    def degree(self):
        ds = set(self.form.degrees()) | {d + 1 for d in self.vec.degrees()}
        if not ds:
            return 0
        if len(ds) > 1:
            raise TransferError("inhomogeneous element")
        return ds.pop()

    def render(self):
        parts = []
        if self.form:
            parts.append(render_form(self.form))
        if self.vec != 0:
            parts.append(render_tensor(self.vec))
        return " + ".join(parts) if parts else "0"


def _sgn(e):
    return -1 if e % 2 else 1


class Transfer:
    def __init__(self, scene):
        self.scene = scene
        self.fr = frame_of(scene)
        self.C = contraction_of(scene)
        self._memo = {}

    # elements

    def zero(self):
        s = self.scene
        return BElem(s.form(0), s.section(0, 1))

    def of_form(self, w):
        if not isinstance(w, FormElement):
            w = self.scene.form(w)
        return BElem(w, self.scene.section(0, 1))

    def of_vec(self, sigma):
        return BElem(self.scene.form(0), sigma)

    def generator(self, label):
        """'Z1', 'xi2' or a coordinate name (a function)."""
        s = self.scene
        if label.startswith("Z") and label[1:].isdigit():
            a = int(label[1:]) - 1
            return self.of_vec(s.section(0, 1, {(a,): s.form(1)}))
        if label.startswith("xi") and label[2:].isdigit():
            return self.of_form(s.xi(int(label[2:]) - 1))
        if label in s.coords:
            from .coeffring import Poly
            return self.of_form(s.form(Poly.var(s.coords, label)))
        raise TransferError("unknown generator %r" % label)

    def generators(self):
        s = self.scene
        return (["Z%d" % (a + 1) for a in range(s.b)]
                + ["xi%d" % (k + 1) for k in range(s.f)] + list(s.coords))

    # the three maps on arity <= 1

    def Psi(self, x):
        out = Polyvector.form(self.fr, x.form)
        if x.vec != 0:
            t = self.C.big_psi(x.vec)
            for (g,), c in t.terms.items():
                out = out + Polyvector.gen(self.fr, g, c)
        return out

    def _split_pv(self, P):
        form = self.scene.form(0)
        vec = {}
        fr = self.fr
        for (odd, ev), c in P.terms.items():
            n = len(odd) + sum(ev)
            if n == 0:
                form = form + c
            elif n == 1:
                g = odd[0] if odd else fr.b + fr.f + ev.index(1)
                vec[(g,)] = c
            else:
                raise TransferError("polyvector of wedge degree %d outside the transfer range" % n)
        return form, DGTensor(fr, ("vec",), vec)

    def Phi(self, P):
        form, t = self._split_pv(P)
        return BElem(form, self.C.big_phi(t))

    def H(self, P):
        _, t = self._split_pv(P)
        out = Polyvector(self.fr)
        for (g,), c in self.C.big_h(t).terms.items():
            out = out + Polyvector.gen(self.fr, g, c)
        return out

    def ell(self, A, B):
        """Symmetric binary operation (-1)^{|A|-1}[A, B]_SN, A homogeneous."""
        if not A or not B:
            return Polyvector(self.fr)
        v = schouten(A, B)
        return -v if (A.degree - 1) % 2 else v

    # brackets

    def lambda1(self, x):
        s = self.scene
        return BElem(s.d_F(x.form), s.d_B(x.vec))

    def lambda2(self, a, b):
        return self.Phi(self.ell(self.Psi(a), self.Psi(b)))

    def _inner(self, labels, xs):
        """Polyvector p(x_1..x_n): Psi for n = 1, -H(sum of splits) otherwise."""
        key = None if labels is None else ("p",) + labels
        if key is not None and key in self._memo:
            return self._memo[key]
        if len(xs) == 1:
            v = self.Psi(xs[0])
        else:
            v = -self.H(self._splits(labels, xs))
        if key is not None:
            self._memo[key] = v
        return v

    def _splits(self, labels, xs):
        n = len(xs)
        degs = [x.degree for x in xs]
        total = Polyvector(self.fr)
        rest = list(range(1, n))
        for r in range(0, n - 1):
            for extra in itertools.combinations(rest, r):
                I = (0,) + extra
                J = tuple(i for i in rest if i not in extra)
                # Koszul sign of moving x_I in front of x_J
                e = sum(degs[i] * degs[j] for i in I for j in J if j < i)
                sub = lambda ids: (tuple(labels[i] for i in ids) if labels is not None else None,
                                   [xs[i] for i in ids])
                A = self._inner(*sub(I))
                if not A:
                    continue
                B = self._inner(*sub(J))
                if not B:
                    continue
                v = self.ell(A, B)
                total = total + (-v if e % 2 else v)
        return total

    def lambda_k(self, xs, labels=None):
        if len(xs) == 1:
            return self.lambda1(xs[0])
        return self.Phi(self._splits(tuple(labels) if labels else None, list(xs)))

    def lambda_gen(self, labels):
        return self.lambda_k([self.generator(l) for l in labels], labels)

    # closed forms

    def lambda2_closed(self, la, lb):
        """lambda_2 on a pair of generators without any transfer machinery."""
        a, b = self.generator(la), self.generator(lb)
        kind = lambda l: "Z" if l.startswith("Z") and l[1:].isdigit() else "w"
        if kind(la) == "w" and kind(lb) == "Z":
            v = self.lambda2_closed(lb, la)
            return v.scale(_sgn(a.degree * b.degree))
        s = self.scene
        if kind(la) == "w":
            return self.zero()
        ia = int(la[1:]) - 1
        jZ = s.b_frame[ia]
        if kind(lb) == "Z":
            _, bpart = s.zz_bracket[ia][int(lb[1:]) - 1]
            return self.of_vec(s.section(0, 1, {(c,): s.form(p) for c, p in enumerate(bpart) if p}))
        if lb.startswith("xi"):
            return self.of_form(self._lie_xi_on_f(jZ, int(lb[2:]) - 1))
        from .coeffring import Poly, vf_derive
        return self.of_form(s.form(vf_derive(jZ, Poly.var(s.coords, lb))))

    def _lie_xi_on_f(self, X, k):
        """pr_{F^dual} L_X xi^k, with xi^k the coframe one-form in coordinates."""
        s = self.scene
        alpha = s.frame_inverse[k]
        n = s.dim
        out = s.form(0)
        for i, V in enumerate(s.f_frame):
            val = s.poly(0)
            for nu in range(n):
                L = s.poly(0)
                for mu in range(n):
                    L = L + X.components[mu] * alpha[nu].diff(mu) + alpha[mu] * X.components[mu].diff(nu)
                val = val + L * V.components[nu]
            if val:
                out = out + s.xi(i) * val
        return out

    def lambda3_closed(self, a, b, k):
        """iota_{pr_F [jZ_a, jZ_b]} xi^k (0-based indices)."""
        fpart, _ = self.scene.zz_bracket[a][b]
        return self.of_form(self.scene.form(fpart[k]))


def transfer_of(scene):
    d = scene.__dict__
    if "_transfer" not in d:
        d["_transfer"] = Transfer(scene)
    return d["_transfer"]


def _fail(res, what, got, want=None):
    msg = "%s: got %s" % (what, got.render())
    if want is not None:
        msg += ", expected %s" % want.render()
    res.record(False, msg)


def transfer_suite(scene, k_max=6, rand_count=10, seed=0):
    from .randgen import rand_form, rand_section, rng
    T = transfer_of(scene)
    gens = T.generators()
    out = []

    res = CheckResult("lambda2_closed", scene.name, ("gen", "gen"))
    for la in gens:
        for lb in gens:
            got = T.lambda_gen([la, lb])
            want = T.lambda2_closed(la, lb)
            if got == want:
                res.record(True, None)
            else:
                _fail(res, "lambda2(%s,%s)" % (la, lb), got, want)
    out.append(res)

    res = CheckResult("lambda2_symmetric", scene.name, ("gen", "gen"))
    for la, lb in itertools.combinations(gens, 2):
        a, b = T.generator(la), T.generator(lb)
        x, y = T.lambda2(a, b), T.lambda2(b, a).scale(_sgn(a.degree * b.degree))
        if x == y:
            res.record(True, None)
        else:
            _fail(res, "lambda2(%s,%s) vs swapped" % (la, lb), x, y)
    out.append(res)

    res = CheckResult("lambda3_closed", scene.name, ("Z", "Z", "xi"))
    for a in range(scene.b):
        for b in range(scene.b):
            for k in range(scene.f):
                labels = ["Z%d" % (a + 1), "Z%d" % (b + 1), "xi%d" % (k + 1)]
                got = T.lambda_gen(labels)
                want = T.lambda3_closed(a, b, k)
                if got == want:
                    res.record(True, None)
                else:
                    _fail(res, "lambda3(%s)" % ",".join(labels), got, want)
    out.append(res)

    res = CheckResult("lambda3_vanishing", scene.name, ("B|xi",) * 3)
    Zs = ["Z%d" % (a + 1) for a in range(scene.b)]
    Xs = ["xi%d" % (k + 1) for k in range(scene.f)]
    triples = list(itertools.combinations_with_replacement(Zs, 3))
    triples += [(z,) + p for z in Zs for p in itertools.combinations_with_replacement(Xs, 2)]
    triples += list(itertools.combinations_with_replacement(Xs, 3))
    for t in triples:
        got = T.lambda_gen(list(t))
        if got.is_zero():
            res.record(True, None)
        else:
            _fail(res, "lambda3(%s)" % ",".join(t), got)
    out.append(res)

    for k in range(4, k_max + 1):
        res = CheckResult("lambda%d_vanishing" % k, scene.name, ("gen",) * k)
        for t in itertools.combinations_with_replacement(gens, k):
            got = T.lambda_gen(list(t))
            if got.is_zero():
                res.record(True, None)
            else:
                _fail(res, "lambda%d(%s)" % (k, ",".join(t)), got)
        out.append(res)

    res = CheckResult("linf_12", scene.name, ("rand", "rand"))
    r = rng(seed)
    pool = []
    for _ in range(rand_count):
        if r.random() < 0.5:
            pool.append(T.of_form(rand_form(r, scene, r.randint(0, scene.f))))
        else:
            pool.append(T.of_vec(rand_section(r, scene, 0, 1, r.randint(0, scene.f), 2)))
    pool += [T.generator(g) for g in gens]
    for i in range(len(pool)):
        a, b = pool[i], pool[(i * 7 + 3) % len(pool)]
        lhs = (T.lambda1(T.lambda2(a, b)) + T.lambda2(T.lambda1(a), b)
               + T.lambda2(a, T.lambda1(b)).scale(_sgn(a.degree)))
        if lhs.is_zero():
            res.record(True, None)
        else:
            _fail(res, "l1 l2 + l2(l1 x 1 + 1 x l1) at (%s, %s)" % (a.render(), b.render()), lhs)
    out.append(res)
    return out
