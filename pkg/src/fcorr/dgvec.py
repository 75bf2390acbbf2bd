"""Vector fields on F[1] as derivations of Omega_F, tensors over the canonical frame,
the homological field Q = d_F and the Lie derivative L_Q."""

from functools import cached_property

from .coeffring import Poly
from .gradedalg import FormElement, SlotTensor, FrameMismatch


class SignatureError(ValueError):
    pass


class DGVectorField:
    """A derivation of Omega_F of a fixed degree, stored by its values on
    the coordinates x_mu (forms of degree `degree`) and on xi^k (degree + 1)."""

    __slots__ = ("scene", "degree", "xs", "xis")

    def __init__(self, scene, degree, xs, xis):
        self.scene = scene
        self.degree = degree
        self.xs = tuple(xs)
        self.xis = tuple(xis)

    @classmethod
    def zero(cls, scene, degree):
        z = scene.form(0)
        return cls(scene, degree, [z] * scene.dim, [z] * scene.f)

    def _same(self, other):
        if other.scene is not self.scene:
            raise FrameMismatch("vector fields from different scenes")

    def apply(self, omega):
        s = self.scene
        if isinstance(omega, Poly):
            omega = s.form(omega)
        out = s.form(0)
        odd = self.degree % 2
        for I, p in omega.terms.items():
            basis = s.form(1)
            for k in I:
                basis = basis * s.xi(k)
            # X(p) xi^I
            for mu in range(s.dim):
                dp = p.diff(mu)
                if dp and self.xs[mu]:
                    out = out + self.xs[mu] * basis * dp
            # p X(xi^I), X passes p freely (degree 0)
            for r, k in enumerate(I):
                if not self.xis[k]:
                    continue
                left = s.form(1)
                for kk in I[:r]:
                    left = left * s.xi(kk)
                right = s.form(1)
                for kk in I[r + 1:]:
                    right = right * s.xi(kk)
                t = left * self.xis[k] * right * p
                out = out + (-t if odd and r % 2 else t)
        return out

    __call__ = apply

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        if other.degree != self.degree and not (other.is_zero() or self.is_zero()):
            raise ValueError("adding vector fields of different degree")
        deg = self.degree if not self.is_zero() else other.degree
        return DGVectorField(self.scene, deg,
                             [a + b for a, b in zip(self.xs, other.xs)],
                             [a + b for a, b in zip(self.xis, other.xis)])

    __radd__ = __add__

    def __neg__(self):
        return DGVectorField(self.scene, self.degree, [-a for a in self.xs],
                             [-a for a in self.xis])

    def __sub__(self, other):
        return self + (-other)

    def lmul(self, omega):
        """omega * X for omega a homogeneous form (or Poly/number)."""
        if not isinstance(omega, FormElement):
            omega = self.scene.form(omega)
        d = omega.degree if omega else 0
        return DGVectorField(self.scene, self.degree + d,
                             [omega * a for a in self.xs], [omega * a for a in self.xis])

    def is_zero(self):
        return not any(self.xs) and not any(self.xis)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, DGVectorField):
            return NotImplemented
        return self.xs == other.xs and self.xis == other.xis and (
            self.degree == other.degree or self.is_zero())

    __hash__ = None

    def __repr__(self):
        return "DGVectorField(deg=%d, x=%r, xi=%r)" % (self.degree, self.xs, self.xis)


def vf_apply(X, omega):
    return X.apply(omega)


def vf_bracket(X, Y):
    """Graded commutator XY - (-1)^{|X||Y|} YX."""
    X._same(Y)
    sgn = -1 if (X.degree * Y.degree) % 2 else 1

    def gen(vx, vy):
        a = X.apply(vy)
        b = Y.apply(vx)
        return a - b if sgn > 0 else a + b

    return DGVectorField(X.scene, X.degree + Y.degree,
                         [gen(a, b) for a, b in zip(X.xs, Y.xs)],
                         [gen(a, b) for a, b in zip(X.xis, Y.xis)])


def homological_field(scene):
    xs = []
    for mu in range(scene.dim):
        w = scene.form(0)
        for i, V in enumerate(scene.f_frame):
            if V.components[mu]:
                w = w + scene.xi(i) * V.components[mu]
        xs.append(w)
    return DGVectorField(scene, 1, xs, scene.dxi)


class DGFrame:
    """Canonical frame of X(F[1]): psiZ_a (a < b), Vhat_i, iota_i, in that order."""

    def __init__(self, scene):
        self.scene = scene
        self.vars = scene.coords
        self.f = scene.f
        self.b = scene.b
        self.N = scene.b + 2 * scene.f
        self.fdeg = [0] * (scene.b + scene.f) + [-1] * scene.f

    def kind_of(self, idx):
        if idx < self.b:
            return "psiZ", idx
        if idx < self.b + self.f:
            return "Vhat", idx - self.b
        return "iV", idx - self.b - self.f

    def psiZ(self, a):
        return a

    def vhat(self, i):
        return self.b + i

    def iota(self, i):
        return self.b + self.f + i

    def name(self, idx, dual=False):
        k, j = self.kind_of(idx)
        return "%s[%d]%s" % (k, j + 1, "*" if dual else "")

    def names(self):
        out = {}
        for idx in range(self.N):
            out[self.name(idx)] = ("vec", idx)
            out[self.name(idx, True)] = ("co", idx)
        return out

    @cached_property
    def fields(self):
        s = self.scene
        z = s.form(0)
        out = []
        for a, Z in enumerate(s.b_frame):
            xis = []
            for k in range(s.f):
                w = z
                for i in range(s.f):
                    p = s.prf_vz[i][a][k]
                    if p:
                        w = w + s.xi(i) * p
                xis.append(w)
            out.append(DGVectorField(s, 0, [s.form(c) for c in Z.components], xis))
        for i, V in enumerate(s.f_frame):
            xis = []
            for k in range(s.f):
                w = z
                for l in range(s.f):
                    c = s.structure[i][l][k]
                    if c:
                        w = w - s.xi(l) * c
                xis.append(w)
            out.append(DGVectorField(s, 0, [s.form(c) for c in V.components], xis))
        for i in range(s.f):
            out.append(DGVectorField(s, -1, [z] * s.dim,
                                     [s.form(1 if k == i else 0) for k in range(s.f)]))
        return out

    @cached_property
    def Q(self):
        return homological_field(self.scene)

    def coefficients(self, X):
        """Frame coefficients c_alpha with X = sum c_alpha e_alpha."""
        s = self.scene
        inv = s.frame_inverse
        coeffs = []
        for r in range(s.dim):
            w = s.form(0)
            for mu in range(s.dim):
                if inv[r][mu] and X.xs[mu]:
                    w = w + X.xs[mu] * inv[r][mu]
            coeffs.append(w)
        # reorder: frame matrix columns are V's then jZ's
        vpart, zpart = coeffs[:s.f], coeffs[s.f:]
        rest = X
        for a, c in enumerate(zpart):
            if c:
                rest = rest - self.fields[a].lmul(c)
        for i, c in enumerate(vpart):
            if c:
                rest = rest - self.fields[self.b + i].lmul(c)
        return list(zpart) + list(vpart) + list(rest.xis)

    def to_tensor(self, X):
        cs = self.coefficients(X)
        return DGTensor(self, ("vec",), {(i,): c for i, c in enumerate(cs) if c})

    def to_field(self, T, degree=None):
        if T.kinds != ("vec",):
            raise SignatureError("need a (0,1) tensor")
        out = None
        for (idx,), c in T.terms.items():
            t = self.fields[idx].lmul(c)
            out = t if out is None else out + t
        if out is None:
            return DGVectorField.zero(self.scene, 0 if degree is None else degree)
        return out

    @cached_property
    def M(self):
        """M[beta] = list of (gamma, form): L_Q e_beta = sum M e_gamma."""
        out = []
        for beta in range(self.N):
            br = vf_bracket(self.Q, self.fields[beta])
            out.append([(g, c) for g, c in enumerate(self.coefficients(br)) if c])
        return out

    @cached_property
    def Ndual(self):
        """Ndual[alpha] = list of (beta, form): L_Q e^alpha = sum N e^beta."""
        out = [[] for _ in range(self.N)]
        for beta in range(self.N):
            for alpha, c in self.M[beta]:
                sgn = -1 if (self.fdeg[alpha] * self.fdeg[beta] + self.fdeg[alpha]) % 2 else 1
                out[alpha].append((beta, -c if sgn > 0 else c))
        return out

    def slot_action(self, kind, idx):
        return self.M[idx] if kind == "vec" else self.Ndual[idx]

    def tensor(self, kinds, terms=None):
        return DGTensor(self, kinds, terms)

    def identity_end(self):
        """Id of T(F[1]) as sum (-1)^{|e|} e^beta (x) e_beta."""
        one = self.scene.form(1)
        return DGTensor(self, ("co", "vec"),
                        {(b, b): (-one if self.fdeg[b] % 2 else one) for b in range(self.N)})


def frame_of(scene):
    fr = scene.__dict__.get("_dgframe")
    if fr is None:
        fr = DGFrame(scene)
        scene.__dict__["_dgframe"] = fr
    return fr


class DGTensor(SlotTensor):
    def slot_deg(self, kind, idx):
        d = self.space.fdeg[idx]
        return d if kind == "vec" else -d

    def slot_name(self, kind, idx):
        return self.space.name(idx, kind == "co")

    @property
    def frame(self):
        return self.space


def lie_derivative_generic(T, d_coeff, slot_action):
    """Degree +1 operator, Leibniz over coefficient and slots."""
    out = {}
    for w, c in T.terms.items():
        dc = d_coeff(c)
        if dc:
            T._accum(out, w, dc)
        cd = c.degree
        prefix = 0
        for pos, (kind, idx) in enumerate(zip(T.kinds, w)):
            for new, M in slot_action(kind, idx):
                for I, p in M.terms.items():
                    mdeg = len(I)
                    sgn = cd + prefix + mdeg * prefix
                    v = c * M.like({I: p})
                    nw = w[:pos] + (new,) + w[pos + 1:]
                    T._accum(out, nw, -v if sgn % 2 else v)
            prefix += T.slot_deg(kind, idx)
    return T.new(terms=out)


def lie_derivative(T):
    """L_Q on DGTensors (and Q itself on forms)."""
    if isinstance(T, FormElement):
        raise TypeError("use scene.d_F on forms")
    fr = T.space
    return lie_derivative_generic(T, fr.scene.d_F, fr.slot_action)


def pairing(a, X):
    """<a, X> for a (1,0) and X (0,1) DGTensors."""
    fr = a.space
    out = fr.scene.form(0)
    for (al,), w in a.terms.items():
        for (be,), eta in X.terms.items():
            if al != be:
                continue
            sd = fr.fdeg[al]
            # sign (-1)^{|e^alpha| |eta|}, split eta by degree
            for k in eta.degrees():
                part = w * eta.part(k)
                out = out + (-part if (sd * k) % 2 else part)
    return out


# Polyvector fields on F[1].  A frame vector e sits in total degree |e| + 1:
# psiZ and Vhat are odd generators, iota is even, xi is odd.

def _gen_deg(fr, g):
    return fr.fdeg[g] + 1


class Polyvector:
    """sum omega * (odd frame generators, sorted) * iota^exps."""

    def __init__(self, fr, terms=None):
        self.fr = fr
        self.terms = {}
        for k, c in (terms or {}).items():
            if c:
                self.terms[k] = c

    @classmethod
    def form(cls, fr, omega):
        return cls(fr, {((), (0,) * fr.f): omega})

    @classmethod
    def gen(cls, fr, g, coeff=None):
        c = fr.scene.form(1) if coeff is None else coeff
        if _gen_deg(fr, g) % 2:
            return cls(fr, {((g,), (0,) * fr.f): c})
        e = [0] * fr.f
        e[g - fr.b - fr.f] = 1
        return cls(fr, {((), tuple(e)): c})

    @classmethod
    def from_field(cls, X):
        fr = frame_of(X.scene)
        out = cls(fr)
        for g, c in enumerate(fr.coefficients(X)):
            if c:
                out = out + cls.gen(fr, g, c)
        return out

    def key_deg(self, key):
        return len(key[0])

    def degrees(self):
        return {len(k[0]) + d for k, c in self.terms.items() for d in c.degrees()}

    @property
    def degree(self):
        ds = self.degrees()
        if not ds:
            return 0
        if len(ds) > 1:
            raise ValueError("inhomogeneous polyvector")
        return ds.pop()

    @property
    def arity(self):
        """Wedge degree in frame generators."""
        if not self.terms:
            return 0
        ar = {len(k[0]) + sum(k[1]) for k in self.terms}
        return max(ar)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, Polyvector) and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms[k] + c if k in terms else c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return Polyvector(self.fr, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polyvector(self.fr, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        return Polyvector(self.fr, {k: c * q for k, c in self.terms.items()})

    def __mul__(self, other):
        from .gradedalg import merge_sign
        if not isinstance(other, Polyvector):
            return self.scale(other)
        terms = {}
        for (o1, e1), c1 in self.terms.items():
            for (o2, e2), c2 in other.terms.items():
                s, o = merge_sign(o1, o2)
                if not s:
                    continue
                for d in c2.degrees():
                    v = c1 * c2.part(d)
                    if (len(o1) * d) % 2:
                        v = -v
                    if s < 0:
                        v = -v
                    k = (o, tuple(a + b for a, b in zip(e1, e2)))
                    v = terms[k] + v if k in terms else v
                    if v:
                        terms[k] = v
                    else:
                        terms.pop(k, None)
        return Polyvector(self.fr, terms)

    def factors(self):
        """Yield (sign-free) factor lists: [form, gen, gen, ...] per homogeneous term."""
        fr = self.fr
        for (odd, ev), c in self.terms.items():
            gens = list(odd)
            for i, n in enumerate(ev):
                gens += [fr.b + fr.f + i] * n
            for d in c.degrees():
                yield c.part(d), gens

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        fr = self.fr
        for (odd, ev) in sorted(self.terms):
            c = self.terms[(odd, ev)]
            names = [fr.name(g) for g in odd]
            for i, n in enumerate(ev):
                if n:
                    names.append(fr.name(fr.b + fr.f + i) + ("^%d" % n if n > 1 else ""))
            parts.append("(%r)%s" % (c, "".join("*" + n for n in names)))
        return " + ".join(parts)


def _pv_of_factor(fr, fac):
    if isinstance(fac, int):
        return Polyvector.gen(fr, fac)
    return Polyvector.form(fr, fac)


def _fac_deg(fr, fac):
    if isinstance(fac, int):
        return _gen_deg(fr, fac)
    return fac.degree


def _prod(fr, facs):
    out = Polyvector.form(fr, fr.scene.form(1))
    for f in facs:
        out = out * _pv_of_factor(fr, f)
    return out


def _bracket_atoms(fr, a, b):
    s = fr.scene
    if isinstance(a, int) and isinstance(b, int):
        return Polyvector.from_field(vf_bracket(fr.fields[a], fr.fields[b]))
    if isinstance(a, int):
        return Polyvector.form(fr, fr.fields[a].apply(b))
    if isinstance(b, int):
        # [omega, e] = -(-1)^{(|omega|-1)(|e|-1)} [e, omega]
        v = fr.fields[b].apply(a)
        sgn = ((a.degree - 1) * (_gen_deg(fr, b) - 1)) % 2
        return Polyvector.form(fr, v if sgn else -v)
    return Polyvector(fr)


def _bracket_lists(fr, A, B):
    if len(B) > 1:
        b1, rest = B[0], B[1:]
        dA = sum(_fac_deg(fr, x) for x in A)
        t1 = _bracket_lists(fr, A, [b1]) * _prod(fr, rest)
        t2 = _pv_of_factor(fr, b1) * _bracket_lists(fr, A, rest)
        return t1 + (-t2 if ((dA - 1) * _fac_deg(fr, b1)) % 2 else t2)
    if len(A) > 1:
        a1, rest = A[0], A[1:]
        dR = sum(_fac_deg(fr, x) for x in rest)
        dB = _fac_deg(fr, B[0])
        t1 = _pv_of_factor(fr, a1) * _bracket_lists(fr, rest, B)
        t2 = _bracket_lists(fr, [a1], B) * _prod(fr, rest)
        return t1 + (-t2 if (dR * (dB - 1)) % 2 else t2)
    if not A or not B:
        return Polyvector(fr)
    return _bracket_atoms(fr, A[0], B[0])


def schouten(P, R):
    """Schouten-Nijenhuis bracket, degree -1, a biderivation of the wedge product."""
    if not isinstance(P, Polyvector) or not isinstance(R, Polyvector):
        raise SignatureError("schouten needs polyvectors")
    fr = P.fr
    out = Polyvector(fr)
    for c1, g1 in P.factors():
        A = [c1] + g1
        for c2, g2 in R.factors():
            B = [c2] + g2
            out = out + _bracket_lists(fr, A, B)
    return out


def lie_derivative_pv(P):
    """L_Q on polyvectors: d_F on coefficients, [Q, e] on generators, Leibniz."""
    fr = P.fr
    Qpv = Polyvector.from_field(fr.Q)
    return schouten(Qpv, P)
