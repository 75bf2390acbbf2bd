"""Atiyah, scalar Atiyah and Todd cocycles on both sides of the contraction,
with explicit primitives for every comparison that only holds up to d_B."""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coeffring import Poly, PolyVectorField, parse_poly, render_poly, vf_bracket_coords, vf_derive
from .contraction import contraction_of
from .dgvec import DGTensor, SignatureError, frame_of, lie_derivative
from .gradedalg import FormSection


class RoutesDisagree(ArithmeticError):
    pass


# connections

class DGConnection:
    """Christoffel table: (alpha, beta) -> list of (gamma, form), nabla_{e_a} e_b = sum Gamma e_c."""

    def __init__(self, frame, table=None):
        self.frame = frame
        self.table = {}
        for key, vals in (table or {}).items():
            vals = [(g, c) for g, c in vals if c]
            if vals:
                self.table[key] = vals

    @classmethod
    def flat(cls, frame):
        return cls(frame)

    @classmethod
    def from_entries(cls, frame, entries):
        """Scene-file entries {X, Y, out, coeff} with frame names like psiZ[1]."""
        names = frame.names()
        s = frame.scene
        table = {}
        for e in entries:
            try:
                a, b, g = (names[e[k]][1] for k in ("X", "Y", "out"))
            except KeyError as exc:
                raise SignatureError("unknown frame element %s" % exc) from exc
            p = parse_poly(e["coeff"], s.coords)
            deg = frame.fdeg[a] + frame.fdeg[b] - frame.fdeg[g]
            if deg != 0:
                raise SignatureError("scene-file Christoffels must have form degree 0")
            table.setdefault((a, b), []).append((g, s.form(p)))
        return cls(frame, table)

    def allowed_degree(self, a, b, g):
        # nabla_{e_a} e_b has degree |e_a| + |e_b|
        return self.frame.fdeg[a] + self.frame.fdeg[b] - self.frame.fdeg[g]

    def christoffel(self, a, b):
        return self.table.get((a, b), [])

    def nabla(self, X, Y):
        """nabla_X Y for (0,1) DGTensors."""
        fr = self.frame
        out = {}
        for (a,), x in X.terms.items():
            field_a = fr.fields[a]
            for (b,), y in Y.terms.items():
                ey = field_a.apply(y)
                if ey:
                    X._accum(out, (b,), x * ey)
                gam = self.christoffel(a, b)
                if not gam:
                    continue
                for k in y.degrees():
                    yk = y.part(k)
                    sgn = -1 if (fr.fdeg[a] * k) % 2 else 1
                    for g, G in gam:
                        v = x * yk * G
                        X._accum(out, (g,), v if sgn > 0 else -v)
        return X.new(terms=out)

    def induced(self):
        """Pair-side Christoffels G[a][b][c] = Gamma^{psiZ_c}_{psiZ_a psiZ_b}."""
        s = self.frame.scene
        b = s.b
        G = [[[s.poly(0) for _ in range(b)] for _ in range(b)] for _ in range(b)]
        for a in range(b):
            for bb in range(b):
                for g, c in self.christoffel(a, bb):
                    if g < b:
                        G[a][bb][g] = G[a][bb][g] + c.terms.get((), s.poly(0))
        return PairConnection(s, G)


def random_dg_connection(r, frame, nentries=4, deg=2):
    from .randgen import rand_form
    s = frame.scene
    table = {}
    triples = [(a, b, g) for a in range(frame.N) for b in range(frame.N) for g in range(frame.N)
               if 0 <= frame.fdeg[a] + frame.fdeg[b] - frame.fdeg[g] <= s.f]
    for _ in range(nentries):
        a, b, g = r.choice(triples)
        fd = frame.fdeg[a] + frame.fdeg[b] - frame.fdeg[g]
        table.setdefault((a, b), []).append((g, rand_form(r, s, fd, deg)))
    merged = {}
    for key, vals in table.items():
        acc = {}
        for g, c in vals:
            acc[g] = acc[g] + c if g in acc else c
        merged[key] = list(acc.items())
    return DGConnection(frame, merged)


class PairConnection:
    """T M-connection on B: Bott along F, nabla_{jZ_a} Z_b = sum_c G[a][b][c] Z_c."""

    def __init__(self, scene, G):
        self.scene = scene
        self.G = G

    @classmethod
    def flat(cls, scene):
        b = scene.b
        return cls(scene, [[[scene.poly(0)] * b for _ in range(b)] for _ in range(b)])

    def __eq__(self, other):
        return isinstance(other, PairConnection) and self.G == other.G

    __hash__ = None

    def cov(self, W, sec):
        """nabla_W sec for W a PolyVectorField, sec a list of b Polys."""
        s = self.scene
        a_f, b_b = s.decompose(W)
        out = [vf_derive(W, p) for p in sec]
        for bb, p in enumerate(sec):
            if not p:
                continue
            for i, ai in enumerate(a_f):
                if ai:
                    for c, beta in enumerate(s.bott[i][bb]):
                        out[c] = out[c] + ai * p * beta
            for a, ba in enumerate(b_b):
                if ba:
                    for c in range(s.b):
                        g = self.G[a][bb][c]
                        if g:
                            out[c] = out[c] + ba * p * g
        return out

    def section_on(self, Z_index, sec):
        return self.cov(self.scene.b_frame[Z_index], sec)


def random_pair_connection(r, scene, deg=2):
    from .randgen import rand_poly
    b = scene.b
    G = [[[rand_poly(r, scene.coords, deg, 2, scene.field) if r.random() < 0.4 else scene.poly(0)
           for _ in range(b)] for _ in range(b)] for _ in range(b)]
    return PairConnection(scene, G)


# Atiyah cocycles

def atiyah_dg(scene, conn=None):
    """alpha(e_a, e_b) as a (co, co, vec) DGTensor of degree 1."""
    fr = frame_of(scene)
    conn = conn or DGConnection.flat(fr)
    one = scene.form(1)
    basis = [DGTensor(fr, ("vec",), {(i,): one}) for i in range(fr.N)]
    LQ = [lie_derivative(e) for e in basis]
    terms = {}
    proto = DGTensor(fr, ("co", "co", "vec"))
    for a in range(fr.N):
        for b in range(fr.N):
            val = (lie_derivative(conn.nabla(basis[a], basis[b]))
                   - conn.nabla(LQ[a], basis[b]))
            third = conn.nabla(basis[a], LQ[b])
            val = val + third if fr.fdeg[a] % 2 else val - third
            for (g,), A in val.terms.items():
                da, db, dg = fr.fdeg[a], fr.fdeg[b], fr.fdeg[g]
                eps = (da * db + da * dg + db * dg) % 2
                proto._accum(terms, (a, b, g), -A if eps else A)
    return proto.new(terms=terms)


def atiyah_pair(scene, pconn):
    """R(V_i, Z_a) Z_b stored as zeta^a (x) zeta^b (x) Z_c with coefficient xi^i."""
    s = scene
    zero = s.poly(0)
    terms = {}
    proto = s.section(2, 1)
    for i, V in enumerate(s.f_frame):
        for a, Za in enumerate(s.b_frame):
            br = vf_bracket_coords(V, Za)
            for bb in range(s.b):
                e = [zero] * s.b
                e[bb] = s.poly(1)
                t1 = pconn.cov(V, pconn.cov(Za, e))
                t2 = pconn.cov(Za, pconn.cov(V, e))
                t3 = pconn.cov(br, e)
                for c in range(s.b):
                    v = t1[c] - t2[c] - t3[c]
                    if v:
                        proto._accum(terms, (a, bb, c), s.xi(i) * v)
    return proto.new(terms=terms)


def induced_connection(scene, conn=None):
    if conn is None:
        conn = DGConnection.from_entries(frame_of(scene), scene.connection)
    return conn.induced()


def nabla_b(scene, conn, Zsec, Wsec):
    """Phi(nabla_{Psi Z} Psi W) for (0,1) FormSections."""
    C = contraction_of(scene)
    return C.big_phi(conn.nabla(C.big_psi(Zsec), C.big_psi(Wsec)))


def leibniz_rule_residuals(scene, conn, samples):
    """iota_{pr_F[Z_a, V_i]} W - [nabla^B_{Z_a}, iota_{V_i}] W on the given W's."""
    from .gradedalg import contract_form
    s = scene
    one = s.form(1)
    out = []
    for a in range(s.b):
        Z = s.section(0, 1, {(a,): one})
        for i in range(s.f):
            # pr_F[jZ_a, V_i] = -pr_F[V_i, jZ_a]
            coeffs = [-p for p in s.prf_vz[i][a]]
            for W in samples:
                lhs = s.section(0, 1)
                for k, p in enumerate(coeffs):
                    if p:
                        lhs = lhs + contract_form(k, W).scale(p)
                rhs = (nabla_b(s, conn, Z, contract_form(i, W))
                       - contract_form(i, nabla_b(s, conn, Z, W)))
                out.append(lhs - rhs)
    return out


def exactness_certificate(scene, p1, p2):
    """t(Z_a) Z_b = (nabla - nabla')_{jZ_a} Z_b as a degree-0 (co, co, vec) section."""
    terms = {}
    proto = scene.section(2, 1)
    for a in range(scene.b):
        for b in range(scene.b):
            for c in range(scene.b):
                d = p1.G[a][b][c] - p2.G[a][b][c]
                if d:
                    proto._accum(terms, (a, b, c), scene.form(d))
    t = proto.new(terms=terms)
    residual = atiyah_pair(scene, p1) - atiyah_pair(scene, p2) - scene.d_B(t)
    return t, residual


# supertrace, powers, wedge products

def supertrace(T):
    """Contract the End pair (last two slots).  Identity is stored as
    sum (-1)^{|e|} e^b (x) e_b, so this is the graded trace."""
    if len(T.kinds) < 2 or T.kinds[-2:] != ("co", "vec"):
        raise SignatureError("supertrace needs an End-valued tensor")
    return T.contract_adjacent(len(T.kinds) - 2)


trace = supertrace


def rank_one(frame, idx):
    """Projector onto e_idx as an endomorphism."""
    one = frame.scene.form(1)
    c = -one if frame.fdeg[idx] % 2 else one
    return DGTensor(frame, ("co", "vec"), {(idx, idx): c})


def unit_like(T):
    one = FormElementOne(T)
    return T.new(kinds=(), terms={(): one})


def FormElementOne(T):
    from .gradedalg import FormElement
    return FormElement.scalar(T.vars, T.rank, 1)


def _fact(n):
    return Fraction(math.factorial(n))


def wedge_forms(A, p, B, q):
    """p-form A times q-form B (antisymmetric in their leading form slots)."""
    return A.tensor(B).alt(p + q).scale(1 / (_fact(p) * _fact(q)))


def wedge_end(A, p, B, q):
    return A.compose(B).alt(p + q).scale(1 / (_fact(p) * _fact(q)))


def end_power(N, k):
    """N^k for an End-valued 1-form N: Alt of the k-fold composition."""
    P = N
    for _ in range(k - 1):
        P = P.compose(N)
    return P.alt(k)


def str_powers(N, kmax):
    return [None] + [supertrace(end_power(N, k)) for k in range(1, kmax + 1)]


# weighted sums: dict weight -> tensor

def w_add(A, B):
    out = dict(A)
    for k, v in B.items():
        out[k] = out[k] + v if k in out else v
    return out


def w_scale(A, c):
    return {k: v.scale(c) for k, v in A.items()}


def w_mul(A, B, prod, smax):
    out = {}
    for p, a in A.items():
        for q, b in B.items():
            if p + q > smax:
                continue
            t = prod(a, p, b, q)
            out[p + q] = out[p + q] + t if p + q in out else t
    return out


def w_clean(A):
    return {k: v for k, v in A.items() if v}


# m-sequence

def series_log(b, n):
    """Coefficients of log(1 + sum b_i x^i) up to x^n; b[0] is ignored."""
    X = [Fraction(0)] + [Fraction(b[i]) if i < len(b) else Fraction(0) for i in range(1, n + 1)]
    out = [Fraction(0)] * (n + 1)
    power = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        power = [sum(power[j] * X[i - j] for j in range(i + 1)) for i in range(n + 1)]
        for i in range(n + 1):
            out[i] += Fraction((-1) ** (k + 1), k) * power[i]
    return out


def todd_coefficients(n):
    """x / (1 - e^{-x}) up to x^n, by inverting (1 - e^{-x}) / x."""
    d = [Fraction((-1) ** k, math.factorial(k + 1)) for k in range(n + 1)]
    inv = [Fraction(0)] * (n + 1)
    inv[0] = 1 / d[0]
    for k in range(1, n + 1):
        inv[k] = -sum(d[j] * inv[k - j] for j in range(1, k + 1)) / d[0]
    return inv


def m_sequence(b, r_max):
    """K_1..K_{r_max} as Polys in p1..p_{r_max} (weight of p_k is k)."""
    vars = tuple("p%d" % k for k in range(1, r_max + 1))
    c = series_log(b, r_max)
    L = Poly.zero(vars)
    for k in range(1, r_max + 1):
        if c[k]:
            L = L + Poly.var(vars, "p%d" % k) * c[k]
    weight = lambda e: sum((i + 1) * x for i, x in enumerate(e))
    E = Poly.const(vars, 1)
    term = Poly.const(vars, 1)
    for n in range(1, r_max + 1):
        term = term * L * Fraction(1, n)
        term = Poly(vars, {e: v for e, v in term.terms.items() if weight(e) <= r_max})
        E = E + term
    out = [None]
    for r in range(1, r_max + 1):
        out.append(Poly(vars, {e: v for e, v in E.terms.items() if weight(e) == r}))
    return out


def render_k(K):
    return render_poly(K)


# Berezinian / determinant of P(N), two routes

def ber_route_a(N, b, smax):
    """1 + sum_r K_r(str N, ..., str N^r), products wedged."""
    K = m_sequence(b, smax) if smax else [None]
    p = str_powers(N, smax)
    one = unit_like(N)
    out = {0: one}
    for r in range(1, smax + 1):
        acc = None
        for e, coef in K[r].terms.items():
            mono, deg = one, 0
            for i, n in enumerate(e):
                for _ in range(n):
                    mono = wedge_forms(mono, deg, p[i + 1], i + 1)
                    deg += i + 1
            t = mono.scale(coef)
            acc = t if acc is None else acc + t
        if acc is not None and acc:
            out[r] = acc
    return w_clean(out)


def ber_route_b(N, b, smax):
    """exp(str(log(I + X))) with X = P(N) - I."""
    X = {}
    for k in range(1, smax + 1):
        if k < len(b) and b[k]:
            X[k] = end_power(N, k).scale(Fraction(b[k]))
    X = w_clean(X)
    log = {}
    Xn = dict(X)
    for n in range(1, smax + 1):
        log = w_add(log, w_scale(Xn, Fraction((-1) ** (n + 1), n)))
        Xn = w_clean(w_mul(Xn, X, wedge_end, smax))
        if not Xn:
            break
    L = w_clean({k: supertrace(v) for k, v in log.items()})
    one = unit_like(N)
    out = {0: one}
    Ln = dict(L)
    for n in range(1, smax + 1):
        if not Ln:
            break
        out = w_add(out, w_scale(Ln, 1 / _fact(n)))
        Ln = w_clean(w_mul(Ln, L, wedge_forms, smax))
    return w_clean(out)


def berezinian_series(N, b, smax):
    A = ber_route_a(N, b, smax)
    B = ber_route_b(N, b, smax)
    if A != B:
        raise RoutesDisagree("m-sequence route and exp-str-log route differ")
    return A


# reports

@dataclass
class Certificate:
    name: str
    ok: bool
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "status": "pass" if self.ok else "fail", "detail": self.detail}


@dataclass
class ClassReport:
    scene: str
    s: int
    atiyah_dg: object = None
    atiyah_pair: object = None
    c_dg: dict = field(default_factory=dict)
    c_pair: dict = field(default_factory=dict)
    todd_dg: dict = field(default_factory=dict)
    todd_pair: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for c in self.certificates)

    def to_dict(self):
        def rk(k):
            return "u^%d" % k
        return {
            "scene": self.scene,
            "s": self.s,
            "atiyah_pair": repr(self.atiyah_pair),
            "atiyah_dg_terms": len(self.atiyah_dg.terms) if self.atiyah_dg is not None else 0,
            "c_pair": {str(k): "%s * (%r)" % (rk(k), v) for k, v in sorted(self.c_pair.items())},
            "c_dg_image": {str(k): "%s * (%r)" % (rk(k), v) for k, v in sorted(self.c_dg.items())},
            "todd_pair": {str(k): repr(v) for k, v in sorted(self.todd_pair.items())},
            "todd_dg_image": {str(k): repr(v) for k, v in sorted(self.todd_dg.items())},
            "certificates": [c.to_dict() for c in self.certificates],
        }


def s_of(scene):
    return min(scene.f, scene.b)


def todd_certificate(scene, A, R, smax):
    """Phi(Td_dg) - Td_pair per weight, with a d_B-primitive assembled from
    eta_i = Phi str H (alpha^i) by telescoping each monomial of K_r."""
    C = contraction_of(scene)
    b = todd_coefficients(smax)
    td_dg = berezinian_series(A, b, smax)
    td_pair = berezinian_series(R, b, smax)
    certs = []
    if smax == 0:
        return td_dg, td_pair, certs
    K = m_sequence(b, smax)
    powers = [None] + [end_power(A, i) for i in range(1, smax + 1)]
    a = [None] + [C.big_phi(supertrace(P)) for P in powers[1:]]
    q = [None] + [trace(end_power(R, i)) for i in range(1, smax + 1)]
    eta = [None] + [C.big_phi(supertrace(C.big_h(P))) for P in powers[1:]]
    leftover = [None] + [C.big_phi(supertrace(C.big_h(lie_derivative(P)))) for P in powers[1:]]
    certs.append(Certificate("todd_cocycle_correction_vanishes",
                             all(not x for x in leftover[1:])))
    one = unit_like(R)
    for r in range(1, smax + 1):
        prim = R.new(kinds=("co",) * r, terms={})
        for e, coef in K[r].terms.items():
            factors = [i + 1 for i, n in enumerate(e) for _ in range(n)]
            for k, ik in enumerate(factors):
                left, dl = one, 0
                for i in factors[:k]:
                    left = wedge_forms(left, dl, q[i], i)
                    dl += i
                t = wedge_forms(left, dl, eta[ik], ik)
                dt = dl + ik
                for i in factors[k + 1:]:
                    t = wedge_forms(t, dt, a[i], i)
                    dt += i
                t = t.scale(coef)
                prim = prim + (-t if dl % 2 else t)
        img = C.big_phi(td_dg[r]) if r in td_dg else R.new(kinds=("co",) * r, terms={})
        rhs = td_pair.get(r, R.new(kinds=("co",) * r, terms={}))
        resid = img - rhs - scene.d_B(prim)
        certs.append(Certificate("todd_weight_%d" % r, not resid,
                                 "" if not resid else repr(resid)))
    return td_dg, td_pair, certs


def compute_classes(scene, conn=None, k_max=None):
    fr = frame_of(scene)
    C = contraction_of(scene)
    if conn is None:
        conn = DGConnection.from_entries(fr, scene.connection)
    smax = s_of(scene)
    k_max = smax if k_max is None else k_max
    A = atiyah_dg(scene, conn)
    P = conn.induced()
    R = atiyah_pair(scene, P)
    rep = ClassReport(scene.name, smax, A, R)
    cert = rep.certificates
    cert.append(Certificate("atiyah_dg_closed", not lie_derivative(A)))
    cert.append(Certificate("atiyah_pair_closed", not scene.d_B(R)))
    diff = C.big_phi(A) - R
    cert.append(Certificate("lemonF", not diff, "" if not diff else repr(diff)))
    one = scene.form(1)
    samples = [scene.section(0, 1, {(bb,): scene.xi(k)}) for bb in range(scene.b)
               for k in range(scene.f)]
    samples += [scene.section(0, 1, {(bb,): one}) for bb in range(scene.b)]
    cert.append(Certificate("leibniz_rule",
                            not any(leibniz_rule_residuals(scene, conn, samples))))
    for k in range(1, k_max + 1):
        L = end_power(A, k)
        Rk = end_power(R, k)
        sL = supertrace(L)
        tR = trace(Rk)
        c_dg = sL.scale(1 / _fact(k))
        c_pair = tR.scale(1 / _fact(k))
        rep.c_dg[k] = C.big_phi(c_dg)
        rep.c_pair[k] = c_pair
        cert.append(Certificate("c%d_dg_closed" % k, not lie_derivative(sL)))
        cert.append(Certificate("c%d_pair_closed" % k, not scene.d_B(tR)))
        corr = (scene.d_B(C.big_phi(supertrace(C.big_h(L))))
                + C.big_phi(supertrace(C.big_h(lie_derivative(L)))))
        resid = C.big_phi(sL) - trace(C.big_phi(L)) - corr
        cert.append(Certificate("STRetTr_%d" % k, not resid, "" if not resid else repr(resid)))
        mult = C.big_phi(L) - Rk
        cert.append(Certificate("phi_power_%d" % k, not mult, "" if not mult else repr(mult)))
        if k > smax:
            cert.append(Certificate("c%d_vanishes" % k, not c_pair and not rep.c_dg[k]))
    td_dg, td_pair, tc = todd_certificate(scene, A, R, smax)
    rep.todd_dg = {r: C.big_phi(v) for r, v in td_dg.items()}
    rep.todd_pair = td_pair
    cert.extend(tc)
    # weight s+1 is structurally zero after Phi and on the pair side
    b = todd_coefficients(smax + 1)
    over_pair = ber_route_a(R, b, smax + 1).get(smax + 1)
    over_img = C.big_phi(supertrace(end_power(A, smax + 1)))
    cert.append(Certificate("todd_weight_above_s_vanishes",
                            not over_pair and not over_img))
    return rep


def connection_suite(scene, rand_count=20, seed=0):
    """Phi(alpha) = R on random DG connections; R - R' = d_B t on random pairs."""
    from .contraction import CheckResult
    from .randgen import rng
    fr = frame_of(scene)
    C = contraction_of(scene)
    r = rng(seed)
    corr = CheckResult("lemonF_random", scene.name, ("co", "co", "vec"))
    for conn in [DGConnection.flat(fr)] + [random_dg_connection(r, fr) for _ in range(rand_count)]:
        A = atiyah_dg(scene, conn)
        diff = C.big_phi(A) - atiyah_pair(scene, conn.induced())
        closed = not lie_derivative(A)
        corr.record(closed and not diff, None if closed and not diff else
                    "closed=%s residual %r" % (closed, diff))
    exact = CheckResult("exactness_random", scene.name, ("co", "co", "vec"))
    for _ in range(rand_count):
        p1, p2 = random_pair_connection(r, scene), random_pair_connection(r, scene)
        _, res = exactness_certificate(scene, p1, p2)
        exact.record(not res, None if not res else "residual %r" % res)
    return [corr, exact]
