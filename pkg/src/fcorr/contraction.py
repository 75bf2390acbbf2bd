"""Contraction data between (X-tensors on F[1], L_Q) and (Omega_F(T_m^n B), d_B).

Every map is realized slot-wise on basis elements.  A slot map of degree d
obeys f(omega x) = (-1)^{d |omega|} omega f(x), and a tensor product of slot
maps picks up the Koszul sign (-1)^{d_r (|s_1| + ... + |s_{r-1}|)}.
"""

from dataclasses import dataclass, field
from functools import cached_property

from .dgvec import DGTensor, SignatureError, frame_of, lie_derivative
from .gradedalg import FormSection


@dataclass(frozen=True)
class SlotMap:
    """Single-slot map: `table(kind, idx)` -> list of (new idx, form)."""
    degree: int
    table: object
    name: str = ""


def apply_maps(T, maps, target):
    """(f_1 (x) ... (x) f_k)(T) landing in the tensor prototype `target`."""
    if len(maps) != len(T.kinds):
        raise SignatureError("need one slot map per slot")
    D = sum(m.degree for m in maps)
    out = {}
    for w, c in T.terms.items():
        # each entry: (accumulated coefficient, new word, sign parity)
        base_sign = (D * c.degree) % 2
        partial = [(c, (), base_sign, 0)]
        for r, (kind, idx) in enumerate(zip(T.kinds, w)):
            d_r = maps[r].degree
            in_prefix = T.word_deg(w[:r], T.kinds[:r])
            sgn_r = (d_r * in_prefix) % 2
            images = maps[r].table(kind, idx)
            nxt = []
            for acc, nw, sg, out_prefix in partial:
                for new, m in images:
                    for k in m.degrees():
                        mk = m.part(k)
                        s = sg + sgn_r + k * out_prefix
                        nxt.append((acc * mk, nw + (new,), s % 2,
                                    out_prefix + target.slot_deg(kind, new)))
            partial = nxt
            if not partial:
                break
        for acc, nw, sg, _ in partial:
            if acc:
                target._accum(out, nw, -acc if sg else acc)
    return target.new(kinds=T.kinds, terms=out)


class Contraction:
    """phi, psi_j, h_j and their duals/tensor extensions for one scene."""

    def __init__(self, scene):
        self.scene = scene
        self.fr = frame_of(scene)
        self.one = scene.form(1)

    # single-slot tables

    def _diag(self, pred, shift, coeff=1):
        one = self.one if coeff == 1 else -self.one

        def table(kind, idx):
            if pred(idx):
                return [(shift(idx), one)]
            return []
        return table

    @cached_property
    def maps(self):
        fr = self.fr
        b, f = fr.b, fr.f
        is_psi = lambda i: i < b
        is_vhat = lambda i: b <= i < b + f
        is_iota = lambda i: i >= b + f
        ident = lambda i: i
        always = lambda i: True
        return {
            "phi": SlotMap(0, self._diag(is_psi, ident), "phi"),
            "psi": SlotMap(0, self._diag(always, ident), "psi"),
            "h": SlotMap(-1, self._diag(is_vhat, lambda i: i + f), "h"),
            "phi_v": SlotMap(0, self._diag(always, ident), "phi^v"),
            "psi_v": SlotMap(0, self._diag(is_psi, ident), "psi^v"),
            "h_v": SlotMap(-1, self._diag(is_iota, lambda i: i - f, -1), "h^v"),
            "psiphi": SlotMap(0, self._diag(is_psi, ident), "psi.phi"),
            "phipsi_v": SlotMap(0, self._diag(is_psi, ident), "phi^v.psi^v"),
            "id": SlotMap(0, lambda kind, idx: [(idx, self.one)], "id"),
        }

    def dg(self, kinds, terms=None):
        return DGTensor(self.fr, kinds, terms)

    def bs(self, kinds, terms=None):
        return FormSection(self.scene.space, kinds, terms)

    @staticmethod
    def _split(kinds):
        m = 0
        while m < len(kinds) and kinds[m] == "co":
            m += 1
        if any(k != "vec" for k in kinds[m:]):
            raise SignatureError("expected covector slots before vector slots")
        return m, len(kinds) - m

    # tensor maps

    def big_psi(self, sigma):
        m, n = self._split(sigma.kinds)
        M = self.maps
        return apply_maps(sigma, [M["phi_v"]] * m + [M["psi"]] * n, self.dg(sigma.kinds))

    def big_phi(self, T):
        m, n = self._split(T.kinds)
        M = self.maps
        return apply_maps(T, [M["psi_v"]] * m + [M["phi"]] * n, self.bs(T.kinds))

    def h_summands(self, kinds):
        m, n = self._split(kinds)
        M = self.maps
        out = []
        for i in range(m):
            out.append([M["phipsi_v"]] * i + [M["h_v"]] + [M["id"]] * (n + m - i - 1))
        for l in range(n):
            out.append([M["phipsi_v"]] * m + [M["psiphi"]] * l + [M["h"]]
                       + [M["id"]] * (n - l - 1))
        return out

    def big_h(self, T):
        acc = self.dg(T.kinds)
        for maps in self.h_summands(T.kinds):
            acc = acc + apply_maps(T, maps, self.dg(T.kinds))
        return acc

    # vector-field level

    def phi(self, X):
        return self.big_phi(self.fr.to_tensor(X))

    def psi(self, sigma):
        t = self.big_psi(sigma)
        return self.fr.to_field(t, sigma.degree)

    def h(self, X):
        return self.fr.to_field(self.big_h(self.fr.to_tensor(X)), X.degree - 1)

    def L(self, T):
        return lie_derivative(T)

    def dB(self, sigma):
        return self.scene.d_B(sigma)

    def commutator_LH(self, T):
        return self.L(self.big_h(T)) + self.big_h(self.L(T))

    # splitting comparison

    @cached_property
    def hat(self):
        return Contraction(self.scene.hat)

    @cached_property
    def psi_hat_cols(self):
        """Coefficients of psi_jhat(Z_a) in the j-frame."""
        from .dgvec import DGVectorField
        s = self.scene
        hf = frame_of(s.hat).fields
        cols = []
        for a in range(s.b):
            X = DGVectorField(s, 0, hf[a].xs, hf[a].xis)
            cols.append(self.fr.coefficients(X))
        return cols

    @cached_property
    def theta_maps(self):
        s, fr = self.scene, self.fr
        th = s.theta_matrix()
        cols = self.psi_hat_cols

        def psi_hat(kind, a):
            return [(g, c) for g, c in enumerate(cols[a]) if c]

        def psi_hat_v(kind, al):
            out = []
            for a in range(s.b):
                c = cols[a][al]
                if not c:
                    continue
                # <e^al, c e_al> = (-1)^{|e^al||c|} c
                for k in c.degrees():
                    part = c.part(k)
                    out.append((a, -part if (fr.fdeg[al] * k) % 2 else part))
            return out

        def theta(kind, a):
            return [(fr.iota(i), s.form(th[a][i])) for i in range(s.f) if th[a][i]]

        def theta_v(kind, al):
            if al < fr.b + fr.f:
                return []
            i = al - fr.b - fr.f
            return [(a, -s.form(th[a][i])) for a in range(s.b) if th[a][i]]

        return {
            "psi_hat": SlotMap(0, psi_hat, "psi_hat"),
            "psi_hat_v": SlotMap(0, psi_hat_v, "psi_hat^v"),
            "theta": SlotMap(-1, theta, "Theta"),
            "theta_v": SlotMap(-1, theta_v, "Theta^v"),
        }

    def big_psi_hat(self, sigma):
        m, n = self._split(sigma.kinds)
        M, Tm = self.maps, self.theta_maps
        return apply_maps(sigma, [M["phi_v"]] * m + [Tm["psi_hat"]] * n, self.dg(sigma.kinds))

    def big_phi_hat(self, T):
        m, n = self._split(T.kinds)
        M, Tm = self.maps, self.theta_maps
        return apply_maps(T, [Tm["psi_hat_v"]] * m + [M["phi"]] * n, self.bs(T.kinds))

    def big_theta(self, sigma):
        m, n = self._split(sigma.kinds)
        M, Tm = self.maps, self.theta_maps
        acc = self.dg(sigma.kinds)
        for l in range(n):
            maps = ([M["phi_v"]] * m + [Tm["psi_hat"]] * l + [Tm["theta"]]
                    + [M["psi"]] * (n - l - 1))
            acc = acc + apply_maps(sigma, maps, self.dg(sigma.kinds))
        return acc

    def big_xi(self, T):
        m, n = self._split(T.kinds)
        M, Tm = self.maps, self.theta_maps
        acc = self.bs(T.kinds)
        for k in range(m):
            maps = ([Tm["psi_hat_v"]] * k + [Tm["theta_v"]] + [M["psi_v"]] * (m - k - 1)
                    + [M["phi"]] * n)
            acc = acc + apply_maps(T, maps, self.bs(T.kinds))
        return acc


def contraction_of(scene):
    c = scene.__dict__.get("_contraction")
    if c is None:
        c = Contraction(scene)
        scene.__dict__["_contraction"] = c
    return c


def signatures(max_sig):
    out = []
    for total in range(1, max_sig + 1):
        for m in range(total + 1):
            out.append((m, total - m))
    return out


def sig_kinds(m, n):
    return ("co",) * m + ("vec",) * n


@dataclass
class CheckResult:
    name: str
    scene: str
    signature: tuple
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def record(self, ok, detail):
        self.checked += 1
        if not ok and len(self.failures) < 3:
            self.failures.append(detail)

    def to_dict(self):
        return {"name": self.name, "scene": self.scene,
                "signature": list(self.signature), "checked": self.checked,
                "status": "pass" if self.ok else "fail",
                "counterexamples": list(self.failures)}


def frame_generators_dg(fr, kinds):
    """All basis words with coefficient 1 (capped for large frames)."""
    import itertools
    one = fr.scene.form(1)
    for w in itertools.product(range(fr.N), repeat=len(kinds)):
        yield DGTensor(fr, kinds, {w: one})


def frame_generators_b(scene, kinds):
    import itertools
    one = scene.form(1)
    for w in itertools.product(range(scene.b), repeat=len(kinds)):
        yield FormSection(scene.space, kinds, {w: one})


def contraction_suite(scene, max_sig=3, rand_count=100, seed=0):
    """Run the five contraction identities and both chain-map identities."""
    from .randgen import rand_section, rand_tensor, rng
    C = contraction_of(scene)
    fr = C.fr
    r = rng(seed)
    results = []
    sigs = signatures(max_sig)
    per_sig = max(1, -(-rand_count // len(sigs)))
    for (m, n) in sigs:
        kinds = sig_kinds(m, n)
        names = ["phi_psi", "homotopy", "h_psi", "phi_h", "h_h", "phi_chain", "psi_chain"]
        res = {k: CheckResult(k, scene.name, (m, n)) for k in names}

        dg_inputs = list(frame_generators_dg(fr, kinds))
        b_inputs = list(frame_generators_b(scene, kinds))
        for _ in range(per_sig):
            dg_inputs.append(rand_tensor(r, fr, kinds, r.randint(-1, scene.f)))
            b_inputs.append(rand_section(r, scene, m, n, r.randint(0, scene.f)))

        for s in b_inputs:
            P = C.big_psi(s)
            res["phi_psi"].record(C.big_phi(P) == s, repr(s))
            res["h_psi"].record(C.big_h(P) == 0, repr(s))
            res["psi_chain"].record(C.big_psi(C.dB(s)) == C.L(P), repr(s))
        for T in dg_inputs:
            HT = C.big_h(T)
            lhs = T - C.big_psi(C.big_phi(T))
            res["homotopy"].record(lhs == C.commutator_LH(T), repr(T))
            res["phi_h"].record(C.big_phi(HT) == 0, repr(T))
            res["h_h"].record(C.big_h(HT) == 0, repr(T))
            res["phi_chain"].record(C.big_phi(C.L(T)) == C.dB(C.big_phi(T)), repr(T))
        results.extend(res.values())
    return results


def splitting_suite(scene, max_sig=2, rand_count=20, seed=0):
    """Homotopy between psi_j and psi_jhat, and the tensor versions."""
    from .randgen import rand_section, rand_tensor, rng
    C = contraction_of(scene)
    fr = C.fr
    r = rng(seed)
    results = []
    for (m, n) in [(0, 1)] + [s for s in signatures(max_sig) if s != (0, 1)]:
        if m > 1 or n > 1:
            continue
        kinds = sig_kinds(m, n)
        ds1 = CheckResult("ds1", scene.name, (m, n))
        ds2 = CheckResult("ds2", scene.name, (m, n))
        b_inputs = list(frame_generators_b(scene, kinds))
        dg_inputs = list(frame_generators_dg(fr, kinds))
        for _ in range(rand_count):
            b_inputs.append(rand_section(r, scene, m, n, r.randint(0, scene.f)))
            dg_inputs.append(rand_tensor(r, fr, kinds, r.randint(-1, scene.f)))
        for s in b_inputs:
            lhs = C.big_psi_hat(s) - C.big_psi(s)
            rhs = C.big_theta(C.dB(s)) + C.L(C.big_theta(s))
            ds1.record(lhs == rhs, repr(s))
        for T in dg_inputs:
            lhs = C.big_phi_hat(T) - C.big_phi(T)
            rhs = C.big_xi(C.L(T)) + C.dB(C.big_xi(T))
            ds2.record(lhs == rhs, repr(T))
        results.extend([ds1, ds2])
    return results
