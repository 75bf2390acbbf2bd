"""Scenes: a chart with an integrable frame V_1..V_f, a splitting j(Z_1)..j(Z_b),
and the Chevalley-Eilenberg differentials d_F and d_B."""

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .coeffring import (ParseError, Poly, PolyVectorField, parse_poly, render_poly,
                        vf_bracket_coords, vf_derive)
from .gradedalg import BundleSpace, FormElement, FormSection


class SceneError(ValueError):
    pass


class NotIntegrable(SceneError):
    pass


class FrameNotUnimodular(SceneError):
    pass


class ShapeError(SceneError):
    pass


class MissingTheta(SceneError):
    pass


def det(rows):
    """Laplace expansion; fine for the chart dimensions we meet (d <= 5)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = None
    for c in range(n):
        if not rows[0][c]:
            continue
        minor = [r[:c] + r[c + 1:] for r in rows[1:]]
        term = rows[0][c] * det(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return rows[0][0] * 0
    return total


@dataclass
class Scene:
    name: str
    coords: tuple
    f_frame: list
    b_frame: list
    structure: list
    field: str = "Q"
    theta: list = None
    connection: list = dc_field(default_factory=list)
    max_degree: int = 16

    @property
    def f(self):
        return len(self.f_frame)

    @property
    def b(self):
        return len(self.b_frame)

    @property
    def dim(self):
        return len(self.coords)

    @cached_property
    def space(self):
        return BundleSpace(self.coords, self.f, self.b)

    def poly(self, c):
        return Poly.const(self.coords, c)

    def form(self, c=0):
        return FormElement.scalar(self.coords, self.f, c)

    def xi(self, k):
        return FormElement.xi(self.coords, self.f, k)

    def section(self, m, n, terms=None):
        return FormSection(self.space, ("co",) * m + ("vec",) * n, terms)

    # frame algebra

    @cached_property
    def frame_matrix(self):
        cols = list(self.f_frame) + list(self.b_frame)
        return [[col.components[mu] for col in cols] for mu in range(self.dim)]

    @cached_property
    def frame_det(self):
        return det(self.frame_matrix)

    @cached_property
    def frame_inverse(self):
        """Rows: coefficient functionals. inv[r][mu] with sum_mu inv[r][mu] W^mu."""
        M = self.frame_matrix
        d = self.frame_det
        if not d.is_constant() or not d:
            raise FrameNotUnimodular("frame determinant %s is not a nonzero constant"
                                     % render_poly(d))
        inv_d = 1 / d.constant_term()
        n = self.dim
        inv = [[None] * n for _ in range(n)]
        for r in range(n):
            for c in range(n):
                minor = [row[:r] + row[r + 1:] for k, row in enumerate(M) if k != c]
                cof = det(minor) if minor else self.poly(1)
                if (r + c) % 2:
                    cof = -cof
                inv[r][c] = cof * inv_d
        return inv

    def decompose(self, W):
        """W = sum a^i V_i + sum b^a j(Z_a); returns (a, b) as Poly lists."""
        coeffs = [sum((self.frame_inverse[r][mu] * W.components[mu]
                       for mu in range(self.dim)), self.poly(0))
                  for r in range(self.dim)]
        return coeffs[:self.f], coeffs[self.f:]

    def recompose(self, a, b):
        out = PolyVectorField(self.coords, [self.poly(0)] * self.dim)
        for ai, V in zip(a, self.f_frame):
            out = out + V.scale(ai)
        for ba, Z in zip(b, self.b_frame):
            out = out + Z.scale(ba)
        return out

    def validate(self):
        """Raise on the first problem; see `diagnostics` for the full list."""
        probs = self.diagnostics()
        if probs:
            kind, msg = probs[0]
            raise kind(msg)
        return self

    def diagnostics(self):
        probs = []
        f, b = self.f, self.b
        if f + b != self.dim:
            probs.append((ShapeError, "rank F + rank B = %d, chart dimension %d"
                          % (f + b, self.dim)))
            return probs
        for V in list(self.f_frame) + list(self.b_frame):
            if len(V.components) != self.dim:
                probs.append((ShapeError, "vector field with wrong component count"))
                return probs
        if (len(self.structure) != f or any(len(r) != f for r in self.structure)
                or any(len(c) != f for r in self.structure for c in r)):
            probs.append((ShapeError, "structure functions must be %dx%dx%d" % (f, f, f)))
            return probs
        if self.theta is not None and (len(self.theta) != b
                                       or any(len(r) != f for r in self.theta)):
            probs.append((ShapeError, "theta must be %dx%d" % (b, f)))
        d = self.frame_det
        if not d or not d.is_constant():
            probs.append((FrameNotUnimodular,
                          "frame determinant %s is not a nonzero constant" % render_poly(d)))
        for i in range(f):
            for k in range(f):
                if self.structure[i][k] and any(
                        self.structure[i][k][l] + self.structure[k][i][l] for l in range(f)):
                    probs.append((NotIntegrable, "structure functions not antisymmetric "
                                  "at (V%d, V%d)" % (i + 1, k + 1)))
                br = vf_bracket_coords(self.f_frame[i], self.f_frame[k])
                for l in range(f):
                    br = br - self.f_frame[l].scale(self.structure[i][k][l])
                if not br.is_zero():
                    probs.append((NotIntegrable, "[V%d, V%d] - sum c V != 0: residual %r"
                                  % (i + 1, k + 1, br)))
        return probs

    # Lie pair data

    @cached_property
    def bott(self):
        """beta[i][a][c]: coefficient of Z_c in pr_B[V_i, j Z_a]."""
        return [[self.decompose(vf_bracket_coords(V, Z))[1] for Z in self.b_frame]
                for V in self.f_frame]

    @cached_property
    def prf_vz(self):
        """gam[i][a][k]: coefficient of V_k in pr_F[V_i, j Z_a]."""
        return [[self.decompose(vf_bracket_coords(V, Z))[0] for Z in self.b_frame]
                for V in self.f_frame]

    @cached_property
    def zz_bracket(self):
        """[jZ_a, jZ_b] decomposed: (F-part, B-part)."""
        return [[self.decompose(vf_bracket_coords(Za, Zb)) for Zb in self.b_frame]
                for Za in self.b_frame]

    def bott_section(self, i, a):
        return self.section(0, 1, {(c,): self.form(p) for c, p in enumerate(self.bott[i][a])})

    @cached_property
    def dxi(self):
        out = []
        for k in range(self.f):
            w = self.form(0)
            for i in range(self.f):
                for j in range(i + 1, self.f):
                    c = self.structure[i][j][k]
                    if c:
                        w = w - (self.xi(i) * self.xi(j)) * c
            out.append(w)
        return out

    def d_poly(self, p):
        w = self.form(0)
        for i, V in enumerate(self.f_frame):
            g = vf_derive(V, p)
            if g:
                w = w + self.xi(i) * g
        return w

    def d_F(self, omega):
        if isinstance(omega, Poly):
            return self.d_poly(omega)
        out = self.form(0)
        for I, p in omega.terms.items():
            basis = self.form(1)
            for k in I:
                basis = basis * self.xi(k)
            out = out + self.d_poly(p) * basis
            # d(xi^I) by the Leibniz rule
            for r, k in enumerate(I):
                if not self.dxi[k]:
                    continue
                left = self.form(1)
                for kk in I[:r]:
                    left = left * self.xi(kk)
                right = self.form(1)
                for kk in I[r + 1:]:
                    right = right * self.xi(kk)
                t = left * self.dxi[k] * right * p
                out = out + (-t if r % 2 else t)
        return out

    def _slot_action(self, kind, idx):
        """d_B applied to a single basis slot: list of (xi-index, new idx, Poly)."""
        acts = []
        for i in range(self.f):
            if kind == "vec":
                for c, p in enumerate(self.bott[i][idx]):
                    if p:
                        acts.append((i, c, p))
            else:
                for c in range(self.b):
                    p = self.bott[i][c][idx]
                    if p:
                        acts.append((i, c, -p))
        return acts

    def d_B(self, sigma):
        if isinstance(sigma, (FormElement, Poly)):
            return self.d_F(sigma)
        out = {}
        for w, c in sigma.terms.items():
            dc = self.d_F(c)
            if dc:
                sigma._accum(out, w, dc)
            for pos, (kind, idx) in enumerate(zip(sigma.kinds, w)):
                for i, new, p in self._slot_action(kind, idx):
                    nw = w[:pos] + (new,) + w[pos + 1:]
                    # (-1)^{|c|} c ^ (xi^i p) = xi^i ^ c p
                    sigma._accum(out, nw, (self.xi(i) * c) * p)
        return sigma.new(terms=out)

    # alternate splitting

    def theta_matrix(self):
        if self.theta is None:
            raise MissingTheta("scene %s has no theta" % self.name)
        return self.theta

    @cached_property
    def hat(self):
        """Scene with j-hat(Z_a) = j(Z_a) + sum_i theta_a^i V_i."""
        th = self.theta_matrix()
        bf = []
        for a, Z in enumerate(self.b_frame):
            for i, V in enumerate(self.f_frame):
                Z = Z + V.scale(th[a][i])
            bf.append(Z)
        return Scene(self.name + "^", self.coords, list(self.f_frame), bf,
                     self.structure, self.field, None, [], self.max_degree)

    # serialization

    def to_dict(self):
        def vf(X):
            return [render_poly(c) for c in X.components]
        d = {
            "name": self.name,
            "field": self.field,
            "coords": list(self.coords),
            "f_frame": [vf(V) for V in self.f_frame],
            "b_frame": [vf(Z) for Z in self.b_frame],
            "structure": [[[render_poly(p) for p in c] for c in r] for r in self.structure],
            "connection": [dict(e) for e in self.connection],
            "max_degree": self.max_degree,
        }
        if self.theta is not None:
            d["theta"] = [[render_poly(p) for p in r] for r in self.theta]
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)


def scene_from_dict(d):
    try:
        coords = tuple(d["coords"])
        P = lambda s: parse_poly(str(s), coords)
        vf = lambda comps: PolyVectorField(coords, [P(c) for c in comps])
        f_frame = [vf(V) for V in d["f_frame"]]
        b_frame = [vf(Z) for Z in d["b_frame"]]
        f = len(f_frame)
        raw = d.get("structure")
        if raw is None:
            structure = [[[Poly.const(coords, 0)] * f for _ in range(f)] for _ in range(f)]
        else:
            structure = [[[P(p) for p in c] for c in r] for r in raw]
        theta = d.get("theta")
        if theta is not None:
            theta = [[P(p) for p in r] for r in theta]
        conn = []
        for e in d.get("connection", []):
            conn.append({"X": str(e["X"]), "Y": str(e["Y"]), "out": str(e["out"]),
                         "coeff": render_poly(P(e["coeff"]))})
        field = d.get("field", "Q")
        if field not in ("Q", "Qi"):
            raise ParseError("field must be Q or Qi, got %r" % field)
        return Scene(str(d["name"]), coords, f_frame, b_frame, structure, field,
                     theta, conn, int(d.get("max_degree", 16)))
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError("malformed scene: %s" % exc) from exc


def load_scene(path):
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError("%s: %s" % (path, exc)) from exc
    return scene_from_dict(d)


def bundled_scene_paths():
    from importlib import resources
    root = resources.files("fcorr") / "scenes"
    return sorted(str(p) for p in root.iterdir() if p.name.endswith(".json"))


def bundled(name):
    for p in bundled_scene_paths():
        if p.endswith("/" + name + ".json"):
            return load_scene(p)
    raise KeyError(name)


CORPUS = ("flat2", "shear2", "tilt3", "contact3", "cplx1", "quad4")
