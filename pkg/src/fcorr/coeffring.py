"""Exact coefficient ring: polynomials over Q or Q(i) in chart coordinates.

Polynomials stand in for smooth functions on a chart.  Complex charts use
independent formal variables (z, zb) with independent partial derivatives.
"""

import os
import re
from fractions import Fraction


DEFAULT_MAX_DEGREE = 16


class DegreeOverflow(ArithmeticError):
    pass


class ParseError(ValueError):
    pass


def max_degree():
    return int(os.environ.get("FC_MAX_DEGREE", DEFAULT_MAX_DEGREE))


class GaussianRational:
    """a + b*i with rational a, b.  Use `gauss` to build; it demotes b == 0."""

    __slots__ = ("re", "im")

    def __init__(self, re_, im):
        self.re = Fraction(re_)
        self.im = Fraction(im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re + other.re, self.im + other.im)
        return gauss(self.re + other, self.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)
        return gauss(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            n = other.re * other.re + other.im * other.im
            return self * GaussianRational(other.re / n, -other.im / n)
        return gauss(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        return GaussianRational(other, 0) / self

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return self.im == 0 and self.re == other

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return "(%s+%s*i)" % (_frac_str(self.re), _frac_str(self.im))


I = GaussianRational(0, 1)


def gauss(re_, im):
    if im == 0:
        return Fraction(re_)
    return GaussianRational(re_, im)


def _frac_str(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def scalar_str(c):
    if isinstance(c, GaussianRational):
        return repr(c)
    return _frac_str(c)


def _grlex_key(exps):
    return (sum(exps), exps)


class Poly:
    """Sparse polynomial: exponent tuple -> scalar, zero terms never stored."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = c if isinstance(c, GaussianRational) else Fraction(c)

    @classmethod
    def _raw(cls, vars, terms):
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        return p

    @classmethod
    def const(cls, vars, c):
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars, name):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1})

    @classmethod
    def zero(cls, vars):
        return cls._raw(tuple(vars), {})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError("variable lists differ: %r vs %r" % (self.vars, other.vars))
            return other
        return Poly.const(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly._raw(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return Poly._raw(self.vars, {})
            return Poly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        cap = max_degree()
        for e in terms:
            if sum(e) > cap:
                raise DegreeOverflow("degree %d exceeds cap %d" % (sum(e), cap))
        return Poly._raw(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly.const(self.vars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if not other:
            return not self.terms
        return self.terms == Poly.const(self.vars, other).terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def diff(self, k):
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = e[:k] + (e[k] - 1,) + e[k + 1:]
                terms[ne] = c * e[k]
        return Poly._raw(self.vars, terms)

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return "Poly(%s)" % render_poly(self)


def render_poly(p):
    if not p.terms:
        return "0"
    out = []
    for e in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[e]
        mono = "*".join(
            v if k == 1 else "%s^%d" % (v, k)
            for v, k in zip(p.vars, e) if k)
        if isinstance(c, GaussianRational):
            body = repr(c) + ("*" + mono if mono else "")
            out.append(("+" if out else "") + body)
            continue
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else _frac_str(a) + "*" + mono
        else:
            body = _frac_str(a)
        out.append(("-" if neg else ("+" if out else "")) + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(s):
    toks = []
    pos = 0
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            break
        pos = m.end()
        num, name, sym = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif name is not None:
            toks.append(("name", name))
        elif sym is not None and not sym.isspace():
            toks.append(("sym", sym))
    return toks


def parse_poly(s, vars):
    """Parse the canonical grammar (and any +,-,*,/,^,() expression over it)."""
    vars = tuple(vars)
    toks = _tokenize(s)
    if not toks:
        raise ParseError("empty polynomial string")
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else (None, None)

    def take():
        t = peek()
        pos[0] += 1
        return t

    def expr():
        sign = 1
        if peek() == ("sym", "-"):
            take()
            sign = -1
        elif peek() == ("sym", "+"):
            take()
        acc = term() * sign
        while peek() in (("sym", "+"), ("sym", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = power()
        while peek() in (("sym", "*"), ("sym", "/")):
            op = take()[1]
            rhs = power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division by non-constant or zero in %r" % s)
                acc = acc * (1 / rhs.constant_term())
        return acc

    def power():
        base = atom()
        if peek() == ("sym", "^"):
            take()
            kind, n = take()
            if kind != "num":
                raise ParseError("expected integer exponent in %r" % s)
            base = base ** n
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return Poly.const(vars, val)
        if kind == "name":
            if val in vars:
                return Poly.var(vars, val)
            if val == "i":
                return Poly.const(vars, I)
            raise ParseError("unknown symbol %r in %r" % (val, s))
        if (kind, val) == ("sym", "("):
            inner = expr()
            if take() != ("sym", ")"):
                raise ParseError("unbalanced parentheses in %r" % s)
            return inner
        if (kind, val) == ("sym", "-"):
            return -atom()
        raise ParseError("unexpected token %r in %r" % (val, s))

    result = expr()
    if pos[0] != len(toks):
        raise ParseError("trailing input in %r" % s)
    return result


class PolyVectorField:
    """Sum_mu components[mu] * d/dx_mu."""

    __slots__ = ("vars", "components")

    def __init__(self, vars, components):
        self.vars = tuple(vars)
        self.components = tuple(components)
        if len(self.components) != len(self.vars):
            raise ValueError("need one component per coordinate")

    @classmethod
    def coordinate(cls, vars, name):
        vars = tuple(vars)
        return cls(vars, [Poly.const(vars, 1 if v == name else 0) for v in vars])

    def __call__(self, f):
        return vf_derive(self, f)

    def __add__(self, other):
        return PolyVectorField(self.vars, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        return PolyVectorField(self.vars, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return PolyVectorField(self.vars, [-a for a in self.components])

    def scale(self, g):
        return PolyVectorField(self.vars, [g * a for a in self.components])

    def __eq__(self, other):
        return isinstance(other, PolyVectorField) and self.components == other.components

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __repr__(self):
        parts = ["(%s)*d_%s" % (c, v) for c, v in zip(self.components, self.vars) if c]
        return " + ".join(parts) or "0"


def vf_derive(X, f):
    out = Poly.zero(f.vars)
    for k, c in enumerate(X.components):
        if c:
            out = out + c * f.diff(k)
    return out


def vf_bracket_coords(X, Y):
    return PolyVectorField(X.vars, [
        vf_derive(X, b) - vf_derive(Y, a)
        for a, b in zip(X.components, Y.components)])
