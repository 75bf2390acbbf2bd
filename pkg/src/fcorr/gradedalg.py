"""Exterior algebra Omega_F = Poly[xi^1..xi^f] and free graded modules over it.

Basis covectors xi^k are stored as strictly increasing index tuples (0-based);
every product is reduced to that normal form by counting inversions.
Module elements put the Omega_F coefficient on the left of a word of basis
slots, and every reordering carries its Koszul sign.
"""

import itertools
from fractions import Fraction

from .coeffring import Poly


class FrameMismatch(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


def merge_sign(I, J):
    """Sign and sorted union of xi^I ^ xi^J (sign 0 if they overlap)."""
    if set(I) & set(J):
        return 0, None
    inv = 0
    for a in I:
        for b in J:
            if a > b:
                inv += 1
    return (-1) ** inv, tuple(sorted(I + J))


class FormElement:
    """sum_I p_I xi^I with p_I in Poly."""

    __slots__ = ("vars", "rank", "terms")

    def __init__(self, vars, rank, terms=None):
        self.vars = tuple(vars)
        self.rank = rank
        self.terms = {}
        if terms:
            for I, p in terms.items():
                if not isinstance(p, Poly):
                    p = Poly.const(self.vars, p)
                if p:
                    self.terms[tuple(I)] = p

    @classmethod
    def _raw(cls, vars, rank, terms):
        w = cls.__new__(cls)
        w.vars = vars
        w.rank = rank
        w.terms = terms
        return w

    @classmethod
    def zero(cls, vars, rank):
        return cls._raw(tuple(vars), rank, {})

    @classmethod
    def scalar(cls, vars, rank, p):
        if not isinstance(p, Poly):
            p = Poly.const(vars, p)
        return cls(vars, rank, {(): p})

    @classmethod
    def xi(cls, vars, rank, k):
        return cls(vars, rank, {(k,): Poly.const(vars, 1)})

    def like(self, terms):
        return FormElement._raw(self.vars, self.rank, terms)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return {len(I) for I in self.terms}

    @property
    def degree(self):
        """Form degree of a homogeneous element (0 for zero)."""
        ds = self.degrees()
        if not ds:
            return 0
        if len(ds) > 1:
            raise ValueError("inhomogeneous form")
        return ds.pop()

    def part(self, k):
        return self.like({I: p for I, p in self.terms.items() if len(I) == k})

    def _check(self, other):
        if other.vars != self.vars or other.rank != self.rank:
            raise FrameMismatch("forms over different frames")

    def __add__(self, other):
        if not isinstance(other, FormElement):
            other = FormElement.scalar(self.vars, self.rank, other)
        self._check(other)
        terms = dict(self.terms)
        for I, p in other.terms.items():
            q = terms.get(I)
            s = p if q is None else q + p
            if s:
                terms[I] = s
            else:
                terms.pop(I, None)
        return self.like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self.like({I: -p for I, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Wedge product; numbers and Polys act as degree-0 scalars."""
        if not isinstance(other, FormElement):
            if isinstance(other, Poly) or other:
                return self.like({I: p * other for I, p in self.terms.items()
                                  if p * other})
            return self.like({})
        self._check(other)
        terms = {}
        for I, p in self.terms.items():
            for J, q in other.terms.items():
                s, K = merge_sign(I, J)
                if not s:
                    continue
                v = p * q
                if s < 0:
                    v = -v
                old = terms.get(K)
                v = v if old is None else old + v
                if v:
                    terms[K] = v
                else:
                    terms.pop(K, None)
        return self.like(terms)

    def __rmul__(self, other):
        # scalars are degree 0, so they commute
        return self * other

    def __eq__(self, other):
        if isinstance(other, FormElement):
            return self.terms == other.terms
        if not other:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return render_form(self)

    def map_coeffs(self, fn):
        terms = {}
        for I, p in self.terms.items():
            q = fn(p)
            if q:
                terms[I] = q
        return self.like(terms)


def wedge(a, b):
    if isinstance(a, FormElement) and isinstance(b, FormElement):
        return a * b
    if isinstance(a, FormElement):
        return b.lmul(a)
    if isinstance(b, FormElement):
        # a word times a form: move the form across the slots
        return a.rmul(b)
    return a.tensor(b)


def contract_form(k, w):
    """Interior product with the k-th frame vector (left derivation, degree -1)."""
    if isinstance(w, SlotTensor):
        return w.map_coeffs_graded(lambda c: contract_form(k, c))
    if isinstance(w, Poly):
        return Poly.zero(w.vars)
    terms = {}
    for I, p in w.terms.items():
        if k in I:
            pos = I.index(k)
            J = I[:pos] + I[pos + 1:]
            terms[J] = -p if pos % 2 else p
    return w.like(terms)


def pair_dual(zeta_word, z_word):
    if len(zeta_word) != len(z_word):
        raise LengthMismatch("pairing words of different length")
    return Fraction(int(all(a == b for a, b in zip(zeta_word, z_word))))


def koszul_perm_sign(degs, perm):
    """Sign for reordering graded items: new position k holds old item perm[k]."""
    s = 0
    n = len(perm)
    for a in range(n):
        for b in range(a + 1, n):
            if perm[a] > perm[b] and degs[perm[a]] % 2 and degs[perm[b]] % 2:
                s += 1
    return -1 if s % 2 else 1


def perm_parity(perm):
    s = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                s += 1
    return -1 if s % 2 else 1


class SlotTensor:
    """Free Omega_F-module element: word of basis indices -> FormElement coefficient.

    `kinds` gives each slot as "co" (dual basis) or "vec" (basis).  Subclasses
    supply the intrinsic degree of a basis element in a slot.
    """

    def __init__(self, space, kinds, terms=None):
        self.space = space
        self.kinds = tuple(kinds)
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if c:
                    self.terms[tuple(w)] = c

    # hooks
    def slot_deg(self, kind, idx):
        raise NotImplementedError

    @property
    def vars(self):
        return self.space.vars

    @property
    def rank(self):
        return self.space.f

    def new(self, kinds=None, terms=None):
        return type(self)(self.space, self.kinds if kinds is None else kinds, terms)

    def word_deg(self, w, kinds=None):
        kinds = self.kinds if kinds is None else kinds
        return sum(self.slot_deg(k, i) for k, i in zip(kinds, w))

    def degrees(self):
        return {c_deg + self.word_deg(w) for w, c in self.terms.items()
                for c_deg in c.degrees()}

    @property
    def degree(self):
        ds = self.degrees()
        if not ds:
            return 0
        if len(ds) > 1:
            raise ValueError("inhomogeneous tensor")
        return ds.pop()

    @property
    def m(self):
        return sum(1 for k in self.kinds if k == "co")

    @property
    def n(self):
        return sum(1 for k in self.kinds if k == "vec")

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if other.kinds != self.kinds or other.space is not self.space and other.space != self.space:
            raise FrameMismatch("tensors of different signature or scene")

    def _accum(self, terms, w, c):
        old = terms.get(w)
        c = c if old is None else old + c
        if c:
            terms[w] = c
        else:
            terms.pop(w, None)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            self._accum(terms, w, c)
        return self.new(terms=terms)

    __radd__ = __add__

    def __neg__(self):
        return self.new(terms={w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, SlotTensor):
            return self.kinds == other.kinds and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def scale(self, q):
        """Multiply by a degree-0 scalar (number or Poly)."""
        return self.new(terms={w: c * q for w, c in self.terms.items() if c * q})

    def lmul(self, omega):
        """omega * self for omega in Omega_F."""
        return self.new(terms={w: omega * c for w, c in self.terms.items() if omega * c})

    def rmul(self, omega):
        """self * omega: omega moves left across the slots."""
        terms = {}
        for w, c in self.terms.items():
            for I, p in omega.terms.items():
                piece = omega.like({I: p})
                s = -1 if (len(I) * self.word_deg(w)) % 2 else 1
                v = c * piece
                self._accum(terms, w, v if s > 0 else -v)
        return self.new(terms=terms)

    def map_coeffs_graded(self, fn):
        """Apply a coefficient map that ignores slots (e.g. an odd derivation)."""
        terms = {}
        for w, c in self.terms.items():
            self._accum(terms, w, fn(c))
        return self.new(terms=terms)

    def tensor(self, other):
        """(c1 w1) (x) (c2 w2) = +-(c1 c2) w1 w2."""
        kinds = self.kinds + other.kinds
        terms = {}
        for w1, c1 in self.terms.items():
            d1 = self.word_deg(w1)
            for w2, c2 in other.terms.items():
                for I, p in c2.terms.items():
                    v = c1 * c2.like({I: p})
                    if (d1 * len(I)) % 2:
                        v = -v
                    self._accum(terms, w1 + w2, v)
        return self.new(kinds=kinds, terms=terms)

    def permute(self, perm):
        """Reorder slots: new slot k is old slot perm[k], with the Koszul sign."""
        kinds = tuple(self.kinds[p] for p in perm)
        terms = {}
        for w, c in self.terms.items():
            degs = [self.slot_deg(k, i) for k, i in zip(self.kinds, w)]
            s = koszul_perm_sign(degs, perm)
            nw = tuple(w[p] for p in perm)
            self._accum(terms, nw, c if s > 0 else -c)
        return self.new(kinds=kinds, terms=terms)

    def contract_adjacent(self, pos):
        """Pair slot pos (co) with slot pos+1 (vec): <e^a, e_b> = delta."""
        if self.kinds[pos] != "co" or self.kinds[pos + 1] != "vec":
            raise FrameMismatch("contraction needs a (co, vec) slot pair")
        kinds = self.kinds[:pos] + self.kinds[pos + 2:]
        terms = {}
        for w, c in self.terms.items():
            if w[pos] == w[pos + 1]:
                self._accum(terms, w[:pos] + w[pos + 2:], c)
        return self.new(kinds=kinds, terms=terms)

    def alt(self, r=None):
        """Graded antisymmetrization of the first r slots (no 1/r! factor)."""
        r = len(self.kinds) if r is None else r
        rest = tuple(range(r, len(self.kinds)))
        out = self.new(terms={})
        for p in itertools.permutations(range(r)):
            t = self.permute(tuple(p) + rest)
            out = out + (t if perm_parity(p) > 0 else -t)
        return out

    def compose(self, other):
        """End-valued product: forms of self, forms of other, then End composition.

        Both operands end in an End pair (co input, vec output).  Result
        slots: self.forms + other.forms + (other input, self output).
        """
        a = len(self.kinds) - 2
        b = len(other.kinds) - 2
        t = self.tensor(other)
        # slots: F1 (0..a-1), b1 (a), g1 (a+1), F2 (a+2..a+1+b), b2, g2
        F1 = list(range(a))
        F2 = list(range(a + 2, a + 2 + b))
        b1, g1, b2, g2 = a, a + 1, a + 2 + b, a + 3 + b
        t = t.permute(tuple(F1 + F2 + [b2, b1, g2, g1]))
        return t.contract_adjacent(a + b + 1)

    def __repr__(self):
        return render_tensor(self)


class BundleSpace:
    """Frame data for Omega_F(T_m^n B): f covectors, b basis sections of B."""

    def __init__(self, vars, f, b):
        self.vars = tuple(vars)
        self.f = f
        self.b = b

    def __eq__(self, other):
        return (isinstance(other, BundleSpace) and self.vars == other.vars
                and self.f == other.f and self.b == other.b)

    def __hash__(self):
        return hash((self.vars, self.f, self.b))


class FormSection(SlotTensor):
    """Element of Omega_F(T_m^n B); B and B^dual slots carry degree 0."""

    def slot_deg(self, kind, idx):
        return 0

    def slot_name(self, kind, idx):
        return ("zeta[%d]" if kind == "co" else "Z[%d]") % (idx + 1)


def sig_kinds(m, n):
    return ("co",) * m + ("vec",) * n


# rendering

def render_form(w):
    if not w.terms:
        return "0"
    parts = []
    for I in sorted(w.terms, key=lambda I: (len(I), I)):
        p = w.terms[I]
        s = "(%s)" % p
        if I:
            s += "*" + "^".join("xi[%d]" % (k + 1) for k in I)
        parts.append(s)
    return " + ".join(parts)


def render_tensor(t):
    if not t.terms:
        return "0"
    parts = []
    for w in sorted(t.terms):
        c = t.terms[w]
        for I in sorted(c.terms, key=lambda I: (len(I), I)):
            s = "(%s)" % c.terms[I]
            if I:
                s += "*" + "^".join("xi[%d]" % (k + 1) for k in I)
            for k, i in zip(t.kinds, w):
                s += "⊗" + t.slot_name(k, i)
            parts.append(s)
    return " + ".join(parts)


def parse_form(s, vars, rank):
    from .coeffring import parse_poly, ParseError
    s = s.strip()
    if s == "0":
        return FormElement.zero(vars, rank)
    out = FormElement.zero(vars, rank)
    for chunk in _split_top(s):
        poly_str, rest = _take_paren(chunk.strip())
        term = FormElement.scalar(vars, rank, parse_poly(poly_str, vars))
        if rest:
            if not rest.startswith("*"):
                raise ParseError("bad form term %r" % chunk)
            for atom in rest[1:].split("^"):
                atom = atom.strip()
                if not (atom.startswith("xi[") and atom.endswith("]")):
                    raise ParseError("bad covector %r" % atom)
                term = term * FormElement.xi(vars, rank, int(atom[3:-1]) - 1)
        out = out + term
    return out


def _split_top(s):
    """Split on ' + ' at parenthesis depth 0."""
    parts, depth, cur = [], 0, []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and s.startswith(" + ", i):
            parts.append("".join(cur))
            cur = []
            i += 3
            continue
        cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


def _take_paren(s):
    from .coeffring import ParseError
    if not s.startswith("("):
        raise ParseError("term must start with a parenthesized polynomial: %r" % s)
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return s[1:i], s[i + 1:]
    raise ParseError("unbalanced parentheses in %r" % s)


def parse_tensor(s, proto, names):
    """Parse render_tensor output back; `names` maps slot token -> (kind, idx)."""
    from .coeffring import parse_poly, ParseError
    s = s.strip()
    out = proto.new(terms={})
    if s == "0":
        return out
    for chunk in _split_top(s):
        poly_str, rest = _take_paren(chunk.strip())
        p = parse_poly(poly_str, proto.vars)
        pieces = rest.split("⊗")
        head, slots = pieces[0], pieces[1:]
        c = FormElement.scalar(proto.vars, proto.rank, p)
        if head:
            if not head.startswith("*"):
                raise ParseError("bad tensor term %r" % chunk)
            for atom in head[1:].split("^"):
                c = c * FormElement.xi(proto.vars, proto.rank, int(atom.strip()[3:-1]) - 1)
        word, kinds = [], []
        for tok in slots:
            if tok not in names:
                raise ParseError("unknown slot %r" % tok)
            k, i = names[tok]
            kinds.append(k)
            word.append(i)
        if tuple(kinds) != proto.kinds:
            raise ParseError("slot kinds %r do not match %r" % (kinds, proto.kinds))
        out = out + proto.new(terms={tuple(word): c})
    return out
