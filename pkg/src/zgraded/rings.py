"""Z-graded rings with exact rational scalars.

Every ring decomposes as R = (+)_k R_k with R_i * R_j inside R_{i+j}. Two
tiers share one element interface:

* finite type -- each degree component has a finite Q-basis with structure
  constants (`laurent`, `matrix_laurent:n`, `laurent_step2`);
* symbolic -- elements are normal-form linear combinations of words in
  noncommuting generators, reduced by a homogeneous rewriting system
  (`leavitt11`, the Leavitt algebra of type (1,1)).

An element stores a finite map degree -> homogeneous value; zero is the empty
map, so representations are canonical and equality is literal. All values are
immutable after construction and every operation is a pure function.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegreeOutOfRange, NonHomogeneousRule, RingMismatch, UnknownGenerator


class RingElement:
    """Finite sum of homogeneous components, keyed by degree.

    Component values are ring-tier specific: coefficient tuples for finite
    type rings, word->coefficient maps for symbolic rings. Instances are
    created by the owning ring and are never mutated.
    """

    __slots__ = ("ring", "parts")

    def __init__(self, ring_ident, parts):
        self.ring = ring_ident
        self.parts = parts

    def support(self):
        return sorted(self.parts)

    def part(self, d):
        return self.parts.get(d)

    def is_zero(self):
        return not self.parts

    def is_homogeneous(self, d=None):
        if not self.parts:
            return True
        if len(self.parts) != 1:
            return False
        return d is None or d in self.parts

    def degree(self):
        """Degree of a nonzero homogeneous element, else None."""
        if len(self.parts) == 1:
            return next(iter(self.parts))
        return None

    def min_degree(self):
        return min(self.parts) if self.parts else None

    def max_degree(self):
        return max(self.parts) if self.parts else None

    def __bool__(self):
        return bool(self.parts)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.parts == other.parts

    def __neg__(self):
        return get_ring(self.ring).neg(self)

    def __add__(self, other):
        return get_ring(self.ring).add(self, _coerce(self.ring, other))

    __radd__ = __add__

    def __sub__(self, other):
        return get_ring(self.ring).add(self, -_coerce(self.ring, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return get_ring(self.ring).scale(Fraction(other), self)
        return get_ring(self.ring).mul(self, _coerce(self.ring, other))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return get_ring(self.ring).scale(Fraction(other), self)
        return _coerce(self.ring, other) * self

    def __str__(self):
        from .exprs import element_to_str

        return element_to_str(self)

    def __repr__(self):
        return f"<{self.ring}: {self}>"


def _coerce(ring_ident, x):
    if isinstance(x, RingElement):
        if x.ring != ring_ident:
            raise RingMismatch(f"{x.ring} element used in {ring_ident}")
        return x
    if isinstance(x, (int, Fraction)):
        return get_ring(ring_ident).scalar(Fraction(x))
    raise TypeError(f"cannot coerce {type(x).__name__} into {ring_ident}")


class GradedRing:
    """Common arithmetic shared by both tiers.

    Subclasses supply the per-degree value model: `value_add`, `value_scale`,
    `value_is_zero`, and `mul_values` (which multiplies homogeneous values of
    degrees d1, d2 into one of degree d1+d2).
    """

    ident = ""
    finite_type = False
    # generators for which `name^k` is accepted by the expression grammar
    central_power_gens = frozenset()

    def element(self, parts):
        pruned = {d: v for d, v in parts.items() if not self.value_is_zero(v)}
        return RingElement(self.ident, pruned)

    def zero(self):
        return RingElement(self.ident, {})

    def scalar(self, q):
        q = Fraction(q)
        if q == 0:
            return self.zero()
        return self.element({0: self.unit_value(q)})

    def one(self):
        return self.scalar(1)

    def add(self, x, y):
        parts = dict(x.parts)
        for d, v in y.parts.items():
            if d in parts:
                parts[d] = self.value_add(parts[d], v)
            else:
                parts[d] = v
        return self.element(parts)

    def neg(self, x):
        return self.scale(Fraction(-1), x)

    def scale(self, q, x):
        if q == 0:
            return self.zero()
        return self.element({d: self.value_scale(q, v) for d, v in x.parts.items()})

    def mul(self, x, y):
        parts = {}
        for d1, v1 in x.parts.items():
            for d2, v2 in y.parts.items():
                v = self.mul_values(d1, v1, d2, v2)
                if self.value_is_zero(v):
                    continue
                d = d1 + d2
                if d in parts:
                    parts[d] = self.value_add(parts[d], v)
                else:
                    parts[d] = v
        return self.element(parts)

    def homogeneous_part(self, x, d):
        v = x.parts.get(d)
        if v is None:
            return self.zero()
        return RingElement(self.ident, {d: v})

    # -- hooks -------------------------------------------------------------

    def unit_value(self, q):
        raise NotImplementedError

    def value_add(self, u, v):
        raise NotImplementedError

    def value_scale(self, q, v):
        raise NotImplementedError

    def value_is_zero(self, v):
        raise NotImplementedError

    def mul_values(self, d1, v1, d2, v2):
        raise NotImplementedError

    def generators(self):
        """Name -> element map used by the expression grammar."""
        raise NotImplementedError

    def generator_power(self, name, k):
        raise UnknownGenerator(f"{self.ident} has no generator {name!r}")

    def stored_partition_pairs(self):
        """((alpha, beta) pairs of type (1,-1), pairs of type (-1,1)) or None."""
        return None

    def render_part(self, d, value):
        """Homogeneous value -> list of (coefficient, monomial-string) terms."""
        raise NotImplementedError

    # -- finite tier hooks ---------------------------------------------------

    def component_dim(self, d):
        raise NotImplementedError

    def basis_value(self, d, i):
        raise NotImplementedError

    def basis_element(self, d, i):
        return self.element({d: self.basis_value(d, i)})

    def value_coords(self, d, v):
        """Coefficient tuple of a homogeneous value in the degree-d basis."""
        raise NotImplementedError


class _TupleRing(GradedRing):
    """Finite tier backed by flat coefficient tuples per degree."""

    finite_type = True

    def value_add(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def value_scale(self, q, v):
        return tuple(q * a for a in v)

    def value_is_zero(self, v):
        return all(a == 0 for a in v)

    def basis_value(self, d, i):
        dim = self.component_dim(d)
        return tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))

    def value_coords(self, d, v):
        return v


class LaurentRing(_TupleRing):
    """Q[t, t^-1] graded by the exponent of t; R_d = Q * t^d."""

    ident = "laurent"
    central_power_gens = frozenset({"t"})

    def unit_value(self, q):
        return (q,)

    def mul_values(self, d1, v1, d2, v2):
        return (v1[0] * v2[0],)

    def component_dim(self, d):
        return 1

    def generators(self):
        return {"t": self.element({1: (Fraction(1),)})}

    def generator_power(self, name, k):
        if name != "t":
            raise UnknownGenerator(f"laurent has no generator {name!r}")
        return self.element({k: (Fraction(1),)})

    def stored_partition_pairs(self):
        t = self.generator_power("t", 1)
        ti = self.generator_power("t", -1)
        return [(t, ti)], [(ti, t)]

    def render_part(self, d, value):
        if d == 0:
            mono = "1"
        elif d == 1:
            mono = "t"
        else:
            mono = f"t^{d}"
        return [(value[0], mono)]


class LaurentStep2Ring(_TupleRing):
    """Q[u, u^-1] with u placed in degree 2; odd components vanish.

    A control ring: it is Z-graded but not strongly graded since R_1 = 0.
    """

    ident = "laurent_step2"
    central_power_gens = frozenset({"u"})

    def unit_value(self, q):
        return (q,)

    def mul_values(self, d1, v1, d2, v2):
        return (v1[0] * v2[0],)

    def component_dim(self, d):
        return 1 if d % 2 == 0 else 0

    def generators(self):
        return {"u": self.element({2: (Fraction(1),)})}

    def generator_power(self, name, k):
        if name != "u":
            raise UnknownGenerator(f"laurent_step2 has no generator {name!r}")
        return self.element({2 * k: (Fraction(1),)})

    def render_part(self, d, value):
        e = d // 2
        if e == 0:
            mono = "1"
        elif e == 1:
            mono = "u"
        else:
            mono = f"u^{e}"
        return [(value[0], mono)]


class MatrixLaurentRing(_TupleRing):
    """Mat_n(Q)[t, t^-1]; R_d = Mat_n(Q) * t^d, flattened row-major."""

    central_power_gens = frozenset({"t"})

    def __init__(self, n):
        if not 1 <= n <= 9:
            raise ValueError("matrix_laurent size must be between 1 and 9")
        self.n = n
        self.ident = f"matrix_laurent:{n}"

    def unit_value(self, q):
        n = self.n
        return tuple(q if i == j else Fraction(0) for i in range(n) for j in range(n))

    def mul_values(self, d1, v1, d2, v2):
        n = self.n
        out = [Fraction(0)] * (n * n)
        for i in range(n):
            for k in range(n):
                a = v1[i * n + k]
                if a == 0:
                    continue
                for j in range(n):
                    b = v2[k * n + j]
                    if b != 0:
                        out[i * n + j] += a * b
        return tuple(out)

    def component_dim(self, d):
        return self.n * self.n

    def generators(self):
        n = self.n
        gens = {"t": self.element({1: self.unit_value(Fraction(1))})}
        for i in range(n):
            for j in range(n):
                v = [Fraction(0)] * (n * n)
                v[i * n + j] = Fraction(1)
                gens[f"E{i + 1}{j + 1}"] = self.element({0: tuple(v)})
        return gens

    def generator_power(self, name, k):
        if name != "t":
            raise UnknownGenerator(f"{self.ident}: ^ only applies to the central generator t")
        return self.element({k: self.unit_value(Fraction(1))})

    def stored_partition_pairs(self):
        t = self.generator_power("t", 1)
        ti = self.generator_power("t", -1)
        return [(t, ti)], [(ti, t)]

    def render_part(self, d, value):
        n = self.n
        if d == 0:
            tpow = ""
        elif d == 1:
            tpow = "*t"
        else:
            tpow = f"*t^{d}"
        terms = []
        for i in range(n):
            for j in range(n):
                c = value[i * n + j]
                if c != 0:
                    terms.append((c, f"E{i + 1}{j + 1}{tpow}"))
        return terms


class RewritingRing(GradedRing):
    """Symbolic tier: words in graded generators modulo a rewriting system.

    Rules map a word to a linear combination of words; every rule must be
    degree-homogeneous (construction fails otherwise with
    NonHomogeneousRule). Reduction applies the leftmost redex first and is
    memoised; termination comes from a degree-lexicographic word order for
    the shipped presentations, and confluence is enforced by the test suite
    rather than assumed.
    """

    finite_type = False

    def __init__(self, ident, generator_degrees, rules):
        self.ident = ident
        self.gen_degrees = dict(generator_degrees)
        self.rules = {lhs: tuple((Fraction(c), w) for c, w in rhs) for lhs, rhs in rules.items()}
        for lhs, rhs in self.rules.items():
            d = self.word_degree(lhs)
            for _, w in rhs:
                if self.word_degree(w) != d:
                    raise NonHomogeneousRule(f"rule {lhs} -> {w} changes degree")
        self._lhs_sorted = sorted(self.rules, key=len)
        self._reduce_memo = {}

    def word_degree(self, w):
        d = 0
        for ch in w:
            if ch not in self.gen_degrees:
                raise UnknownGenerator(f"{self.ident} has no generator {ch!r}")
            d += self.gen_degrees[ch]
        return d

    def _find_redex(self, w):
        for i in range(len(w)):
            for lhs in self._lhs_sorted:
                if w.startswith(lhs, i):
                    return i, lhs
        return None

    def reduce_word(self, w):
        """Normal form of a single word: {word: coefficient}."""
        memo = self._reduce_memo
        got = memo.get(w)
        if got is not None:
            return got
        hit = self._find_redex(w)
        if hit is None:
            out = {w: Fraction(1)}
        else:
            i, lhs = hit
            acc = {}
            tail = w[i + len(lhs):]
            head = w[:i]
            for coef, rep in self.rules[lhs]:
                for word, c in self.reduce_word(head + rep + tail).items():
                    v = acc.get(word, Fraction(0)) + coef * c
                    if v == 0:
                        acc.pop(word, None)
                    else:
                        acc[word] = v
            out = acc
        memo[w] = out
        return out

    def unit_value(self, q):
        return {"": q}

    def value_add(self, u, v):
        out = dict(u)
        for w, c in v.items():
            s = out.get(w, Fraction(0)) + c
            if s == 0:
                out.pop(w, None)
            else:
                out[w] = s
        return out

    def value_scale(self, q, v):
        return {w: q * c for w, c in v.items()}

    def value_is_zero(self, v):
        return not v

    def mul_values(self, d1, v1, d2, v2):
        out = {}
        for w1, c1 in v1.items():
            for w2, c2 in v2.items():
                coef = c1 * c2
                for w, c in self.reduce_word(w1 + w2).items():
                    s = out.get(w, Fraction(0)) + coef * c
                    if s == 0:
                        out.pop(w, None)
                    else:
                        out[w] = s
        return out

    def mul(self, x, y):
        # words of mixed degrees can reduce into each other's degrees only if
        # a rule were inhomogeneous; the constructor rules that out, so the
        # generic per-degree product applies verbatim
        return super().mul(x, y)

    def word_element(self, w, coef=1):
        parts = {}
        for word, c in self.reduce_word(w).items():
            d = self.word_degree(word)
            cur = parts.setdefault(d, {})
            s = cur.get(word, Fraction(0)) + Fraction(coef) * c
            if s == 0:
                cur.pop(word, None)
            else:
                cur[word] = s
        return self.element(parts)

    def generators(self):
        return {g: self.word_element(g) for g in self.gen_degrees}

    def render_part(self, d, value):
        terms = []
        for w in sorted(value):
            mono = "*".join(w) if w else "1"
            terms.append((value[w], mono))
        return terms


def make_leavitt11():
    """The Leavitt algebra L(1,1): generators A, C in degree -1 and B, D in
    degree +1, subject to AB + CD = 1, BA = DC = 1, BC = DA = 0.

    Rewrite orientation: BA -> 1, DC -> 1, BC -> 0, DA -> 0, AB -> 1 - CD.
    Normal words are exactly those avoiding the five left-hand sides.
    """
    ring = RewritingRing(
        "leavitt11",
        {"A": -1, "C": -1, "B": 1, "D": 1},
        {
            "BA": ((1, ""),),
            "DC": ((1, ""),),
            "BC": (),
            "DA": (),
            "AB": ((1, ""), (-1, "CD")),
        },
    )
    return ring


class _LeavittRing(RewritingRing):
    def __init__(self):
        base = make_leavitt11()
        self.__dict__.update(base.__dict__)

    def stored_partition_pairs(self):
        a = self.word_element("A")
        b = self.word_element("B")
        c = self.word_element("C")
        d = self.word_element("D")
        # BA = 1 gives type (1,-1); AB + CD = 1 gives type (-1,1)
        return [(b, a)], [(a, b), (c, d)]


_RING_CACHE = {}


def get_ring(ident) -> GradedRing:
    """Ring registry: `laurent`, `laurent_step2`, `leavitt11`, `matrix_laurent:n`."""
    if isinstance(ident, GradedRing):
        return ident
    r = _RING_CACHE.get(ident)
    if r is not None:
        return r
    if ident == "laurent":
        r = LaurentRing()
    elif ident == "laurent_step2":
        r = LaurentStep2Ring()
    elif ident == "leavitt11":
        r = _LeavittRing()
    elif ident.startswith("matrix_laurent:"):
        try:
            n = int(ident.split(":", 1)[1])
        except ValueError:
            raise UnknownGenerator(f"bad ring identifier {ident!r}") from None
        r = MatrixLaurentRing(n)
    else:
        raise UnknownGenerator(f"unknown ring identifier {ident!r}")
    _RING_CACHE[ident] = r
    return r


def truncate(x: RingElement, lo=None, hi=None) -> RingElement:
    """Keep exactly the components with lo <= degree <= hi.

    None stands for the corresponding infinity, so truncate(x) == x.
    """
    parts = {
        d: v
        for d, v in x.parts.items()
        if (lo is None or d >= lo) and (hi is None or d <= hi)
    }
    return RingElement(x.ring, parts)


def tr0(x: RingElement) -> RingElement:
    """Constant-coefficient part: the ring map sending all positive-degree
    generators to zero, i.e. the degree-0 component."""
    return truncate(x, 0, 0)


def normal_form(ring, expr) -> RingElement:
    """Evaluate an expression (AST from `exprs` or source text) to canonical form.

    Idempotent by construction: elements are normalised at every arithmetic
    step, so re-evaluating a printed normal form reproduces it.
    """
    from .exprs import evaluate, parse_expr

    ring = get_ring(ring)
    if isinstance(expr, str):
        expr = parse_expr(expr)
    return evaluate(ring, expr)


def homogeneous_degree(x: RingElement):
    if x.is_zero():
        return None
    return x.degree()


def check_nonnegative(x: RingElement):
    """Raise DegreeOutOfRange if x has a component of negative degree."""
    lo = x.min_degree()
    if lo is not None and lo < 0:
        raise DegreeOutOfRange(f"element has a component in degree {lo} < 0")
    return x
