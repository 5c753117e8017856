"""Witt vectors of finite length over Laurent-series fields of odd characteristic.

The group law is evaluated through the universal addition polynomials,
computed once per (p, length) by ghost interpolation over Q with an
integrality assertion, then applied mod p.  The same table carries the
twist-difference polynomials: with z_i = x_i (1 + y_i),

    z - x = (T_0(x, y), ..., T_m(x, y))

which gives an oracle for dilation congruences that is independent of the
series-level Taylor expansion.

Also here: the weighted-valuation filtration (entry i of a length-(m+1)
vector carries weight p^(m-i)), the derivation-after-Frobenius map
witt_differential(a) = sum_i a_i^(p^(m-i)-1) a_i' (the coefficient of dt), reduction of a
vector modulo the image of F-1 by greedy leading-term stripping, and the
depth/leading-coefficient invariants read off a reduced vector.
"""

from __future__ import annotations

import json
import os
import threading

from .errors import (
    CapExceeded,
    LengthMismatch,
    NotReduced,
    PrecisionExhausted,
    TameInput,
    ZeroVector,
)
from .series import LaurentSeries

LENGTH_CAP = 3  # vectors of length m+1 <= 3 unless a caller raises the cap
CACHE_ENV = "RAMIFY_WITT_CACHE"
_REDUCE_ITER_CAP = 4000


# -- universal polynomial tables ------------------------------------------------


def _terms_from_expr(expr, xs, ys):
    import sympy

    poly = sympy.Poly(expr, *xs, *ys)
    terms = []
    for exps, c in poly.terms():
        c = sympy.Rational(c)
        if c.q != 1:
            raise AssertionError("non-integer coefficient in universal polynomial")
        ex = tuple(int(v) for v in exps[: len(xs)])
        ey = tuple(int(v) for v in exps[len(xs):])
        terms.append((int(c), ex, ey))
    return terms


def _build_tables(p: int, length: int):
    import sympy

    xs = list(sympy.symbols([f"X{i}" for i in range(length)]))
    ys = list(sympy.symbols([f"Y{i}" for i in range(length)]))

    sum_exprs, sum_terms = [], []
    for n in range(length):
        ghost = sum(
            p**i * (xs[i] ** (p ** (n - i)) + ys[i] ** (p ** (n - i)))
            for i in range(n + 1)
        )
        prior = sum(p**i * sum_exprs[i] ** (p ** (n - i)) for i in range(n))
        expr = sympy.expand((ghost - prior) / sympy.Integer(p) ** n)
        sum_exprs.append(expr)
        sum_terms.append(_terms_from_expr(expr, xs[: n + 1], ys[: n + 1]))

    twist_exprs, twist_terms = [], []
    for n in range(length):
        lhs = sum(
            p**i * (xs[i] * (1 + ys[i])) ** (p ** (n - i)) for i in range(n + 1)
        )
        known = sum(p**i * xs[i] ** (p ** (n - i)) for i in range(n + 1)) + sum(
            p**i * twist_exprs[i] ** (p ** (n - i)) for i in range(n)
        )
        expr = sympy.expand((lhs - known) / sympy.Integer(p) ** n)
        twist_exprs.append(expr)
        twist_terms.append(_terms_from_expr(expr, xs[: n + 1], ys[: n + 1]))

    _assert_weights(p, sum_terms, twist_terms)
    return sum_terms, twist_terms


def _assert_weights(p, sum_terms, twist_terms):
    for n, terms in enumerate(sum_terms):
        for _, ex, ey in terms:
            w = sum(e * p**i for i, e in enumerate(ex)) + sum(
                e * p**i for i, e in enumerate(ey)
            )
            assert w == p**n, "addition polynomial not homogeneous"
    for n, terms in enumerate(twist_terms):
        for _, ex, ey in terms:
            assert sum(e * p**i for i, e in enumerate(ex)) == p**n, (
                "twist-difference polynomial has wrong x-weight"
            )
            assert sum(ey) >= 1, "twist-difference polynomial misses the y-ideal"


_TABLE_CACHE: dict = {}
_TABLE_LOCK = threading.Lock()


class UniversalWittTable:
    """Addition and twist-difference polynomials for one (p, length)."""

    def __init__(self, p: int, length: int, sum_terms, twist_terms):
        self.p = p
        self.length = length
        self._sum = sum_terms
        self._twist = twist_terms

    @classmethod
    def get(cls, p: int, length: int) -> "UniversalWittTable":
        key = (p, length)
        with _TABLE_LOCK:
            hit = _TABLE_CACHE.get(key)
        if hit is not None:
            return hit
        table = cls._load_from_disk(p, length)
        if table is None:
            sum_terms, twist_terms = _build_tables(p, length)
            table = cls(p, length, sum_terms, twist_terms)
            table._store_to_disk()
        with _TABLE_LOCK:
            _TABLE_CACHE.setdefault(key, table)
            return _TABLE_CACHE[key]

    def sum_terms(self, i: int):
        return self._sum[i]

    def twist_terms(self, n: int):
        return self._twist[n]

    # disk cache is best-effort: absent or unwritable directories are ignored
    @staticmethod
    def _cache_path(p, length):
        root = os.environ.get(CACHE_ENV)
        if not root:
            return None
        return os.path.join(root, f"witt-p{p}-len{length}.json")

    @classmethod
    def _load_from_disk(cls, p, length):
        path = cls._cache_path(p, length)
        if path is None or not os.path.exists(path):
            return None
        try:
            with open(path) as fh:
                blob = json.load(fh)
            if blob.get("p") != p or blob.get("length") != length:
                return None
            unpack = lambda ts: [
                (int(c), tuple(ex), tuple(ey)) for c, ex, ey in ts
            ]
            sum_terms = [unpack(ts) for ts in blob["sum"]]
            twist_terms = [unpack(ts) for ts in blob["twist"]]
            _assert_weights(p, sum_terms, twist_terms)
            return cls(p, length, sum_terms, twist_terms)
        except (OSError, ValueError, KeyError, AssertionError):
            return None

    def _store_to_disk(self):
        path = self._cache_path(self.p, self.length)
        if path is None:
            return
        try:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            pack = lambda ts: [[c, list(ex), list(ey)] for c, ex, ey in ts]
            with open(path, "w") as fh:
                json.dump(
                    {
                        "p": self.p,
                        "length": self.length,
                        "sum": [pack(ts) for ts in self._sum],
                        "twist": [pack(ts) for ts in self._twist],
                    },
                    fh,
                )
        except OSError:
            pass

    def eval_sum(self, i: int, xs, ys) -> LaurentSeries:
        return _eval_terms(self._sum[i], xs, ys)

    def eval_twist(self, n: int, xs, ys) -> LaurentSeries:
        return _eval_terms(self._twist[n], xs, ys)


def _eval_terms(terms, xs, ys) -> LaurentSeries:
    ring = xs[0].ring
    pow_cache: dict = {}

    def cached_pow(tag, idx, s, e):
        key = (tag, idx, e)
        if key not in pow_cache:
            pow_cache[key] = s**e
        return pow_cache[key]

    acc = None
    for c, ex, ey in terms:
        cm = ring.from_int(c)
        if cm.is_zero():
            continue
        prod = None
        for idx, e in enumerate(ex):
            if e:
                f = cached_pow("x", idx, xs[idx], e)
                prod = f if prod is None else prod * f
        for idx, e in enumerate(ey):
            if e:
                f = cached_pow("y", idx, ys[idx], e)
                prod = f if prod is None else prod * f
        assert prod is not None, "constant monomial in universal polynomial"
        term = prod.scale(cm)
        acc = term if acc is None else acc + term
    if acc is None:
        prec = min(s.prec for s in list(xs) + list(ys))
        return LaurentSeries.zero(ring, prec)
    return acc


# -- Witt vectors ---------------------------------------------------------------


class WittVector:
    __slots__ = ("m", "entries")

    def __init__(self, m: int, entries):
        entries = tuple(entries)
        if m + 1 > LENGTH_CAP:
            raise CapExceeded(f"length {m + 1} exceeds cap {LENGTH_CAP}")
        if len(entries) != m + 1:
            raise LengthMismatch(f"need {m + 1} entries, got {len(entries)}")
        ring = entries[0].ring
        for e in entries:
            if e.ring is not ring:
                raise LengthMismatch("entries over different coefficient rings")
        self.m = m
        self.entries = entries

    @property
    def ring(self):
        return self.entries[0].ring

    @staticmethod
    def zero(ring, m: int, prec: int) -> "WittVector":
        return WittVector(m, [LaurentSeries.zero(ring, prec) for _ in range(m + 1)])

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.m == other.m and all(
            a == b for a, b in zip(self.entries, other.entries)
        )

    def __hash__(self):
        raise TypeError("WittVector equality is precision-relative; not hashable")

    def __repr__(self):
        return f"W({', '.join(repr(e) for e in self.entries)})"


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    if a.m != b.m:
        raise LengthMismatch(f"length {a.m + 1} vs {b.m + 1}")
    if a.ring is not b.ring:
        raise LengthMismatch("vectors over different coefficient rings")
    if a.m == 0:
        return WittVector(0, (a.entries[0] + b.entries[0],))
    table = UniversalWittTable.get(a.ring.p, a.m + 1)
    out = [
        table.eval_sum(i, a.entries[: i + 1], b.entries[: i + 1])
        for i in range(a.m + 1)
    ]
    return WittVector(a.m, out)


def witt_neg(a: WittVector) -> WittVector:
    # valid entry-wise because p is odd
    return WittVector(a.m, [-e for e in a.entries])


def witt_sub(a: WittVector, b: WittVector) -> WittVector:
    return witt_add(a, witt_neg(b))


def frobenius_series(s: LaurentSeries) -> LaurentSeries:
    """Exact p-th power of a series over a char-p field: t^e c -> t^(pe) c^p.

    Knowledge improves: (s + tail)^p = s^p + tail^p, so prec becomes p * prec.
    """
    p = s.ring.p
    if s.val is None:
        return LaurentSeries.zero(s.ring, p * s.prec)
    return LaurentSeries.from_terms(
        s.ring, {p * e: c.frobenius() for e, c in s.terms()}, p * s.prec
    )


def frobenius(a: WittVector) -> WittVector:
    return WittVector(a.m, [frobenius_series(e) for e in a.entries])


def verschiebung(a: WittVector) -> WittVector:
    prec = max(e.prec for e in a.entries)
    return WittVector(a.m + 1, (LaurentSeries.zero(a.ring, prec),) + a.entries)


def verschiebung_power(x: LaurentSeries, m: int) -> WittVector:
    """V^m applied to a length-1 vector: (0, ..., 0, x) of length m+1."""
    zeros = [LaurentSeries.zero(x.ring, x.prec) for _ in range(m)]
    return WittVector(m, zeros + [x])


# -- filtration ----------------------------------------------------------------


def _level_candidates(a: WittVector):
    """Per-entry weighted depth -p^(m-i) ord(a_i); None for zero entries."""
    p, m = a.ring.p, a.m
    cands = []
    for i, e in enumerate(a.entries):
        w = p ** (m - i)
        cands.append(None if e.val is None else -w * e.val)
    return cands


def fil_level(a: WittVector) -> int:
    """Smallest n with p^(m-i) ord(a_i) >= -n for all i, floored at 0."""
    p, m = a.ring.p, a.m
    cands = _level_candidates(a)
    live = [c for c in cands if c is not None]
    if not live:
        raise ZeroVector("filtration level of the zero vector")
    best = max(live)
    for i, c in enumerate(cands):
        if c is None:
            bound = -(p ** (m - i)) * a.entries[i].prec
            if bound > max(best, 0):
                raise PrecisionExhausted(
                    f"entry {i} is 0 mod t^{a.entries[i].prec}; level not certified"
                )
    return max(best, 0)


def in_fil(a: WittVector, n: int) -> bool:
    """Certified membership test: p^(m-i) ord(a_i) >= -n for all i."""
    p, m = a.ring.p, a.m
    for i, e in enumerate(a.entries):
        w = p ** (m - i)
        # p^(m-i) ord(a_i) >= -n  <=>  ord(a_i) >= ceil(-n / w)
        if not e.has_ord_at_least(_ceil_div(-n, w)):
            return False
    return True


def _ceil_div(x: int, y: int) -> int:
    return -((-x) // y)


def witt_differential(a: WittVector) -> LaurentSeries:
    """The coefficient of dt in sum_i a_i^(p^(m-i)-1) d a_i."""
    p, m = a.ring.p, a.m
    terms = []
    caps = []
    for i, e in enumerate(a.entries):
        j = m - i
        if e.val is None:
            caps.append(p**j * e.prec - 1)
            continue
        if j == 0:
            terms.append(e.derivative())
        else:
            terms.append(e ** (p**j - 1) * e.derivative())
    if not terms:
        prec = min(caps)
        return LaurentSeries.zero(a.ring, prec)
    acc = terms[0]
    for t in terms[1:]:
        acc = acc + t
    if caps:
        acc = acc.truncate(min(min(caps), acc.prec))
    return acc


# -- auxiliary universal polynomials --------------------------------------------


def twist_difference(n: int, xs, ys) -> LaurentSeries:
    """Value of the n-th twist-difference polynomial on series vectors."""
    if n + 1 > LENGTH_CAP:
        raise CapExceeded(f"index {n} beyond table cap {LENGTH_CAP - 1}")
    ring = xs[0].ring
    table = UniversalWittTable.get(ring.p, n + 1)
    return table.eval_twist(n, list(xs)[: n + 1], list(ys)[: n + 1])


def trunc_log(y: LaurentSeries) -> LaurentSeries:
    """sum_{i=1}^{p-1} (-1)^(i+1) y^i / i with 1/i taken in the coefficient ring."""
    ring = y.ring
    p = ring.p
    acc = None
    for i in range(1, p):
        c = ring.from_int(i).inverse()
        if i % 2 == 0:
            c = -c
        term = (y**i).scale(c)
        acc = term if acc is None else acc + term
    return acc


def dilate(a: WittVector, r: int, theta) -> WittVector:
    """Apply t -> t (1 + theta t^r) to every entry."""
    from .series import substitute_dilated

    return WittVector(
        a.m, [substitute_dilated(e, r, theta) for e in a.entries]
    )


def dilation_defect_sum(alpha: LaurentSeries, r: int, theta) -> LaurentSeries:
    """sum_{i=1}^{p-1} (t^i alpha^(i-1) / i!) (t^r theta)^i."""
    ring = alpha.ring
    p = ring.p
    acc = None
    fact = 1
    for i in range(1, p):
        fact *= i
        coef = ring.from_int(fact).inverse() * theta**i
        term = alpha.iterated_derivative(i - 1).shift(i).scale(coef).shift(r * i)
        acc = term if acc is None else acc + term
    return acc


# -- lifts and ghost components --------------------------------------------------


def lift_entries(a: WittVector, R):
    """Coefficient-wise representative lift of every entry into series over R."""
    from .series import map_coefficients

    return [map_coefficients(e, R.lift, R) for e in a.entries]


def ghost_components(lifted, R, p: int):
    """ghost_j = sum_{i<=j} p^i x_i^(p^(j-i)) over the lift ring R."""
    out = []
    for j in range(len(lifted)):
        acc = None
        for i in range(j + 1):
            term = (lifted[i] ** (p ** (j - i))).scale(R.from_int(p**i))
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


# -- reduction and conductors -----------------------------------------------------


def _offenders(a: WittVector):
    """Indices achieving the level whose depth is a positive multiple of p."""
    p = a.ring.p
    cands = _level_candidates(a)
    live = [c for c in cands if c is not None]
    if not live:
        return None, []
    level = max(live)
    if level <= 0:
        return level, []
    hits = []
    for i, c in enumerate(cands):
        if c != level:
            continue
        v = a.entries[i].val
        if v < 0 and v % p == 0:
            hits.append(i)
    return level, hits


def reduce_vector(a: WittVector):
    """Strip F(y) - y terms until the top filtration level is not removable.

    Returns (reduced, witness) with reduced = a - (F(witness) - witness),
    certified by re-adding in tests.  Largest offending index first; each
    step cancels the offending leading term exactly and only perturbs
    entries at larger indices, at or below the current level.
    """
    ring, m = a.ring, a.m
    p = ring.p
    witness = WittVector.zero(ring, m, max(e.prec for e in a.entries))
    cur = a
    for _ in range(_REDUCE_ITER_CAP):
        level, hits = _offenders(cur)
        if not hits:
            return cur, witness
        i = max(hits)
        e = cur.entries[i]
        mu = LaurentSeries.monomial(
            ring, e.leading_coefficient().pth_root(), e.val // p, e.prec
        )
        step = _supported_at(mu, i, m)
        asw = witt_sub(frobenius(step), step)
        cur = witt_sub(cur, asw)
        witness = witt_add(witness, step)
    raise AssertionError("reduction did not terminate within the iteration cap")


def _supported_at(x: LaurentSeries, i: int, m: int) -> WittVector:
    zero = lambda: LaurentSeries.zero(x.ring, x.prec)
    return WittVector(m, [zero() for _ in range(i)] + [x] + [zero() for _ in range(m - i)])


def swan_conductor(a: WittVector):
    """Reduce, then read off the minimal filtration level.

    Returns (sw, reduced, witness).
    """
    reduced, witness = reduce_vector(a)
    if reduced.is_zero():
        return 0, reduced, witness
    return fil_level(reduced), reduced, witness


def refined_swan(a: WittVector):
    """Depth and leading coefficient of the reduced vector's dt-class.

    For a reduced vector of level n >= 1 this is the coefficient of
    t^(-n) dlog(t) in -witt_differential(a), an element of the residue field, nonzero by
    minimality; (n, coefficient) is returned.
    """
    n = fil_level(a)
    if n == 0:
        raise TameInput("vector is integral; no wild invariant to extract")
    _, hits = _offenders(a)
    if hits:
        raise NotReduced(f"entries {hits} still carry removable leading terms")
    alpha = witt_differential(a)
    coeff = -alpha.coefficient(-n - 1)
    if coeff.is_zero():
        raise NotReduced("leading coefficient vanished; vector was not reduced")
    return n, coeff
