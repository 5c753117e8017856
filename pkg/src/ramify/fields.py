"""Finite fields F_q (q = p^f, p odd) and the truncated coefficient ring Z_q/p^(m+1).

Elements of F_q are stored as integer indices in [0, q): the index encodes the
coefficient vector (c_0, ..., c_{f-1}) of the element sum(c_i * x^i) in base p,
least significant digit = constant term.  Multiplication goes through a dense
discrete-log table (hence the default cap q <= 2^16); addition is digit-wise.

Everything is deterministic: the modulus is the first irreducible monic
polynomial in lexicographic coefficient order, the generator is the smallest
element (by index) of multiplicative order q - 1.
"""

from __future__ import annotations

from .errors import (
    CapExceeded,
    EvenCharacteristic,
    NotASquare,
    NotPrime,
    ZeroInput,
)

DEFAULT_Q_CAP = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# bare polynomial arithmetic over F_p (lists of ints, little-endian), used only
# while constructing a field
# ---------------------------------------------------------------------------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, h, p):
    # h monic
    a = list(a)
    dh = len(h) - 1
    while len(a) - 1 >= dh and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dh
            for i, hi in enumerate(h):
                a[shift + i] = (a[shift + i] - lead * hi) % p
        a.pop()
    return _poly_trim(a)


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # reduce a mod b (make b monic first)
        inv_lead = pow(b[-1], p - 2, p)
        bm = [(c * inv_lead) % p for c in b]
        a, b = b, _poly_mod(a, bm, p)
    return a


def _poly_powmod_x(e: int, h, p):
    """x^e mod h by square and multiply."""
    result = [1]
    base = _poly_mod([0, 1], h, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), h, p)
        base = _poly_mod(_poly_mul(base, base, p), h, p)
        e >>= 1
    return result


def _is_irreducible(h, p):
    """Rabin test for a monic polynomial h over F_p."""
    f = len(h) - 1
    if f == 1:
        return True
    xq = list(_poly_powmod_x(p**f, h, p)) + [0, 0]
    xq[1] = (xq[1] - 1) % p
    if _poly_trim(xq) != []:
        return False
    ell = 2
    ff = f
    checked = set()
    while ff > 1:
        while ff % ell:
            ell += 1
        if ell not in checked:
            checked.add(ell)
            xe = _poly_powmod_x(p ** (f // ell), h, p)
            diff = list(xe) + [0, 0]
            diff[1] = (diff[1] - 1) % p
            g = _poly_gcd(_poly_trim(diff), h, p)
            if len(g) - 1 > 0:
                return False
        ff //= ell
    return True


# ---------------------------------------------------------------------------
# F_q
# ---------------------------------------------------------------------------

class FqElement:
    """Element of a FiniteField; immutable wrapper around an index."""

    __slots__ = ("field", "idx")

    def __init__(self, field: "FiniteField", idx: int):
        self.field = field
        self.idx = idx

    def __add__(self, other):
        return FqElement(self.field, self.field.add_idx(self.idx, other.idx))

    def __sub__(self, other):
        f = self.field
        return FqElement(f, f.add_idx(self.idx, f.neg_table[other.idx]))

    def __neg__(self):
        return FqElement(self.field, self.field.neg_table[self.idx])

    def __mul__(self, other):
        f = self.field
        a, b = self.idx, other.idx
        if a == 0 or b == 0:
            return f.zero
        return FqElement(f, f.exp[(f.log[a] + f.log[b]) % (f.q - 1)])

    def __pow__(self, e: int):
        f = self.field
        if self.idx == 0:
            if e < 0:
                raise ZeroInput("0 has no negative power")
            return f.one if e == 0 else f.zero
        return FqElement(f, f.exp[(f.log[self.idx] * e) % (f.q - 1)])

    def inverse(self):
        f = self.field
        if self.idx == 0:
            raise ZeroInput("0 is not invertible")
        return FqElement(f, f.exp[(-f.log[self.idx]) % (f.q - 1)])

    def is_zero(self) -> bool:
        return self.idx == 0

    def is_unit(self) -> bool:
        return self.idx != 0

    def frobenius(self):
        """x -> x^p."""
        return self ** self.field.p

    def pth_root(self):
        """Unique y with y^p = x (k is perfect)."""
        return self ** (self.field.p ** (self.field.f - 1))

    def digits(self):
        return self.field.digit_table[self.idx]

    def __eq__(self, other):
        return (
            isinstance(other, FqElement)
            and other.field is self.field
            and other.idx == self.idx
        )

    def __hash__(self):
        return hash((id(self.field), self.idx))

    def __repr__(self):
        f = self.field
        if f.f == 1:
            return f"F{f.q}({self.idx})"
        return f"F{f.q}{list(self.digits())}"


class FiniteField:
    """F_q with q = p^f, p an odd prime, built deterministically."""

    def __init__(self, p: int, f: int, cap: int = DEFAULT_Q_CAP):
        if p == 2:
            raise EvenCharacteristic("characteristic 2 is out of scope (p > 2)")
        if not _is_prime(p):
            raise NotPrime(f"p = {p} is not prime")
        if f < 1:
            raise NotPrime(f"f = {f} must be >= 1")
        q = p**f
        if q > cap:
            raise CapExceeded(f"q = {q} exceeds the dlog-table cap {cap}")
        self.p = p
        self.f = f
        self.q = q

        self.modulus = self._find_modulus()  # monic, as little-endian list, len f+1
        self._pow_p = [p**i for i in range(f)]
        self.digit_table = [self._digits_of(i) for i in range(q)]
        self.neg_table = [self._encode(tuple((-c) % p for c in d)) for d in self.digit_table]

        self.exp, self.log, self.generator_idx = self._build_dlog()
        self.zero = FqElement(self, 0)
        self.one = FqElement(self, 1)
        self.generator = FqElement(self, self.generator_idx)
        # trace of multiplication by x^j, as an F_p scalar, for Tr_{F_q/F_p}
        self._trace_basis = self._basis_traces()

    # -- construction helpers -------------------------------------------

    def _find_modulus(self):
        p, f = self.p, self.f
        if f == 1:
            return [0, 1]
        # iterate the coefficient tuples (a_{f-1}, ..., a_0) in ascending
        # lexicographic order; the counter's least significant digit is a_0
        for code in range(p**f):
            low = []
            c = code
            for _ in range(f):
                low.append(c % p)
                c //= p
            h = low + [1]  # little-endian: a_0, ..., a_{f-1}, 1
            if _is_irreducible(h, p):
                return h
        raise AssertionError("no irreducible polynomial found (unreachable)")

    def _digits_of(self, idx: int):
        p = self.p
        out = []
        for _ in range(self.f):
            out.append(idx % p)
            idx //= p
        return tuple(out)

    def _encode(self, digits) -> int:
        return sum(c * w for c, w in zip(digits, self._pow_p))

    def _mul_raw(self, a_digits, b_digits):
        """Tuple-level multiplication mod the modulus — used only during setup."""
        p, f = self.p, self.f
        conv = [0] * (2 * f - 1)
        for i, ai in enumerate(a_digits):
            if ai:
                for j, bj in enumerate(b_digits):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        h = self.modulus
        for k in range(2 * f - 2, f - 1, -1):
            lead = conv[k]
            if lead:
                conv[k] = 0
                for i in range(f):
                    conv[k - f + i] = (conv[k - f + i] - lead * h[i]) % p
        return tuple(conv[:f])

    def _build_dlog(self):
        q = self.q
        for cand in range(2, q):
            d = self.digit_table[cand]
            exp = [1]
            cur = d
            idx = self._encode(cur)
            steps = 1
            while idx != 1 and steps <= q:
                exp.append(idx)
                cur = self._mul_raw(cur, d)
                idx = self._encode(cur)
                steps += 1
            if steps == q - 1:
                # cand has order q-1: exp holds g^0 .. g^{q-2}
                log = [0] * q
                for k, v in enumerate(exp):
                    log[v] = k
                return exp, log, cand
        raise AssertionError("no generator found (unreachable)")

    def _basis_traces(self):
        # Tr(x^j) = trace of the multiplication-by-x^j matrix over F_p;
        # column i of that matrix is x^{i+j} mod h
        f = self.f
        if f == 1:
            return [1]
        powers = [tuple(1 if k == 0 else 0 for k in range(f))]
        x = tuple(1 if k == 1 else 0 for k in range(f))
        for _ in range(2 * f - 2):
            powers.append(self._mul_raw(powers[-1], x))
        return [sum(powers[i + j][i] for i in range(f)) % self.p for j in range(f)]

    # -- element-level services ------------------------------------------

    def add_idx(self, a: int, b: int) -> int:
        da, db = self.digit_table[a], self.digit_table[b]
        p = self.p
        return sum(((x + y) % p) * w for x, y, w in zip(da, db, self._pow_p))

    def element(self, digits) -> FqElement:
        digits = tuple(int(c) % self.p for c in digits)
        if len(digits) != self.f:
            raise ZeroInput(f"need {self.f} coefficients, got {len(digits)}")
        return FqElement(self, self._encode(digits))

    def from_int(self, n: int) -> FqElement:
        return FqElement(self, n % self.p)

    def from_index(self, idx: int) -> FqElement:
        return FqElement(self, idx % self.q)

    def elements(self):
        for i in range(self.q):
            yield FqElement(self, i)

    def dlog(self, x: FqElement) -> int:
        if x.idx == 0:
            raise ZeroInput("dlog of 0")
        return self.log[x.idx]

    def is_square(self, x: FqElement) -> bool:
        if x.idx == 0:
            return True
        return self.log[x.idx] % 2 == 0

    def sqrt(self, x: FqElement) -> FqElement:
        if x.idx == 0:
            raise ZeroInput("sqrt(0) is excluded; test is_square first")
        k = self.log[x.idx]
        if k % 2:
            raise NotASquare(f"{x!r} is not a square")
        return FqElement(self, self.exp[k // 2])

    def kappa0(self, x: FqElement) -> int:
        """Quadratic residue character: +1 on squares, -1 otherwise (x != 0)."""
        if x.idx == 0:
            raise ZeroInput("kappa0(0)")
        return 1 if self.log[x.idx] % 2 == 0 else -1

    def trace_to_prime(self, x: FqElement) -> int:
        """Tr_{F_q/F_p}(x) as an integer in [0, p)."""
        d = self.digit_table[x.idx]
        return sum(c * t for c, t in zip(d, self._trace_basis)) % self.p

    def extension(self, s: int, cap: int = DEFAULT_Q_CAP):
        """Return (E, embed) with E = F_{q^s} and embed: F_q -> E a ring embedding."""
        if s == 1:
            return self, FieldEmbedding(self, self, None)
        E = make_field(self.p, self.f * s, cap=cap)
        root = _find_root(self.modulus, E)
        return E, FieldEmbedding(self, E, root)

    def __repr__(self):
        return f"FiniteField(p={self.p}, f={self.f})"


def _find_root(h, E: FiniteField) -> FqElement:
    """First root (by index) of the little-endian polynomial h in E."""
    coeffs = [E.from_int(c) for c in h]
    for idx in range(E.q):
        x = FqElement(E, idx)
        acc = E.zero
        xp = E.one
        for c in coeffs:
            acc = acc + c * xp
            xp = xp * x
        if acc.is_zero():
            return x
    raise AssertionError("modulus has no root in the extension (unreachable)")


class FieldEmbedding:
    """Ring embedding F_q -> F_{q^s} determined by a root of the source modulus."""

    def __init__(self, src: FiniteField, dst: FiniteField, root):
        self.src = src
        self.dst = dst
        self.root = root
        if src is dst:
            self._pows = None
        else:
            pows = [dst.one]
            for _ in range(src.f - 1):
                pows.append(pows[-1] * root)
            self._pows = pows

    def __call__(self, x: FqElement) -> FqElement:
        if self.src is self.dst:
            assert x.field is self.src
            return x
        assert x.field is self.src, "element not in the source field"
        acc = self.dst.zero
        for c, w in zip(x.digits(), self._pows):
            if c:
                acc = acc + self.dst.from_int(c) * w
        return acc


# ---------------------------------------------------------------------------
# Z_q / p^(m+1)
# ---------------------------------------------------------------------------

class WittCoeffElement:
    """Element of (Z/p^(m+1))[X]/(lifted modulus), stored as a coefficient tuple."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: "WittCoeffRing", coeffs):
        self.ring = ring
        self.coeffs = tuple(c % ring.modulus_int for c in coeffs)

    def __add__(self, other):
        m = self.ring.modulus_int
        return WittCoeffElement(
            self.ring, tuple((a + b) % m for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        m = self.ring.modulus_int
        return WittCoeffElement(
            self.ring, tuple((a - b) % m for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        m = self.ring.modulus_int
        return WittCoeffElement(self.ring, tuple((-a) % m for a in self.coeffs))

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc = self.ring.one
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_unit(self) -> bool:
        return not self.reduce().is_zero()

    def inverse(self):
        return self.ring.inverse(self)

    def reduce(self) -> FqElement:
        """Reduction mod p down to the residue field."""
        k = self.ring.field
        return k.element(tuple(c % k.p for c in self.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, WittCoeffElement)
            and other.ring is self.ring
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def __repr__(self):
        return f"W{self.ring.modulus_int}{list(self.coeffs)}"


class WittCoeffRing:
    """(Z/p^(m+1))[X] / (coefficient-wise lift of the field modulus)."""

    def __init__(self, field: FiniteField, m: int):
        self.field = field
        self.m = m
        self.modulus_int = field.p ** (m + 1)
        self.f = field.f
        # lifted modulus: same digit representatives, now read mod p^(m+1)
        self.lifted_modulus = list(field.modulus)
        self._reduction_rows = self._build_reduction()
        self.zero = WittCoeffElement(self, (0,) * self.f)
        self.one = WittCoeffElement(self, (1,) + (0,) * (self.f - 1))
        self._trace_basis = self._basis_traces()

    def _build_reduction(self):
        # rows[j] = coefficient vector of X^(f+j) mod lifted modulus, j in [0, f-1)
        f, M = self.f, self.modulus_int
        h = self.lifted_modulus
        rows = []
        cur = [(-h[i]) % M for i in range(f)]  # X^f
        rows.append(tuple(cur))
        for _ in range(f - 2):
            nxt = [0] + cur[:-1]
            lead = cur[-1]
            if lead:
                for i in range(f):
                    nxt[i] = (nxt[i] - lead * h[i]) % M
            cur = nxt
            rows.append(tuple(cur))
        return rows

    def mul(self, a: WittCoeffElement, b: WittCoeffElement) -> WittCoeffElement:
        f, M = self.f, self.modulus_int
        conv = [0] * (2 * f - 1)
        for i, ai in enumerate(a.coeffs):
            if ai:
                for j, bj in enumerate(b.coeffs):
                    conv[i + j] += ai * bj
        out = conv[:f]
        for j in range(f - 1):
            c = conv[f + j]
            if c:
                row = self._reduction_rows[j]
                for i in range(f):
                    out[i] += c * row[i]
        return WittCoeffElement(self, tuple(c % M for c in out))

    def inverse(self, a: WittCoeffElement) -> WittCoeffElement:
        red = a.reduce()
        if red.is_zero():
            raise ZeroInput("not a unit in the Witt coefficient ring")
        b = self.lift(red.inverse())
        # Hensel: quadratic convergence, m+1 <= 3 needs at most 2 corrections
        for _ in range(4):
            err = a * b - self.one
            if err.is_zero():
                return b
            b = b * (self.one + self.one - a * b)
        raise AssertionError("Hensel inversion failed to converge (unreachable)")

    def lift(self, x: FqElement) -> WittCoeffElement:
        """Coefficient-wise representative lift in [0, p^(m+1))."""
        assert x.field is self.field
        return WittCoeffElement(self, x.digits())

    def from_int(self, n: int) -> WittCoeffElement:
        return WittCoeffElement(self, (n % self.modulus_int,) + (0,) * (self.f - 1))

    def _basis_traces(self):
        f, M = self.f, self.modulus_int
        traces = []
        for j in range(f):
            xj = WittCoeffElement(self, tuple(1 if i == j else 0 for i in range(f)))
            t = 0
            for i in range(f):
                xi = WittCoeffElement(self, tuple(1 if k == i else 0 for k in range(f)))
                col = self.mul(xj, xi)
                t = (t + col.coeffs[i]) % M
            traces.append(t)
        return traces

    def trace(self, a: WittCoeffElement) -> int:
        """Matrix trace of multiplication-by-a, an integer mod p^(m+1)."""
        return sum(c * t for c, t in zip(a.coeffs, self._trace_basis)) % self.modulus_int

    @staticmethod
    def for_field(field: FiniteField, m: int) -> "WittCoeffRing":
        """Memoized constructor (reduction rows + trace basis are reused)."""
        cache = field.__dict__.setdefault("_witt_coeff_rings", {})
        if m not in cache:
            cache[m] = WittCoeffRing(field, m)
        return cache[m]

    def __repr__(self):
        return f"WittCoeffRing(q={self.field.q}, m={self.m})"


# simple memo so repeated (p, f) lookups share tables
_FIELD_CACHE: dict = {}


def make_field(p: int, f: int, cap: int = DEFAULT_Q_CAP) -> FiniteField:
    key = (p, f, cap)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(p, f, cap=cap)
    return _FIELD_CACHE[key]
