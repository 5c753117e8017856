"""Rank-1 characters of K = k((t)) with k finite of odd characteristic.

A quasi-character chi: K^x -> Q(zeta_N)^x is stored in three independent
pieces:

  * ``tame_exponent`` e in Z/(q-1): the restriction to the Teichmueller units,
    u |-> zeta_{q-1}^(e * log_g(u0)) where u0 is the leading coefficient of u
    and g the fixed generator of k^x;
  * ``uniformizer_value`` s: the (free, never inferred) value chi(t) of the
    unramified-twist part;
  * ``wild``: a length-(m+1) Witt vector a over k classifying the restriction
    to 1-units via the residue pairing below.

Sign conventions, fixed once and used everywhere downstream:

  * psi_0(x) = zeta_p^x and psi_m(x) = zeta_{p^(m+1)}^x, so that
    psi_m(p^m * x) = psi_0(x) on the nose;
  * the wild part evaluates as psi_m^{-1}([a, u)) where
    [z, u) = -Tr(res(w_m(z) * dlog(u~))) -- the minus sign matches the
    normalization in which uniformizers act as geometric Frobenius;
  * w_m(z) = sum_j p^j * (z_j~)^(p^(m-j)) for any coefficient-wise lift z~ of
    the entries into the length-(m+1) Witt coefficient ring.  The value mod
    p^(m+1) does not depend on the lift.
"""

from .cyclo import CycloNumber, root_of_unity, session_level
from .errors import LengthMismatch, ZeroArgument, ZeroInput
from .fields import WittCoeffRing
from .series import LaurentSeries, map_coefficients, residue
from .witt import WittVector, fil_level, lift_entries, reduce_vector


# -- residue pairing ---------------------------------------------------------

def pairing_series(z: WittVector, entry_lifts=None):
    """(R, w) with [z, u) = -Tr_R(res(w * dlog(u~))) for every unit u.

    R is the Witt coefficient ring of length z.m + 1 and w the top ghost
    component of a coefficient-wise lift of z.  Computing w once and sweeping
    u is the cheap way to evaluate the pairing against many units.
    """
    field = z.ring
    R = WittCoeffRing.for_field(field, z.m)
    p = field.p
    lifted = entry_lifts if entry_lifts is not None else lift_entries(z, R)
    if len(lifted) != z.m + 1:
        raise LengthMismatch(f"expected {z.m + 1} entry lifts, got {len(lifted)}")
    w = None
    for j, zj in enumerate(lifted):
        term = (zj ** (p ** (z.m - j))).scale(R.from_int(p ** j))
        w = term if w is None else w + term
    return R, w


def witt_pairing(z: WittVector, u: LaurentSeries, m: int | None = None,
                 entry_lifts=None, unit_lift=None) -> int:
    """[z, u) in Z/p^(m+1): the residue pairing of a Witt vector with a unit.

    ``u`` is a nonzero Laurent series over the same field as the entries of
    ``z`` (valuation is allowed: t itself pairs to -Tr of the constant term
    of w_m(z)).  Optional ``entry_lifts`` / ``unit_lift`` replace the default
    coefficient-wise lifts; any choice gives the same answer mod p^(m+1),
    which the test suite checks by perturbing them.
    """
    if m is not None and m != z.m:
        raise LengthMismatch(f"pairing level {m} != Witt length {z.m + 1} - 1")
    if u.ring is not z.ring:
        raise LengthMismatch("unit and Witt vector live over different fields")
    if u.is_zero():
        raise ZeroArgument("cannot pair against the zero series")
    R, w = pairing_series(z, entry_lifts=entry_lifts)
    uu = unit_lift if unit_lift is not None else map_coefficients(u, R.lift, R)
    r = residue(w * uu.dlog())
    return (-R.trace(r)) % R.modulus_int


# -- multiplicative characters ------------------------------------------------

class QuasiCharacter:
    """chi = (unramified twist) * (tame part) * (wild part), see module doc."""

    __slots__ = ("field", "tame_exponent", "uniformizer_value", "wild", "_reduced")

    def __init__(self, field, tame_exponent: int, uniformizer_value: CycloNumber,
                 wild: WittVector | None = None):
        if uniformizer_value.is_zero():
            raise ZeroInput("chi(t) must be nonzero")
        if wild is not None and wild.ring is not field:
            raise LengthMismatch("wild part lives over a different residue field")
        self.field = field
        self.tame_exponent = tame_exponent % (field.q - 1)
        self.uniformizer_value = uniformizer_value
        self.wild = wild
        self._reduced = None

    @property
    def m(self) -> int:
        return self.wild.m if self.wild is not None else 0

    def level(self) -> int:
        return session_level(self.field.p, self.field.q, self.m)

    def has_wild_part(self) -> bool:
        return self.wild is not None and not self.wild.is_zero()

    def reduced_wild(self):
        """(reduced vector, witness) for the wild part, memoized."""
        if self.wild is None:
            raise ZeroInput("character has no wild part")
        if self._reduced is None:
            self._reduced = reduce_vector(self.wild)
        return self._reduced

    def __repr__(self):
        return (f"QuasiCharacter(q={self.field.q}, e={self.tame_exponent}, "
                f"wild={'yes' if self.has_wild_part() else 'no'})")


def char_eval_exponents(chi: QuasiCharacter, u: LaurentSeries):
    """(v, d, w): chi(u) = chi(t)^v * zeta_{q-1}^d * zeta_{p^(m+1)}^w.

    Integer-only form of ``char_eval``; the epsilon-factor sweeps histogram
    over (d, w) instead of accumulating cyclotomic numbers term by term.
    """
    if u.is_zero():
        raise ZeroArgument("character of the zero series")
    field = chi.field
    v = u.valuation()
    d = (chi.tame_exponent * field.dlog(u.leading_coefficient())) % (field.q - 1)
    w = 0
    if chi.has_wild_part():
        w = (-witt_pairing(chi.wild, u)) % (field.p ** (chi.m + 1))
    return v, d, w


def char_eval(chi: QuasiCharacter, u: LaurentSeries) -> CycloNumber:
    """chi(u) as an exact cyclotomic number."""
    v, d, w = char_eval_exponents(chi, u)
    value = chi.uniformizer_value ** v
    if d:
        value = value * root_of_unity(chi.field.q - 1, d)
    if w:
        value = value * root_of_unity(chi.field.p ** (chi.m + 1), w)
    return value


def conductor(chi: QuasiCharacter):
    """(a(chi), sw(chi)) from the filtration level of the reduced wild part.

    sw = fil level of reduce(wild) (0 if the class is integral); then
    a = sw + 1 when sw >= 1, else 1 for tame-ramified, else 0.
    """
    sw = 0
    if chi.has_wild_part():
        red, _ = chi.reduced_wild()
        if not red.is_zero():
            sw = fil_level(red)
    if sw >= 1:
        a = sw + 1
    elif chi.tame_exponent != 0:
        a = 1
    else:
        a = 0
    return a, sw


# -- tame symbols --------------------------------------------------------------

def hilbert_symbol(x: LaurentSeries, y: LaurentSeries) -> int:
    """Quadratic Hilbert symbol (x, y) in {+1, -1} for nonzero x, y.

    (x, y) = kappa0((-1)^(v(x)v(y)) * x0^(v(y)) * y0^(-v(x))) where x0, y0 are
    leading coefficients and kappa0 the quadratic residue character of k^x.
    """
    if x.is_zero() or y.is_zero():
        raise ZeroArgument("Hilbert symbol needs nonzero arguments")
    field = x.ring
    vx, vy = x.valuation(), y.valuation()
    unit = x.leading_coefficient() ** vy * y.leading_coefficient() ** (-vx)
    if (vx * vy) % 2:
        unit = -unit
    return field.kappa0(unit)


def kummer_char(f: LaurentSeries) -> QuasiCharacter:
    """The order <= 2 character u |-> (f, u) attached to a square class.

    Encoded without a wild part: tame exponent (q-1)/2 * (v(f) mod 2) and
    chi(t) = kappa0((-1)^(v(f)) * leading(f)).
    """
    if f.is_zero():
        raise ZeroInput("square class of the zero series")
    field = f.ring
    vf = f.valuation()
    lead = f.leading_coefficient()
    e = ((field.q - 1) // 2) * (vf % 2)
    sgn = field.kappa0(-lead if vf % 2 else lead)
    s = CycloNumber.from_rational(2, sgn)
    return QuasiCharacter(field, e, s, wild=None)


# -- additive characters -------------------------------------------------------

class AdditiveCharacter:
    """psi_omega(x) = psi_k(res(x * omega)) for a nonzero 1-form omega = g dt.

    ``ord`` is the conductor exponent ord(omega) = ord(g); the gauge is
    beta = t*g, the unit-scale at which psi restricted to m^(-ord-1)/m^(-ord)
    becomes psi_k of the residue class.
    """

    __slots__ = ("omega",)

    def __init__(self, omega: LaurentSeries):
        if omega.is_zero():
            raise ZeroInput("omega must be a nonzero 1-form")
        self.omega = omega

    @property
    def field(self):
        return self.omega.ring

    @property
    def ord(self) -> int:
        return self.omega.valuation()

    def __repr__(self):
        return f"AdditiveCharacter(ord={self.ord}, q={self.field.q})"


def gauge(psi: AdditiveCharacter) -> LaurentSeries:
    """beta with omega = beta * dlog(t); the class of beta mod 1-units is
    what the epsilon-factor formulas consume."""
    return psi.omega.shift(1)


def psi_eval_exponent(psi: AdditiveCharacter, x: LaurentSeries) -> int:
    """Tr_{k/F_p}(res(x * omega)) in Z/p."""
    return psi.field.trace_to_prime(residue(x * psi.omega))


def psi_eval(psi: AdditiveCharacter, x: LaurentSeries) -> CycloNumber:
    """psi_omega(x) = zeta_p^(Tr res(x omega)); exact value in Q(zeta_p)."""
    return root_of_unity(psi.field.p, psi_eval_exponent(psi, x))
