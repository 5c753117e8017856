"""Stationary-phase data for wild rank-1 characters: admissible triples,
their discriminant, local Fourier transform descriptors, dilation
congruences, vanishing-cycle supports, and the determinant identity that
ties the direct image of a character to its local epsilon factor.

An *admissible triple* (a, b, c) consists of a Witt vector a over k((t))
(the wild layer of a character, written additively), a nonzero series b
(the pullback of the base coordinate along a map to the base trait), and a
nonzero series c (a stationary scale).  Write alpha for the form
coefficient of a (so F^m d a = alpha dt), n = -ord(t alpha), and
nu(s) = ord(t s'/s).  The triple must satisfy

  1. a lies in the depth-n filtration step (n is then exactly its depth),
  2. 2 ord(alpha + c b') >= -n + nu(c)   (c is stationary to half depth),
  3. 2 nu(b) + p nu(c) < (p - 2) n        (room for the quadratic term).

These force n >= 1, ord(t b' c) = -n and n - nu(c) >= 1; the tuple
(n, nu(b), nu(c)) is the conductor of the triple.  The discriminant
gamma(a, b, c) is the residue-field unit

  gamma = (1/2) * (t^(n+1) alpha) * (t^(1-nu(c)) c'/c)  mod t,

the leading coefficient of the quadratic term of the phase.  Everything
downstream of gamma -- parity of n - nu(c), square classes, the rank and
target of the local Fourier transform, the determinant identity -- is
computed from the conductor and gamma by exact arithmetic.

Dilation congruences (`congruence_check`) certify the effect of the
substitution t -> t (1 + theta t^r) on a and on the combined phase
a + V^m(c b); the claims are checked entirely inside W(F_{q^s}((t))) for a
splitting field large enough that polynomial identities of the relevant
degree cannot vanish accidentally at the sampled theta.
"""

import random
from dataclasses import dataclass, field as _dcfield
from fractions import Fraction

from .characters import (
    AdditiveCharacter,
    QuasiCharacter,
    char_eval,
    conductor,
    hilbert_symbol,
    kummer_char,
    psi_eval,
)
from .cyclo import CycloNumber
from .epsilon import (
    DEFAULT_COSET_CAP,
    TotallyRamifiedExt,
    epsilon0_wild,
    epsilon_tate_oracle,
    induced_swan,
    lambda_factor,
    quad_gauss,
    quad_gauss_power,
)
from .errors import (
    CapExceeded,
    DegenerateOrder,
    HypothesisViolated,
    InconsistentInput,
    InseparableB,
    NotLegendre,
    PrecisionExhausted,
    SlopeConditionViolated,
    VerificationFailure,
    WrongSourcePoint,
    ZeroInput,
)
from .series import LaurentSeries, promote, substitute_dilated
from .witt import (
    WittVector,
    dilate,
    dilation_defect_sum,
    fil_level,
    in_fil,
    reduce_vector,
    verschiebung_power,
    witt_add,
    witt_differential,
    witt_sub,
)

ORIGIN = "0"
INFINITY = "infinity"


def _ceil_div(x: int, y: int) -> int:
    return -((-x) // y)


def _nu(s: LaurentSeries) -> int:
    """nu(s) = ord(t s'/s) for nonzero separable s; always >= 0."""
    ds = s.derivative()
    if ds.is_zero():
        raise PrecisionExhausted(
            f"derivative is 0 mod t^{ds.prec}; nu cannot be certified"
        )
    return 1 + ds.valuation() - s.valuation()


# -- admissibility -----------------------------------------------------------------


def check_legendre(a: WittVector, b: LaurentSeries, c: LaurentSeries):
    """Non-raising admissibility test for the triple (a, b, c).

    Returns (ok, conductor, diagnostics): conductor is (n, nu(b), nu(c)) when
    ok and None otherwise; diagnostics records the first violated condition,
    the partial invariants that were computable, and the parity of
    n - nu(c).  Only genuine precision starvation raises
    (PrecisionExhausted); every structural failure is reported in-band.
    """
    diag = {
        "first_violation": None,
        "n": None,
        "nu_b": None,
        "nu_c": None,
        "n_minus_nu_c": None,
        "parity_even": None,
        "ord_t_bprime_c": None,
    }

    def fail(reason):
        diag["first_violation"] = reason
        return False, None, diag

    if a.is_zero():
        return fail("wild layer is zero: no depth to anchor the triple")
    alpha = witt_differential(a)
    if alpha.is_zero():
        return fail("form coefficient of the wild layer vanishes")
    n = -(alpha.valuation() + 1)
    diag["n"] = n
    if n < 1:
        return fail(f"depth n = {n} is not positive (tame wild layer)")
    if b.is_zero():
        return fail("b is zero to precision")
    db = b.derivative()
    if db.is_zero():
        return fail("b is inseparable: db/dt = 0 to precision")
    nu_b = 1 + db.valuation() - b.valuation()
    diag["nu_b"] = nu_b
    if c.is_zero():
        return fail("c is zero to precision")
    dc = c.derivative()
    if dc.is_zero():
        return fail("c is inseparable: dc/dt = 0 to precision")
    nu_c = 1 + dc.valuation() - c.valuation()
    diag["nu_c"] = nu_c
    diag["n_minus_nu_c"] = n - nu_c
    diag["parity_even"] = (n - nu_c) % 2 == 0
    diag["ord_t_bprime_c"] = 1 + db.valuation() + c.valuation()
    if not in_fil(a, n):
        return fail(
            f"wild layer exceeds its form depth: a is not inside level {n}"
        )
    defect = alpha + c * db
    if not defect.has_ord_at_least(_ceil_div(-n + nu_c, 2)):
        return fail(
            "c is not stationary: 2 ord(alpha + c b') >= -n + nu(c) fails"
        )
    p = b.ring.p
    if not 2 * nu_b + p * nu_c < (p - 2) * n:
        return fail(
            f"no room for the quadratic term: 2*{nu_b} + {p}*{nu_c} "
            f">= ({p}-2)*{n}"
        )
    # consequences of the three conditions; failure here is a library bug
    assert diag["ord_t_bprime_c"] == -n
    assert n - nu_c >= 1
    return True, (n, nu_b, nu_c), diag


@dataclass(frozen=True, eq=False)
class LegendreTriple:
    """An admissible triple; the constructor validates and derives the
    conductor, raising NotLegendre with the first violated condition."""

    a: WittVector
    b: LaurentSeries
    c: LaurentSeries
    n: int = _dcfield(init=False)
    nu_b: int = _dcfield(init=False)
    nu_c: int = _dcfield(init=False)

    def __post_init__(self):
        ok, cond, diag = check_legendre(self.a, self.b, self.c)
        if not ok:
            raise NotLegendre(diag["first_violation"])
        object.__setattr__(self, "n", cond[0])
        object.__setattr__(self, "nu_b", cond[1])
        object.__setattr__(self, "nu_c", cond[2])

    @property
    def field(self):
        return self.b.ring

    @property
    def conductor(self):
        return (self.n, self.nu_b, self.nu_c)

    @property
    def parity_even(self) -> bool:
        """Parity of n - nu(c): True selects the even (Hilbert-symbol)
        branch of the square-class normalization."""
        return (self.n - self.nu_c) % 2 == 0

    def base_change_quadratic(self) -> "LegendreTriple":
        """The image of the triple under t -> t^2; every conductor entry
        doubles, turning an odd-parity triple into an even one."""
        a2 = WittVector(
            self.a.m, [quadratic_substitute(e) for e in self.a.entries]
        )
        return LegendreTriple(
            a2, quadratic_substitute(self.b), quadratic_substitute(self.c)
        )

    def __repr__(self):
        return (
            f"LegendreTriple(n={self.n}, nu_b={self.nu_b}, "
            f"nu_c={self.nu_c}, q={self.field.q}, m={self.a.m})"
        )


def quadratic_substitute(s: LaurentSeries) -> LaurentSeries:
    """s(t^2): every exponent doubles and the window doubles with it."""
    if s.val is None:
        return LaurentSeries.zero(s.ring, 2 * s.prec)
    return LaurentSeries.from_terms(
        s.ring, {2 * e: coef for e, coef in s.terms()}, 2 * s.prec
    )


def stationary_c(a: WittVector, b: LaurentSeries,
                 window: int | None = None) -> LaurentSeries:
    """The stationary scale c = -alpha / b', truncated to the shortest
    window that still certifies 2 ord(alpha + c b') >= -n + nu(c).

    The truncation pins the coset c (1 + m^*) that every downstream value
    depends on while keeping the reported precision honest.  Raises
    InseparableB when db/dt = 0 and PrecisionExhausted when the working
    window cannot reach the certification depth.
    """
    if a.is_zero():
        raise ZeroInput("wild layer is zero: no stationary scale")
    alpha = witt_differential(a)
    if alpha.is_zero():
        raise PrecisionExhausted(
            f"form coefficient is 0 mod t^{alpha.prec}; cannot normalize c"
        )
    if b.is_zero():
        raise ZeroInput("b is zero to precision")
    db = b.derivative()
    if db.is_zero():
        raise InseparableB("db/dt = 0: no stationary scale exists over b")
    n = -(alpha.valuation() + 1)
    c_full = -(alpha * db.inverse())
    dc = c_full.derivative()
    if dc.is_zero():
        raise PrecisionExhausted(
            f"dc/dt is 0 mod t^{dc.prec}; nu(c) cannot be certified"
        )
    nu_c = 1 + dc.valuation() - c_full.valuation()
    if window is None:
        window = max(_ceil_div(n + nu_c, 2) + 1, nu_c + 2, 2)
    if c_full.prec - c_full.valuation() < window:
        raise PrecisionExhausted(
            f"stationary scale needs a window of {window} coefficients, "
            f"only {c_full.prec - c_full.valuation()} are certified"
        )
    return c_full.truncate(c_full.valuation() + window)


# -- discriminant and square classes -------------------------------------------------


def gamma(triple: LegendreTriple):
    """The discriminant of the triple: the residue-field unit

        gamma = (1/2) (t^(n+1) alpha) (t^(1-nu(c)) c'/c)  mod t.

    Both parenthesized series are units of exact order zero, so gamma is
    the product of their leading coefficients (times 1/2) and never
    vanishes."""
    alpha = witt_differential(triple.a)
    k = triple.field
    half = k.from_int(2).inverse()
    lead_dlog = (
        triple.c.derivative().leading_coefficient()
        * triple.c.leading_coefficient().inverse()
    )
    return half * alpha.leading_coefficient() * lead_dlog


@dataclass(frozen=True)
class SquareClassReport:
    """Outcome of the parity-matched square-class normalization."""

    parity_even: bool
    argument_valuation: int
    leading_is_square: bool

    @property
    def ok(self) -> bool:
        return self.argument_valuation % 2 == 0 and self.leading_is_square


def square_class_checks(triple: LegendreTriple) -> SquareClassReport:
    """Check the square-class normalization matched to the parity of
    n - nu(c): for even parity -c' / (2 b' gamma) is a square in k((t)),
    for odd parity -t c' / (2 b' gamma) is.  A series is a square iff its
    valuation is even and its leading coefficient is a square in k (1-units
    are squares since p is odd)."""
    g = gamma(triple)
    k = triple.field
    scale = -(k.from_int(2) * g).inverse()
    arg = (triple.c.derivative() * triple.b.derivative().inverse()).scale(scale)
    if not triple.parity_even:
        arg = arg.shift(1)
    return SquareClassReport(
        parity_even=triple.parity_even,
        argument_valuation=arg.valuation(),
        leading_is_square=k.is_square(arg.leading_coefficient()),
    )


# -- local Fourier transform descriptor ----------------------------------------------


@dataclass(frozen=True, eq=False)
class LFTDescriptor:
    """Shape of the local Fourier transform of the direct image of a
    rank-1 character along the covering presented by b.

    ``degree`` is the generic rank of the transform, equal to |ord(c)|;
    ``pushed`` is the rank-1 character datum living on the source trait
    after the transform: the original character twisted by the additive
    layer of b*c, the Kummer class of -c'/(2b'), and the constant unramified
    twist whose Frobenius value is ``gauss_twist`` (minus the quadratic
    Gauss sum)."""

    source: str
    target: str
    degree: int
    swan: int
    rank: int
    pushed: QuasiCharacter
    gauss_twist: CycloNumber


def lft_descriptor(chi: QuasiCharacter, b: LaurentSeries, c: LaurentSeries,
                   source: str = ORIGIN) -> LFTDescriptor:
    """Descriptor of the local Fourier transform of the direct image of
    the character chi along the covering presented by b, using the
    stationary scale c.

    ``source`` names the point of the source line the covering is centered
    at: "0" (ord(b) >= 1) or "infinity" (ord(b) <= -1).  The target and
    degree follow from the comparison of the Swan conductor of the direct
    image with its generic rank; for source "infinity" equal slope-1
    contributions are rejected with SlopeConditionViolated since the
    transform drops them."""
    field = chi.field
    if field is not b.ring or field is not c.ring:
        raise InconsistentInput(
            "character and series live over different residue fields; "
            "base-change everything to one field before transforming"
        )
    if not chi.has_wild_part():
        raise NotLegendre("character has no wild layer")
    if source == ORIGIN:
        if b.is_zero() or b.valuation() < 1:
            raise WrongSourcePoint(
                f"source '0' needs ord(b) >= 1, got {b.valuation()}"
            )
        ext = TotallyRamifiedExt(b)
    elif source == INFINITY:
        if b.is_zero() or b.valuation() > -1:
            raise WrongSourcePoint(
                f"source 'infinity' needs ord(b) <= -1, got {b.valuation()}"
            )
        ext = TotallyRamifiedExt(b.inverse())
    else:
        raise InconsistentInput(f"unknown source point {source!r}")
    rank = ext.degree
    swan = induced_swan(ext, chi)
    if source == INFINITY and swan == rank:
        # the slope-1 part is killed by the transform before any triple
        # can witness it: its stationary scale degenerates to a constant
        raise SlopeConditionViolated(
            "direct image at infinity has Swan = rank; slope-1 parts "
            "are dropped by the transform and carry no descriptor"
        )
    triple = LegendreTriple(chi.wild, b, c)
    _, sw_chi = conductor(chi)
    assert sw_chi == triple.n
    degree = abs(c.valuation())
    if source == ORIGIN:
        target = INFINITY
        expected = swan + rank
    else:
        if swan > rank:
            target = INFINITY
            expected = swan - rank
        else:
            target = ORIGIN
            expected = rank - swan
    if degree != expected:
        raise VerificationFailure(
            "transform degree disagrees between its two derivations",
            detail={"from_c": degree, "from_conductors": expected},
        )
    # assemble the twist at the full-window stationary representative of
    # the coset of c; the descriptor only depends on the coset
    db = b.derivative()
    c_eval = -(witt_differential(chi.wild) * db.inverse())
    assert (c_eval - c).has_ord_at_least(
        c.valuation() + triple.n - (triple.n + 1) // 2 + 1
    ), "c is outside the stationary coset"
    kummer = kummer_char(
        c_eval.derivative() * db.inverse().scale(-field.from_int(2).inverse())
    )
    gauss_twist = -quad_gauss(field)
    wild = witt_add(chi.wild, verschiebung_power(b * c_eval, chi.m))
    pushed = QuasiCharacter(
        field,
        (chi.tame_exponent + kummer.tame_exponent) % (field.q - 1),
        chi.uniformizer_value * kummer.uniformizer_value * gauss_twist,
        wild,
    )
    return LFTDescriptor(
        source=source,
        target=target,
        degree=degree,
        swan=swan,
        rank=rank,
        pushed=pushed,
        gauss_twist=gauss_twist,
    )


# -- dilation congruences -------------------------------------------------------------


@dataclass(frozen=True)
class CongruenceReport:
    """Result of sampling one dilation congruence over a splitting field."""

    which: str
    n: int
    r: int
    nu_b: int | None
    nu_c: int | None
    membership_level: int
    refinement_level: int
    splitting_degree: int
    samples: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


def _splitting_degree(q: int, bound: int) -> int:
    s = 1
    while q ** s <= bound:
        s += 1
    return s


def _promote_witt(a: WittVector, emb, ring) -> WittVector:
    return WittVector(a.m, [promote(e, emb, ring) for e in a.entries])


def congruence_check(which: str, a: WittVector,
                     b: LaurentSeries | None = None,
                     c: LaurentSeries | None = None, *,
                     r: int, theta_samples: int = 20, seed: int = 0,
                     splitting_degree: int | None = None) -> CongruenceReport:
    """Certify one of three congruences for the dilation
    u: t -> t (1 + theta t^r), sampling theta over a splitting field
    F_{q^s} with q^s > 4 (p r + n).

    which = "key1": for a of depth n, u(a) - a lies in the level n - r
    step and agrees modulo level n - p r with

        V^m( sum_{i=1}^{p-1} (t^i alpha^{(i-1)} / i!) (t^r theta)^i ).

    which = "key6": under alpha + c b' = 0 and nu(b) + nu(c) < (p-2) r, the
    combined difference D = u(a) - a + V^m(c (u(b) - b)) lies in the level
    n - nu(c) - 2r step and agrees one level deeper with

        V^m( (1/2) t alpha (t c'/c) (t^r theta)^2 ).

    which = "key7": same conclusions as "key6" under the relaxed hypotheses
    ord(t alpha) = -n exactly and ord(alpha + c b') >= -n + nu(c) + r.

    Violated hypotheses raise HypothesisViolated; windows too short to
    certify a membership raise PrecisionExhausted.  Sampled failures of the
    congruence itself are returned in the report, not raised."""
    if which not in ("key1", "key6", "key7"):
        raise InconsistentInput(f"unknown congruence id {which!r}")
    if r < 1:
        raise InconsistentInput(f"dilation order r must be >= 1, got {r}")
    if a.is_zero():
        raise HypothesisViolated("wild layer is zero: no depth")
    k = a.ring
    p, m = k.p, a.m
    n = fil_level(a)
    alpha = witt_differential(a)
    nu_b = nu_c = None
    if which == "key1":
        membership_level = n - r
        refinement_level = n - p * r
    else:
        if b is None or c is None:
            raise InconsistentInput(f"{which} needs both b and c")
        if b.is_zero() or c.is_zero():
            raise HypothesisViolated("b and c must be nonzero")
        db = b.derivative()
        if db.is_zero():
            raise HypothesisViolated("b is inseparable: db/dt = 0")
        nu_b = 1 + db.valuation() - b.valuation()
        nu_c = _nu(c)
        if not nu_b + nu_c < (p - 2) * r:
            raise HypothesisViolated(
                f"nu(b) + nu(c) = {nu_b + nu_c} is not < (p-2) r = {(p - 2) * r}"
            )
        defect = alpha + c * db
        if which == "key6":
            if not defect.is_zero():
                raise HypothesisViolated(
                    "alpha + c b' is nonzero within the window; the exact "
                    "stationarity hypothesis fails"
                )
        else:
            if alpha.is_zero() or alpha.valuation() != -n - 1:
                raise HypothesisViolated(
                    "ord(t alpha) = -n must hold exactly at the depth of a"
                )
            if not defect.has_ord_at_least(-n + nu_c + r):
                raise HypothesisViolated(
                    f"ord(alpha + c b') >= {-n + nu_c + r} fails"
                )
        membership_level = n - nu_c - 2 * r
        refinement_level = n - nu_c - 2 * r - 1
    s = splitting_degree or _splitting_degree(k.q, 4 * (p * r + n))
    big, emb = k.extension(s)
    a_E = _promote_witt(a, emb, big)
    alpha_E = witt_differential(a_E)
    if which != "key1":
        b_E = promote(b, emb, big)
        c_E = promote(c, emb, big)
        half = big.from_int(2).inverse()
        quad_base = (alpha_E * c_E.dlog()).shift(2 * r + 2)
    rng = random.Random(seed)
    failures = []
    for j in range(theta_samples):
        theta = big.from_index(rng.randrange(1, big.q))
        ua = dilate(a_E, r, theta)
        if which == "key1":
            diff = witt_sub(ua, a_E)
            if not in_fil(diff, membership_level):
                failures.append((j, "membership"))
                continue
            claimed = dilation_defect_sum(alpha_E, r, theta)
            if not in_fil(
                witt_sub(diff, verschiebung_power(claimed, m)), refinement_level
            ):
                failures.append((j, "refinement"))
        else:
            ub = substitute_dilated(b_E, r, theta)
            diff = witt_add(
                witt_sub(ua, a_E),
                verschiebung_power(c_E * (ub - b_E), m),
            )
            if not in_fil(diff, membership_level):
                failures.append((j, "membership"))
                continue
            claimed = quad_base.scale(half * theta * theta)
            if not in_fil(
                witt_sub(diff, verschiebung_power(claimed, m)), refinement_level
            ):
                failures.append((j, "refinement"))
    return CongruenceReport(
        which=which,
        n=n,
        r=r,
        nu_b=nu_b,
        nu_c=nu_c,
        membership_level=membership_level,
        refinement_level=refinement_level,
        splitting_degree=s,
        samples=theta_samples,
        failures=tuple(failures),
    )


# -- vanishing-cycle support -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VanishingSupport:
    """Support and drops of the nearby-cycle complex attached to the pair
    (b, c) at depth n, read off the unit scale of t^(n+1) c b'.

    The support is the set of e'-th roots of unity (e' the prime-to-p part
    of |ord(c)|), each with multiplicity p^kappa = |ord(c)| / e'; the
    dimension drop at each support point is -multiplicity, and the
    degree-0 part vanishes identically.  ``splitting_field`` is the
    smallest extension of k containing the support."""

    scale: object
    depth: int
    order_c: int
    order_b_prime: int
    multiplicity: int
    primitive_order: int
    splitting_degree: int
    splitting_field: object
    points: tuple
    drop: int
    psi0_vanishes: bool = True


def vanishing_support(a: WittVector, b: LaurentSeries,
                      c: LaurentSeries) -> VanishingSupport:
    """Compute the support data of the vanishing cycles of the twisted
    phase over the torus of dilation directions.

    Preconditions (DegenerateOrder otherwise): ord(c) != 0 and
    t^(n+1) c b' is a unit, n being the depth read from the form
    coefficient of a."""
    if a.is_zero():
        raise DegenerateOrder("wild layer is zero: no depth")
    alpha = witt_differential(a)
    if alpha.is_zero():
        raise DegenerateOrder("form coefficient of the wild layer vanishes")
    n = -(alpha.valuation() + 1)
    if b.is_zero() or c.is_zero():
        raise DegenerateOrder("b and c must be nonzero")
    db = b.derivative()
    if db.is_zero():
        raise DegenerateOrder("b is inseparable: db/dt = 0")
    e = c.valuation()
    if e == 0:
        raise DegenerateOrder("ord(c) = 0: the direction divisor is empty")
    if db.valuation() + e != -n - 1:
        raise DegenerateOrder(
            f"t^(n+1) c b' has order {n + 1 + db.valuation() + e}, not a unit"
        )
    k = b.ring
    p = k.p
    lam = (c * db).coefficient(-n - 1)
    e_abs = abs(e)
    kappa = 0
    while e_abs % p == 0:
        e_abs //= p
        kappa += 1
    mult = p ** kappa
    s = 1
    while (k.q ** s - 1) % e_abs:
        s += 1
    big, _ = k.extension(s)
    step = (big.q - 1) // e_abs
    gen = big.generator
    points = tuple(gen ** (step * j) for j in range(e_abs))
    return VanishingSupport(
        scale=lam,
        depth=n,
        order_c=e,
        order_b_prime=db.valuation(),
        multiplicity=mult,
        primitive_order=e_abs,
        splitting_degree=s,
        splitting_field=big,
        points=points,
        drop=-mult,
    )


# -- dimension bookkeeping --------------------------------------------------------------


@dataclass(frozen=True)
class DKInput:
    """Input of the degeneration dimension count: ``horizontal`` lists the
    boundary points of the generic fiber as (residue degree, Swan) pairs,
    ``vertical`` lists the special-fiber branches as ("unramified", swan)
    or ("ramified", form_order) pairs, and ``delta`` is the nonnegative
    contact defect of the special fiber."""

    horizontal: tuple
    vertical: tuple
    delta: int = 0


def dimtot_horizontal(degree: int, swan: int) -> int:
    """Total-dimension weight of one horizontal boundary point."""
    if degree < 1 or swan < 0:
        raise InconsistentInput(
            f"need degree >= 1 and swan >= 0, got ({degree}, {swan})"
        )
    return degree * (swan + 1)


def dimtot_vertical(branch) -> int:
    """Total-dimension weight of one special-fiber branch.

    Unramified branches weigh swan + 1; ramified branches weigh the
    negated order of the twist form, which is allowed to be negative at
    its zeros and must not be clamped."""
    kind, value = branch
    if kind == "unramified":
        if value < 0:
            raise InconsistentInput(f"swan must be >= 0, got {value}")
        return value + 1
    if kind == "ramified":
        return -value
    raise InconsistentInput(f"unknown branch kind {kind!r}")


def dk_phi(inp: DKInput):
    """(phi_generic, phi_special): the two total-dimension sums."""
    phi_eta = sum(dimtot_horizontal(d, sw) for d, sw in inp.horizontal)
    phi_s = sum(dimtot_vertical(br) for br in inp.vertical)
    return phi_eta, phi_s


def dk_dimension(inp: DKInput) -> int:
    """Dimension of the degree-1 nearby cycles under a vanishing degree-0
    part: phi_generic + 2 delta - phi_special."""
    if inp.delta < 0:
        raise InconsistentInput(f"delta must be >= 0, got {inp.delta}")
    phi_eta, phi_s = dk_phi(inp)
    dim = phi_eta + 2 * inp.delta - phi_s
    if dim < 0:
        raise InconsistentInput(
            f"negative dimension {dim}: the input books do not balance"
        )
    return dim


def rho_point(z: str, zcheck: str, ord_f_dx: int | None = None) -> int:
    """Vertical drop of the transform kernel at a point of the special
    fiber: -ord_s(f^* dx) when the target point is infinity, and 1 for the
    pair (infinity, 0)."""
    if zcheck == INFINITY:
        if ord_f_dx is None:
            raise InconsistentInput(
                "target 'infinity' needs ord_s(f^* dx)"
            )
        return -ord_f_dx
    if zcheck == ORIGIN and z == INFINITY:
        return 1
    raise InconsistentInput(
        f"no vertical-drop rule for the pair ({z!r}, {zcheck!r})"
    )


def psi1_dimension(z: str, zcheck: str, *, swan: int | None = None,
                   swan_twisted: int | None = None,
                   ord_f_dx: int | None = None) -> int:
    """Dimension of the degree-1 nearby cycles of the transform kernel for
    one (source, target) pair: swan + 1 + ord_s(f^* dx) at a finite source,
    the twisted Swan in place of swan at an infinite source, and
    swan_twisted - swan for the pair (infinity, 0)."""
    if zcheck == INFINITY:
        if ord_f_dx is None:
            raise InconsistentInput("target 'infinity' needs ord_s(f^* dx)")
        base = swan if z != INFINITY else swan_twisted
        which = "swan" if z != INFINITY else "swan_twisted"
        if base is None:
            raise InconsistentInput(f"pair ({z!r}, {zcheck!r}) needs {which}")
        dim = base + 1 + ord_f_dx
    elif zcheck == ORIGIN and z == INFINITY:
        if swan is None or swan_twisted is None:
            raise InconsistentInput(
                "pair ('infinity', '0') needs swan and swan_twisted"
            )
        dim = swan_twisted - swan
    else:
        raise InconsistentInput(
            f"no dimension rule for the pair ({z!r}, {zcheck!r})"
        )
    if dim < 0:
        raise InconsistentInput(f"negative dimension {dim}")
    return dim


def lft_rank(z: str, zcheck: str, *, swan: int, rank: int, slopes) -> int:
    """Generic rank of the local Fourier transform from the (source,
    target) pair, the Swan conductor, the generic rank, and the slope
    multiset of the input:

        finite source, target infinity            -> swan + rank
        infinity to infinity, all slopes > 1       -> swan - rank
        infinity to infinity, all slopes in [0, 1] -> 0
        infinity to 0, all slopes < 1              -> rank - swan
        infinity to 0, all slopes >= 1             -> 0

    Slope multisets straddling the applicable threshold are rejected with
    InconsistentInput: split the input by slope first."""
    if swan < 0 or rank < 1:
        raise InconsistentInput(
            f"need swan >= 0 and rank >= 1, got ({swan}, {rank})"
        )
    slopes = tuple(Fraction(s) for s in slopes)
    if not slopes:
        raise InconsistentInput("slope multiset must be nonempty")
    if any(s < 0 for s in slopes):
        raise InconsistentInput("slopes must be nonnegative")
    if z != INFINITY:
        if zcheck != INFINITY:
            raise InconsistentInput(
                "a finite source transforms to target 'infinity' only"
            )
        out = swan + rank
    elif zcheck == INFINITY:
        if all(s > 1 for s in slopes):
            out = swan - rank
        elif all(s <= 1 for s in slopes):
            out = 0
        else:
            raise InconsistentInput(
                "slopes straddle 1: split the input before transforming"
            )
    elif zcheck == ORIGIN:
        if all(s < 1 for s in slopes):
            out = rank - swan
        elif all(s >= 1 for s in slopes):
            out = 0
        else:
            raise InconsistentInput(
                "slopes straddle 1: split the input before transforming"
            )
    else:
        raise InconsistentInput(f"unknown target point {zcheck!r}")
    if out < 0:
        raise InconsistentInput(
            f"rank {out} < 0: slope data contradicts (swan, rank)"
        )
    return out


# -- the determinant identity ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LaumonReport:
    """Exact evaluation of the determinant identity

        det(-Frob on the transform at x-check)^(-1)
            = lambda(L/K, psi_dx) * eps0(chi, psi_db),

    together with the closed product of its three factor formulas, which
    must equal 1 identically.  ``mismatch`` names the first factor whose
    two evaluation paths disagree when any check fails."""

    conductor: tuple
    degree: int
    lhs: CycloNumber
    rhs: CycloNumber
    product_identity: bool
    lhs_equals_rhs: bool
    det_factor: CycloNumber
    stationary_factor: CycloNumber
    lambda_value: CycloNumber
    epsilon_value: CycloNumber
    oracle_match: bool | None
    mismatch: str | None

    @property
    def ok(self) -> bool:
        return (
            self.product_identity
            and self.lhs_equals_rhs
            and self.oracle_match is not False
        )


def verify_laumon(chi: QuasiCharacter, b: LaurentSeries,
                  c: LaurentSeries | None = None, *, oracle: bool = False,
                  coset_cap: int = DEFAULT_COSET_CAP) -> LaumonReport:
    """Verify the determinant identity for the direct image of chi along
    the degree-ord(b) covering of the base trait presented by b.

    The left side is the inverse of the closed determinant factor

        kappa0(-1)^C(i,2) chi(c) psi_db(c)^(-1) G^(-i) (c, -2 t^i b')

    with i = -ord(c); the right side is lambda(L/K, psi_dx) times the
    wild epsilon factor of (chi, psi_db) computed by its own closed form.
    The product of the determinant factor, the stationary factor, and the
    lambda factor is checked against 1 exactly.  ``oracle=True`` recomputes
    the epsilon factor by the shell-sum integral as an independent anchor.
    """
    field = chi.field
    if field is not b.ring or (c is not None and field is not c.ring):
        raise InconsistentInput(
            "character and series live over different residue fields; "
            "base-change everything to one field first"
        )
    if b.is_zero() or b.valuation() < 1:
        raise WrongSourcePoint(
            "the identity is stated for a covering of the origin: "
            "need ord(b) >= 1"
        )
    if not chi.has_wild_part():
        raise NotLegendre("character has no wild layer")
    if c is None:
        c = stationary_c(chi.wild, b)
    triple = LegendreTriple(chi.wild, b, c)
    n = triple.n
    _, sw_chi = conductor(chi)
    assert sw_chi == n
    db = b.derivative()
    i = -c.valuation()
    assert 1 + db.valuation() - i == -n
    # every c-dependent factor is constant on the coset c (1 + m^(n-r+1));
    # evaluate at the full-window stationary representative so the residue
    # pairings inside the character values stay certified
    c_eval = -(witt_differential(chi.wild) * db.inverse())
    assert (c_eval - c).has_ord_at_least(
        c.valuation() + n - (n + 1) // 2 + 1
    ), "c is outside the stationary coset"
    psi_db = AdditiveCharacter(db)
    q = field.q
    kap = field.kappa0(-field.one)

    def parity_sign(exponent):
        return kap if exponent % 2 else 1

    chi_c = char_eval(chi, c_eval)
    psi_c = psi_eval(psi_db, c_eval)
    det_factor = (
        chi_c
        * psi_c ** (-1)
        * quad_gauss_power(field, -i)
        * parity_sign(i * (i - 1) // 2)
        * hilbert_symbol(c_eval, db.shift(i).scale(field.from_int(-2)))
    )
    stationary_factor = (
        chi_c ** (-1)
        * psi_c
        * Fraction(q) ** i
        * parity_sign(n * (n + 1) // 2)
        * quad_gauss_power(field, -n - 1)
    )
    if n % 2 == 0:
        tser = LaurentSeries.t_power(field, 1, 4)
        stationary_factor = stationary_factor * hilbert_symbol(
            (db * c_eval).scale(field.from_int(2)), tser
        )
    lam = lambda_factor(TotallyRamifiedExt(b)).value
    eps = epsilon0_wild(chi, psi_db)
    product = det_factor * stationary_factor * lam
    product_identity = product == 1
    lhs = det_factor ** (-1)
    rhs = lam * eps.value
    lhs_equals_rhs = lhs == rhs
    oracle_match = None
    if oracle:
        tate = epsilon_tate_oracle(chi, psi_db, coset_cap=coset_cap)
        oracle_match = tate == eps.value
    mismatch = None
    if not (product_identity and lhs_equals_rhs and oracle_match is not False):
        if oracle_match is False:
            mismatch = "epsilon-closed-form"
        elif stationary_factor != eps.value:
            mismatch = "stationary-factor"
        else:
            mismatch = "determinant-factor"
    return LaumonReport(
        conductor=triple.conductor,
        degree=i,
        lhs=lhs,
        rhs=rhs,
        product_identity=product_identity,
        lhs_equals_rhs=lhs_equals_rhs,
        det_factor=det_factor,
        stationary_factor=stationary_factor,
        lambda_value=lam,
        epsilon_value=eps.value,
        oracle_match=oracle_match,
        mismatch=mismatch,
    )


# -- random instances ----------------------------------------------------------------------


def random_legendre_triple(field, m: int, rng, *, n_cap: int = 8,
                           prec: int | None = None,
                           attempts: int = 400) -> LegendreTriple:
    """Draw an admissible triple: a reduced wild layer of depth n with
    p not dividing n, b = t^d * unit with small d prime to p, and the
    stationary scale c built from them.  Draws violating the admissibility
    inequalities are rejected and retried."""
    p, q = field.p, field.q
    if prec is None:
        prec = 4 * (n_cap + p) + 12
    d_choices = [d for d in (1, 2, 3, 4) if d % p]
    for _ in range(attempts):
        entries = []
        for idx in range(m + 1):
            weight = p ** (m - idx)
            vmax = n_cap // weight
            if (vmax < 1 or rng.random() < 0.35) and idx < m:
                entries.append(LaurentSeries.zero(field, prec))
                continue
            v = rng.randint(1, max(1, vmax))
            coeffs = {-v: field.from_index(rng.randrange(1, q))}
            for _ in range(rng.randint(0, 2)):
                coeffs[rng.randint(-v, -1)] = field.from_index(
                    rng.randrange(0, q)
                )
            coeffs[-v] = field.from_index(rng.randrange(1, q))
            entries.append(LaurentSeries.from_terms(field, coeffs, prec))
        vec = WittVector(m, entries)
        if vec.is_zero():
            continue
        a, _ = reduce_vector(vec)
        if a.is_zero():
            continue
        n = fil_level(a)
        if n < 1 or n % p == 0:
            continue
        alpha = witt_differential(a)
        if alpha.is_zero() or alpha.valuation() != -n - 1:
            continue
        d = rng.choice(d_choices)
        unit_terms = {0: field.from_index(rng.randrange(1, q))}
        for _ in range(rng.randint(0, 2)):
            unit_terms[rng.randint(1, 3)] = field.from_index(
                rng.randrange(0, q)
            )
        b = LaurentSeries.from_terms(field, unit_terms, prec).shift(d)
        try:
            c = stationary_c(a, b)
            return LegendreTriple(a, b, c)
        except (NotLegendre, PrecisionExhausted):
            continue
    raise CapExceeded(f"no admissible triple found in {attempts} attempts")


def character_for_triple(triple: LegendreTriple, tame_exponent: int = 0,
                         uniformizer_value: CycloNumber | None = None
                         ) -> QuasiCharacter:
    """Wrap the wild layer of a triple as a full character datum, with an
    optional tame decoration."""
    if uniformizer_value is None:
        uniformizer_value = CycloNumber.from_rational(1, 1)
    return QuasiCharacter(
        triple.field,
        tame_exponent % (triple.field.q - 1),
        uniformizer_value,
        triple.a,
    )


def guaranteed_mod_t(*objects) -> int:
    """The smallest certified window among the given series and Witt
    vectors: every reported series coefficient is exact below this
    exponent."""
    precs = []
    for obj in objects:
        if isinstance(obj, WittVector):
            precs.extend(e.prec for e in obj.entries)
        elif isinstance(obj, LaurentSeries):
            precs.append(obj.prec)
        elif obj is None:
            continue
        else:
            raise InconsistentInput(
                f"no precision window on {type(obj).__name__}"
            )
    return min(precs) if precs else 0
