"""Gauss sums, epsilon factors (closed forms against the Tate integral),
lambda factors, and norm/trace/discriminant bookkeeping for tot. ram. exts."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ramify.characters import (
    AdditiveCharacter,
    QuasiCharacter,
    char_eval,
    conductor,
    hilbert_symbol,
    kummer_char,
    psi_eval,
)
from ramify.cyclo import CycloNumber, root_of_unity
from ramify.epsilon import (
    EpsilonResult,
    TotallyRamifiedExt,
    discriminant_class,
    epsilon0,
    epsilon0_tame,
    epsilon0_wild,
    epsilon_tate_oracle,
    find_c,
    gauss_sum,
    induced_swan,
    lambda_factor,
    norm,
    quad_gauss,
    quad_gauss_power,
    refined_log_different,
    trace_map,
    w2_induced,
)
from ramify.errors import (
    CapExceeded,
    TameInput,
    UnramifiedInput,
    WildInput,
    ZeroInput,
)
from ramify.fields import make_field
from ramify.series import LaurentSeries
from ramify.witt import WittVector, witt_differential

F3 = make_field(3, 1)
F5 = make_field(5, 1)
F7 = make_field(7, 1)
F9 = make_field(3, 2)


def poly(field, pairs, prec=24):
    return LaurentSeries.from_terms(
        field, {e: field.from_int(c) for e, c in pairs}, prec
    )


def psi_dt(field, prec=30):
    return AdditiveCharacter(poly(field, [(0, 1)], prec))


def one() -> CycloNumber:
    return CycloNumber.from_rational(2, 1)


def rng_series(field, rng, val, length, unit_lead=True):
    coeffs = [field.from_index(rng.randrange(field.q)) for _ in range(length)]
    if unit_lead:
        coeffs[0] = field.from_index(rng.randrange(1, field.q))
    return LaurentSeries.make(field, val, coeffs, val + length)


def rng_tame(field, rng):
    e = rng.randrange(1, field.q - 1) if field.q > 3 else 1
    s = root_of_unity(field.q - 1, rng.randrange(field.q - 1))
    return QuasiCharacter(field, e, s)


def rng_wild_char(field, m, rng, vals, a_cap):
    """Random quasi-character with a wild part of bounded conductor."""
    while True:
        entries = tuple(rng_series(field, rng, v, 10) for v in vals)
        chi = QuasiCharacter(
            field,
            rng.randrange(field.q - 1),
            root_of_unity(field.q - 1, rng.randrange(field.q - 1)),
            wild=WittVector(m, entries),
        )
        a, sw = conductor(chi)
        if 1 <= sw and a <= a_cap:
            return chi


# -- Gauss sums ----------------------------------------------------------------


def test_quad_gauss_frozen_q3():
    g = quad_gauss(F3)
    assert g == root_of_unity(3, 0) + root_of_unity(3, 1) * 2
    assert g * g == -3


@pytest.mark.parametrize(
    "field", [F3, F5, F7, F9, make_field(5, 2), make_field(3, 3)]
)
def test_gauss_sum_conventions(field):
    # trivial multiplicative character: the full additive sum collapses to 1
    assert gauss_sum(field, 0) == one()
    # quadratic character: tau(kappa0) = -G, and G^2 = kappa0(-1) q
    g = quad_gauss(field)
    assert gauss_sum(field, (field.q - 1) // 2) == -g
    assert g * g == field.kappa0(-field.one) * Fraction(field.q)


@pytest.mark.parametrize("field", [F3, F5])
def test_quad_gauss_power_agrees_with_repeated_product(field):
    g = quad_gauss(field)
    for k in range(-5, 6):
        assert quad_gauss_power(field, k) == g ** k


@given(j=st.integers(-6, 6), k=st.integers(-6, 6))
@settings(max_examples=25, deadline=None)
def test_quad_gauss_power_additive_in_exponent(j, k):
    lhs = quad_gauss_power(F5, j) * quad_gauss_power(F5, k)
    assert lhs == quad_gauss_power(F5, j + k)


# -- closed forms: unramified and tame -------------------------------------------


def test_epsilon_unramified_closed_form():
    s = root_of_unity(4, 1)
    chi = QuasiCharacter(F5, 0, s)
    res = epsilon0(chi, psi_dt(F5))
    assert res.branch == "unramified"
    assert res.value == -s
    # omega = t^2 (1 + t) dt: ord 2, so beta has valuation 3
    res2 = epsilon0(chi, AdditiveCharacter(poly(F5, [(2, 1), (3, 1)], 30)))
    assert res2.value == -(s ** 3) * Fraction(25)


def test_epsilon_tame_quadratic_unit_gauge():
    # beta = 1 forces ord(omega) = -1, and the value is G/q
    chi = QuasiCharacter(F3, 1, one())
    psi = AdditiveCharacter(poly(F3, [(-1, 1)], 30))
    res = epsilon0(chi, psi)
    assert res.branch == "tame"
    assert res.value == quad_gauss(F3) * Fraction(1, 3)
    assert epsilon_tate_oracle(chi, psi) == res.value


def test_epsilon0_tame_rejects_wild():
    chi = rng_wild_char(F3, 0, random.Random(5), [-1], 2)
    with pytest.raises(WildInput):
        epsilon0_tame(chi, psi_dt(F3))


@pytest.mark.parametrize("field,seed", [(F3, 11), (F5, 12), (F9, 13)])
def test_tame_closed_form_matches_tate_integral(field, seed):
    rng = random.Random(seed)
    for trial in range(8):
        chi = rng_tame(field, rng)
        if trial == 0:
            # a uniformizer value that is not a root of unity
            chi = QuasiCharacter(
                field, chi.tame_exponent, CycloNumber.from_rational(2, Fraction(2, 3))
            )
        d = rng.randrange(-2, 3)
        psi = AdditiveCharacter(rng_series(field, rng, d, 4))
        res = epsilon0(chi, psi)
        assert res.branch == "tame"
        assert epsilon_tate_oracle(chi, psi) == res.value


# -- closed forms: wild ------------------------------------------------------------


def test_wild_depth_one_frozen():
    # wild class (t^-1) over F3, psi = dt: sw = 1, a = 2, eps0 = 3.
    chi = QuasiCharacter(
        F3, 0, one(), wild=WittVector(0, (LaurentSeries.t_power(F3, -1, 24),))
    )
    psi = psi_dt(F3)
    res = epsilon0(chi, psi)
    assert res.branch == "wild-odd"
    assert res.value == 3
    assert epsilon_tate_oracle(chi, psi) == res.value
    c = find_c(chi, psi)
    assert (c - LaurentSeries.t_power(F3, -2, 24)).is_zero()
    assert c.val == -2 and c.prec == 0  # canonical window of length r+1 = 2
    assert (res.c - c).is_zero()


def test_wild_depth_two_frozen_even_branch():
    # wild class (t^-2) over F3, psi = dt: sw = 2, a = 3, eps0 = 3G.
    chi = QuasiCharacter(
        F3, 0, one(), wild=WittVector(0, (LaurentSeries.t_power(F3, -2, 24),))
    )
    psi = psi_dt(F3)
    res = epsilon0(chi, psi)
    assert res.branch == "wild-even"
    assert res.value == quad_gauss(F3) * Fraction(3)
    assert epsilon_tate_oracle(chi, psi) == res.value
    # the Hilbert-symbol factor does not depend on the chosen uniformizer
    alt = epsilon0_wild(chi, psi, pi=poly(F3, [(1, 1), (2, 1)], 20))
    assert alt.value == res.value


def test_wild_value_constant_on_c_coset():
    chi = QuasiCharacter(
        F3, 0, one(), wild=WittVector(0, (LaurentSeries.t_power(F3, -2, 24),))
    )
    psi = psi_dt(F3)
    base = epsilon0_wild(chi, psi)
    red, _ = chi.reduced_wild()
    c_full = -(witt_differential(red) * psi.omega.inverse())
    # n = 2, r = 1: c is only pinned down modulo 1 + m^2
    w = poly(F3, [(2, 1), (3, 2)], 20)
    bumped = c_full * (poly(F3, [(0, 1)], 20) + w)
    alt = epsilon0_wild(chi, psi, c_override=bumped)
    assert alt.value == base.value


@pytest.mark.parametrize(
    "field,m,vals,a_cap,cases,seed",
    [
        (F3, 0, [-1], 5, 1, 21),
        (F3, 0, [-2], 5, 1, 22),
        (F3, 0, [-4], 5, 1, 23),
        (F3, 1, [-1, -2], 4, 2, 24),
        (F9, 0, [-1], 2, 1, 25),
    ],
)
def test_wild_closed_form_matches_tate_integral(field, m, vals, a_cap, cases, seed):
    rng = random.Random(seed)
    for _ in range(cases):
        chi = rng_wild_char(field, m, rng, vals, a_cap)
        d = rng.randrange(-1, 2)
        psi = AdditiveCharacter(rng_series(field, rng, d, a_cap + 4))
        res = epsilon0(chi, psi)
        assert res.branch.startswith("wild")
        assert epsilon_tate_oracle(chi, psi) == res.value


def test_epsilon_twist_scales_by_character_value():
    # replacing omega by a*omega multiplies eps0 by chi(a) q^{ord a}
    scale = poly(F5, [(2, 2), (3, 1)], 30)
    chi_t = QuasiCharacter(F5, 2, root_of_unity(4, 1))
    psi = AdditiveCharacter(poly(F5, [(0, 1), (1, 3)], 30))
    lhs = epsilon0(chi_t, AdditiveCharacter(psi.omega * scale)).value
    assert lhs == char_eval(chi_t, scale) * Fraction(25) * epsilon0(chi_t, psi).value

    scale3 = poly(F3, [(-1, 1), (0, 1)], 30)
    chi_w = QuasiCharacter(
        F3, 1, one(), wild=WittVector(0, (LaurentSeries.t_power(F3, -1, 24),))
    )
    psi3 = psi_dt(F3)
    lhs = epsilon0(chi_w, AdditiveCharacter(psi3.omega * scale3)).value
    rhs = char_eval(chi_w, scale3) * Fraction(1, 3) * epsilon0(chi_w, psi3).value
    assert lhs == rhs


# -- the stationary-phase scale c ---------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 4, 5])
def test_find_c_monomial_classes(n):
    chi = QuasiCharacter(
        F3, 0, one(), wild=WittVector(0, (LaurentSeries.t_power(F3, -n, 24),))
    )
    c = find_c(chi, psi_dt(F3))
    r = (n + 1) // 2
    assert c.val == -n - 1
    assert c.prec == -n - 1 + r + 1
    assert (c - LaurentSeries.monomial(F3, F3.from_int(n), -n - 1, 10)).is_zero()


def test_find_c_defining_congruence():
    rng = random.Random(77)
    psi = AdditiveCharacter(poly(F9, [(0, 1), (1, 1)], 30))
    half = F9.from_int(2).inverse()
    unit_one = poly(F9, [(0, 1)], 30)
    for _ in range(4):
        chi = rng_wild_char(F9, 0, rng, [-3], 6)
        _, n = conductor(chi)
        r = (n + 1) // 2
        c = find_c(chi, psi)
        assert c.val == -n - 1 - psi.ord
        for _ in range(3):
            x = rng_series(F9, rng, r, 6, unit_lead=False)
            u = unit_one + x + (x * x).scale(half)
            assert char_eval(chi, u) == psi_eval(psi, c * x)


def test_find_c_rejects_tame():
    with pytest.raises(TameInput):
        find_c(QuasiCharacter(F3, 1, one()), psi_dt(F3))


# -- oracle guard rails -------------------------------------------------------------


def test_oracle_rejects_unramified():
    with pytest.raises(UnramifiedInput):
        epsilon_tate_oracle(QuasiCharacter(F3, 0, -one()), psi_dt(F3))


def test_oracle_cap_on_central_shell():
    chi = QuasiCharacter(F9, 1, one())
    with pytest.raises(CapExceeded):
        epsilon_tate_oracle(chi, psi_dt(F9), coset_cap=3)


# -- lambda factors -----------------------------------------------------------------


def test_lambda_trivial_extension():
    ext = TotallyRamifiedExt(LaurentSeries.t_power(F3, 1, 20))
    res = lambda_factor(ext)
    assert res.value == one() and res.branch == "lambda-even"
    delta = refined_log_different(ext)
    assert (delta - poly(F3, [(0, 1)], 16)).is_zero()


def test_lambda_frozen_degree_two():
    ext = TotallyRamifiedExt(LaurentSeries.t_power(F3, 2, 20))
    res = lambda_factor(ext)
    assert res.branch == "lambda-odd"
    assert res.value == -(quad_gauss(F3) * Fraction(1, 3))


@pytest.mark.parametrize(
    "field,n,expected_w2,expected",
    [
        (F3, 2, -1, Fraction(-3)),
        (F5, 3, 1, Fraction(5)),
        (F3, 4, -1, Fraction(-9)),
    ],
)
def test_lambda_times_eps_is_w2_times_power(field, n, expected_w2, expected):
    # lambda(L/K) * eps(kappa_D, psi_db) = w2 * q^r with 2r = m + a(kappa_D)
    ext = TotallyRamifiedExt(LaurentSeries.t_power(field, n, 24))
    db = ext.b_derivative()
    kd = kummer_char(db)
    psi_l = AdditiveCharacter(db)
    m = ext.different_ord
    a_kd, _ = conductor(kd)
    assert (m + a_kd) % 2 == 0
    r = (m + a_kd) // 2
    if a_kd:
        eps = epsilon_tate_oracle(kd, psi_l)
    else:
        eps = epsilon0_tame(kd, psi_l).value
    assert w2_induced(ext) == expected_w2
    prod = lambda_factor(ext).value * eps
    assert prod == expected_w2 * Fraction(field.q) ** r
    assert prod == expected


def test_lambda_tower_degree_four():
    # t^4 = (t^2)^2: the middle layer sees psi twisted by d(u^2)/du = 2u,
    # which scales lambda by the quadratic character of the relative
    # discriminant at 2u.
    ext4 = TotallyRamifiedExt(LaurentSeries.t_power(F3, 4, 24))
    ext2 = TotallyRamifiedExt(LaurentSeries.t_power(F3, 2, 24))
    twist = hilbert_symbol(poly(F3, [(1, 2)], 10), discriminant_class(ext2))
    lhs = lambda_factor(ext4).value
    rhs = lambda_factor(ext2).value ** 3 * twist
    assert lhs == rhs
    assert lhs == quad_gauss(F3) * Fraction(1, 9)


def test_lambda_tower_degree_six():
    # t^6 = (t^2 then u^3): lambda(M/K) = lambda(M/L, psi o Tr) lambda(L/K)^2
    ext6 = TotallyRamifiedExt(LaurentSeries.t_power(F5, 6, 30))
    ext2 = TotallyRamifiedExt(LaurentSeries.t_power(F5, 2, 30))
    ext3 = TotallyRamifiedExt(LaurentSeries.t_power(F5, 3, 30))
    twist = hilbert_symbol(poly(F5, [(2, 3)], 10), discriminant_class(ext2))
    lhs = lambda_factor(ext6).value
    rhs = lambda_factor(ext2).value * lambda_factor(ext3).value ** 2 * twist
    assert lhs == rhs
    assert lhs == -(quad_gauss(F5) * Fraction(1, 125))


# -- norms, traces, differents -------------------------------------------------------


def test_norm_frozen_degree_two():
    ext = TotallyRamifiedExt(LaurentSeries.t_power(F3, 2, 24))
    n_t = norm(ext, LaurentSeries.t_power(F3, 1, 24))
    assert (n_t - LaurentSeries.monomial(F3, -F3.one, 1, 10)).is_zero()
    n_b = norm(ext, ext.b)
    assert (n_b - LaurentSeries.t_power(F3, 2, 10)).is_zero()
    n_2 = norm(ext, poly(F3, [(0, 2)], 24))
    assert (n_2 - poly(F3, [(0, 4)], 10)).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_norm_of_uniformizer_sign(n):
    ext = TotallyRamifiedExt(LaurentSeries.t_power(F7, n, 24))
    n_t = norm(ext, LaurentSeries.t_power(F7, 1, 24))
    lead = F7.one if (n - 1) % 2 == 0 else -F7.one
    assert (n_t - LaurentSeries.monomial(F7, lead, 1, 8)).is_zero()


def test_norm_multiplicative():
    rng = random.Random(31)
    ext = TotallyRamifiedExt(poly(F5, [(3, 1), (4, 1)], 30))
    for _ in range(5):
        a = rng_series(F5, rng, rng.randrange(-2, 3), 8)
        b = rng_series(F5, rng, rng.randrange(-2, 3), 8)
        diff = norm(ext, a * b) - norm(ext, a) * norm(ext, b)
        assert diff.is_zero()
    with pytest.raises(ZeroInput):
        norm(ext, LaurentSeries.zero(F5, 8))


def test_trace_against_different_inverse():
    # Tr(D^{-1} t^i) = 0 for i <= n-2 and 1 for i = n-1
    for field, n in [(F3, 2), (F5, 3)]:
        ext = TotallyRamifiedExt(LaurentSeries.t_power(field, n, 24))
        d_inv = ext.b_derivative().inverse()
        for i in range(n):
            tr = trace_map(ext, d_inv.shift(i))
            if i == n - 1:
                assert (tr - poly(field, [(0, 1)], 8)).is_zero()
            else:
                assert tr.is_zero()


@pytest.mark.parametrize(
    "field,pairs",
    [
        (F3, [(2, 1)]),
        (F3, [(2, 1), (3, 1)]),
        (F5, [(3, 1), (4, 1)]),
    ],
)
def test_refined_log_different_congruence(field, pairs):
    # Tr(delta^{-1} a) has no pole and matches the residue of a at depth 0
    rng = random.Random(41)
    ext = TotallyRamifiedExt(poly(field, pairs, 30))
    d_inv = refined_log_different(ext).inverse()
    for _ in range(5):
        a = rng_series(field, rng, 0, 10)
        tr = trace_map(ext, d_inv * a)
        assert tr.val is not None and tr.val >= 0
        assert tr.coefficient(0) == a.coefficient(0)


@pytest.mark.parametrize("field,n", [(F5, 2), (F5, 3), (F7, 4)])
def test_refined_log_different_of_monomial_is_degree(field, n):
    ext = TotallyRamifiedExt(LaurentSeries.t_power(field, n, 20))
    delta = refined_log_different(ext)
    assert (delta - poly(field, [(0, n)], 14)).is_zero()


def test_refined_log_different_tower():
    # delta multiplies through a tower: t^2(1+t) under u -> u^3
    b1 = poly(F5, [(2, 1), (3, 1)], 30)
    ext_ml = TotallyRamifiedExt(b1)
    ext_mk = TotallyRamifiedExt(b1 * b1 * b1)
    lhs = refined_log_different(ext_mk)
    rhs = refined_log_different(ext_ml).scale(F5.from_int(3))
    assert (lhs - rhs).is_zero()


def test_discriminant_class_degree_two():
    for field in (F3, F5):
        ext = TotallyRamifiedExt(LaurentSeries.t_power(field, 2, 24))
        d = discriminant_class(ext)
        assert (d - LaurentSeries.monomial(field, field.from_int(4), 1, 8)).is_zero()


@pytest.mark.parametrize(
    "field,pairs,expected",
    [
        (F3, [(2, 1)], -1),
        (F3, [(4, 1)], -1),
        (F5, [(3, 1)], 1),
        (F9, [(2, 1)], 1),
        (F5, [(3, 1), (4, 1)], 1),
        (F3, [(2, 1), (3, 1)], -1),
    ],
)
def test_w2_values_and_symbol_chain(field, pairs, expected):
    # w2 = (d_{L/K}, 2)_K = (D, 2)_L = (2, t)_L when m is odd, else 1
    ext = TotallyRamifiedExt(poly(field, pairs, 30))
    m = ext.different_ord
    assert w2_induced(ext) == expected
    two = poly(field, [(0, 2)], 8)
    assert w2_induced(ext) == hilbert_symbol(ext.b_derivative(), two)
    if m % 2:
        assert w2_induced(ext) == hilbert_symbol(two, LaurentSeries.t_power(field, 1, 8))
    else:
        assert w2_induced(ext) == 1


@pytest.mark.parametrize(
    "field,pairs",
    [(F3, [(2, 1)]), (F5, [(3, 1)]), (F3, [(4, 1)]), (F5, [(3, 1), (4, 1)])],
)
def test_induced_conductor_is_even(field, pairs):
    ext = TotallyRamifiedExt(poly(field, pairs, 30))
    a_kd, _ = conductor(kummer_char(ext.b_derivative()))
    assert (ext.different_ord + a_kd) % 2 == 0


def test_induced_swan_values():
    # degree 1: inducing changes nothing
    ext1 = TotallyRamifiedExt(poly(F3, [(1, 1), (2, 1)], 24))
    chi = QuasiCharacter(
        F3, 0, one(), wild=WittVector(0, (LaurentSeries.t_power(F3, -2, 24),))
    )
    assert induced_swan(ext1, chi) == conductor(chi)[1]
    # unramified chi through t^2 picks up the invariant-line term
    ext2 = TotallyRamifiedExt(LaurentSeries.t_power(F3, 2, 24))
    assert induced_swan(ext2, QuasiCharacter(F3, 0, -one())) == 0


@pytest.mark.parametrize(
    "field,pairs,wild_val",
    [(F3, [(4, 1)], -1), (F5, [(3, 1), (4, 1)], -2)],
)
def test_induced_swan_matches_stationary_scale(field, pairs, wild_val):
    # -ord(c) for psi_db equals sw(Ind chi) + n
    ext = TotallyRamifiedExt(poly(field, pairs, 30))
    chi = QuasiCharacter(
        field,
        0,
        one(),
        wild=WittVector(0, (LaurentSeries.t_power(field, wild_val, 24),)),
    )
    psi_l = AdditiveCharacter(ext.b_derivative())
    c = find_c(chi, psi_l)
    assert -c.val == induced_swan(ext, chi) + ext.degree


def test_ext_input_guards():
    with pytest.raises(ZeroInput):
        TotallyRamifiedExt(poly(F3, [(0, 1), (1, 1)], 10))
    ext = TotallyRamifiedExt(LaurentSeries.t_power(F3, 3, 10))
    from ramify.errors import InseparableInput

    with pytest.raises(InseparableInput):
        ext.b_derivative()
