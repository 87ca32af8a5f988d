"""Coproducts, canonical realisations, the two integral routes, involution,
vanishing thresholds, and independence counts.

Coassociativity is checked by mapping the two-site coproduct into the
three-site space along both legs and comparing exactly.
"""

import random
from fractions import Fraction

import pytest

from gnlab import (PhaseContext, TensorSpace, build_gn, building_block,
                   building_block_expansion, canonical_bracket, casimir,
                   check_independence, check_involution,
                   check_realization_homomorphism, check_route_equivalence,
                   check_vanishing, harmonic_hamiltonian, integral_set,
                   integrals_via_coproduct, integrals_via_sum_of_squares,
                   window)
from gnlab.algebra import H, X_MINUS, X_PLUS, random_generator_polynomial, y_minus, y_plus


def test_window_arithmetic():
    assert window("left", 2, 5) == (1, 2)
    assert window("left", 5, 5) == (1, 5)
    assert window("right", 2, 5) == (4, 5)
    assert window("right", 5, 5) == (1, 5)
    with pytest.raises(ValueError):
        window("left", 6, 5)
    with pytest.raises(ValueError):
        window("left", 0, 5)
    with pytest.raises(ValueError):
        window("middle", 2, 5)


def test_context_parameter_validation():
    with pytest.raises(ValueError, match="missing parameter row"):
        PhaseContext(3, 4)
    with pytest.raises(ValueError, match="length"):
        PhaseContext(3, 4, {1: [1, 2]})
    ctx = PhaseContext(3, 2, {1: [Fraction(1, 2), 3]})
    assert ctx.alpha(1, 1) == Fraction(1, 2)
    assert ctx.alpha(1, 2) == 3


def test_seeded_context_is_deterministic():
    a = PhaseContext.seeded(4, 5, alpha_seed=9)
    b = PhaseContext.seeded(4, 5, alpha_seed=9)
    assert a.alpha_rows == b.alpha_rows
    for row in a.alpha_rows.values():
        assert all(v != 0 and abs(v) <= 9 for v in row)


# ----------------------------------------------------------------------
# coproduct


def test_coproduct_is_primitive_on_generators():
    alg = build_gn(3)
    space = TensorSpace(alg, 2)
    for g in alg.basis.order:
        got = space.coproduct(alg.basis.poly(g))
        assert got == space.site_poly(g, 1) + space.site_poly(g, 2)


def test_coproduct_of_level2_invariant():
    alg = build_gn(2)
    space = TensorSpace(alg, 2)
    c2 = casimir(2, alg).polynomial
    sp = space.site_poly
    one_site = lambda k: sp(H, k) ** 2 + 4 * sp(X_PLUS, k) * sp(X_MINUS, k)
    cross = (2 * sp(H, 1) * sp(H, 2)
             + 4 * sp(X_PLUS, 1) * sp(X_MINUS, 2)
             + 4 * sp(X_MINUS, 1) * sp(X_PLUS, 2))
    assert space.coproduct(c2) == one_site(1) + one_site(2) + cross


def test_coproduct_is_multiplicative():
    alg = build_gn(3)
    space = TensorSpace(alg, 2)
    rng = random.Random(67)
    for _ in range(10):
        f = random_generator_polynomial(alg, rng, max_terms=2, max_degree=2)
        g = random_generator_polynomial(alg, rng, max_terms=2, max_degree=2)
        assert space.coproduct(f * g) == space.coproduct(f) * space.coproduct(g)


def test_coproduct_is_coassociative():
    alg = build_gn(3)
    two = TensorSpace(alg, 2)
    three = TensorSpace(alg, 3)
    # expand the first factor over sites {1,2}, or the second over {2,3}
    first_leg = {}
    second_leg = {}
    for g in alg.basis.order:
        first_leg[two.var(g, 1)] = three.site_poly(g, 1) + three.site_poly(g, 2)
        first_leg[two.var(g, 2)] = three.site_poly(g, 3)
        second_leg[two.var(g, 1)] = three.site_poly(g, 1)
        second_leg[two.var(g, 2)] = three.site_poly(g, 2) + three.site_poly(g, 3)
    rng = random.Random(71)
    probes = [alg.basis.poly(g) for g in alg.basis.order]
    probes.append(casimir(3, alg).polynomial)
    probes += [random_generator_polynomial(alg, rng, max_terms=2, max_degree=2)
               for _ in range(5)]
    for x in probes:
        d = two.coproduct(x)
        assert d.substitute(first_leg) == d.substitute(second_leg)


# ----------------------------------------------------------------------
# realisation


def test_realize_goldens():
    ctx = PhaseContext(3, 2, {1: [2, -3]})
    q1, q2 = ctx.q(1), ctx.q(2)
    p1, p2 = ctx.p(1), ctx.p(2)
    assert ctx.realize(H).value == q1 * p1 + q2 * p2
    assert ctx.realize(X_PLUS).value == (p1 ** 2 + p2 ** 2) * Fraction(1, 2)
    assert ctx.realize(X_MINUS).value == -(q1 ** 2 + q2 ** 2) * Fraction(1, 2)
    assert ctx.realize(y_plus(1)).value == 2 * p1 - 3 * p2
    assert ctx.realize(y_minus(1)).value == -(2 * q1 - 3 * q2)
    from gnlab.algebra import central
    assert ctx.realize(central(1, 1)).value == ctx.registry.const(13)


def test_realize_windows():
    ctx = PhaseContext.seeded(2, 4)
    left = ctx.realize(X_PLUS, "left", 2)
    assert left.sites == (1, 2)
    assert left.value == (ctx.p(1) ** 2 + ctx.p(2) ** 2) * Fraction(1, 2)
    right = ctx.realize(X_PLUS, "right", 2)
    assert right.sites == (3, 4)
    assert right.value == (ctx.p(3) ** 2 + ctx.p(4) ** 2) * Fraction(1, 2)


def test_canonical_bracket_basics():
    ctx = PhaseContext(2, 3)
    assert canonical_bracket(ctx, ctx.q(1), ctx.p(1)) == ctx.registry.one()
    assert canonical_bracket(ctx, ctx.q(1), ctx.q(2)).is_zero
    assert canonical_bracket(ctx, ctx.p(1), ctx.p(2)).is_zero
    L12 = building_block(ctx, (1, 2))
    L13 = building_block(ctx, (1, 3))
    L23 = building_block(ctx, (2, 3))
    assert canonical_bracket(ctx, L12, L13) == L23
    with pytest.raises(ValueError, match="non-phase"):
        canonical_bracket(ctx, ctx.algebra.basis.poly(H), ctx.q(1))


def test_realization_homomorphism():
    for (n, N) in ((2, 3), (3, 4), (4, 5)):
        assert check_realization_homomorphism(PhaseContext.seeded(n, N)).passed


def test_harmonic_hamiltonian_form():
    ctx = PhaseContext.seeded(2, 2)
    H2 = harmonic_hamiltonian(ctx, omega=2)
    want = (ctx.p(1) ** 2 + ctx.p(2) ** 2) * Fraction(1, 2) \
        + (ctx.q(1) ** 2 + ctx.q(2) ** 2) * 2
    assert H2 == want


# ----------------------------------------------------------------------
# building blocks and integral routes


def test_building_block_level2_is_angular():
    ctx = PhaseContext(2, 4)
    for (i, j) in ((1, 2), (2, 4), (1, 3)):
        want = ctx.q(i) * ctx.p(j) - ctx.q(j) * ctx.p(i)
        assert building_block(ctx, (i, j)) == want
    with pytest.raises(ValueError):
        building_block(ctx, (2, 1))
    with pytest.raises(ValueError):
        building_block(ctx, (1, 5))


def test_building_block_expansion_matches_determinant():
    for n, N in ((2, 4), (3, 4), (4, 5)):
        ctx = PhaseContext.seeded(n, N, alpha_seed=5)
        import itertools
        for combo in itertools.combinations(range(1, N + 1), n):
            assert building_block_expansion(ctx, combo) == \
                building_block(ctx, combo)


def test_route_equivalence_small():
    for (n, N) in ((2, 3), (3, 4)):
        ctx = PhaseContext.seeded(n, N)
        assert check_route_equivalence(ctx).passed
        for m in range(n, N + 1):
            assert integrals_via_coproduct(ctx, "left", m) == \
                integrals_via_sum_of_squares(ctx, "left", m)


def test_full_window_integral_is_the_realized_invariant():
    ctx = PhaseContext.seeded(3, 4)
    full = integrals_via_coproduct(ctx, "left", ctx.N)
    assert full == ctx.realize_poly(ctx.casimir_polynomial)
    assert full == integrals_via_coproduct(ctx, "right", ctx.N)


def test_vanishing_below_threshold():
    ctx = PhaseContext.seeded(3, 5)
    rep = check_vanishing(ctx)
    assert rep.passed
    assert integrals_via_coproduct(ctx, "left", 2).is_zero
    assert not integrals_via_coproduct(ctx, "left", 3).is_zero


def test_involution_small():
    for (n, N) in ((2, 3), (3, 4)):
        ctx = PhaseContext.seeded(n, N)
        rep = check_involution(ctx)
        assert rep.passed
    # directly: two left members commute
    ctx = PhaseContext.seeded(2, 4)
    members = integral_set(ctx, "left").members
    assert canonical_bracket(ctx, members[2], members[3]).is_zero
    assert canonical_bracket(ctx, members[2], members[4]).is_zero


def test_integral_set_routes_and_errors():
    ctx = PhaseContext.seeded(2, 3)
    sos = integral_set(ctx, "left")
    cop = integral_set(ctx, "left", route="coproduct")
    assert set(sos.members) == set(cop.members) == {2, 3}
    assert all(sos.members[m] == cop.members[m] for m in sos.members)
    with pytest.raises(ValueError):
        integral_set(ctx, "left", route="magic")


def test_independence_counts():
    res = check_independence(PhaseContext.seeded(2, 3), seed=0)
    assert res.independent
    assert res.expected == 4
    res = check_independence(PhaseContext.seeded(3, 4), seed=0)
    assert res.independent
    assert res.expected == 4
    assert len(res.attempts) <= 5


def test_independence_rejects_undersized_phase_space():
    with pytest.raises(ValueError):
        check_independence(PhaseContext.seeded(3, 2))
