"""Set-model checks: the fixed enumeration, exact piece minima, and block
family capabilities.

The brute-force helpers at the top are the oracles.  They recompute the
expected answers by exhaustive scan and share no logic with the module under
test, so a bug there cannot hide a matching bug here.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intervalgame import (
    OMEGA,
    CapabilityError,
    ChainValidationError,
    Ordinal,
    PreconditionError,
    ProbeBounds,
    UnsupportedOrderError,
    compare,
    harmonic_chain,
    make_full_lex_blocks,
    parse_order,
    stacked_chain_family,
)
from intervalgame.orders import Rationals, in_open_interval
from intervalgame.sets import (
    EMPTY_PIECE,
    BlockSlice,
    FiniteSet,
    NaturalGrid,
    Singleton,
    chain_from_points,
    chain_singleton_family,
    deterministic_inside,
    enumerated_rationals_presentation,
    gen_probes,
    min_in_interval,
    oracle_chain,
    oracle_enumerated,
    oracle_for_payoff,
    parse_presentation,
    piece_contains,
    presentation_from_points,
    probe_rationals,
    rational_enum,
    rational_index,
)

Q = Rationals()
L1 = parse_order("lex(rev(ord(w)),Q)")


# ---------------------------------------------------------------------------
# oracle helpers


def height(f: Fraction) -> int:
    return max(abs(f.numerator), f.denominator)


def brute_height_block(h: int):
    seen = set()
    for num in range(-h, h + 1):
        for den in range(1, h + 1):
            f = Fraction(num, den)
            if height(f) == h:
                seen.add(f)
    return sorted(seen, key=lambda f: (f.denominator, f.numerator))


def brute_enumeration(count: int):
    out, h = [], 0
    while len(out) < count:
        h += 1
        out.extend(brute_height_block(h))
    return out[:count]


def brute_min(order, members, lower, upper):
    inside = [m for m in members if in_open_interval(order, m, lower, upper)]
    if not inside:
        return None
    best = inside[0]
    for m in inside[1:]:
        if compare(order, m, best) < 0:
            best = m
    return best


# ---------------------------------------------------------------------------
# the fixed enumeration


def test_enumeration_prefix_is_frozen():
    expected = [
        Fraction(-1), Fraction(0), Fraction(1),
        Fraction(-2), Fraction(2), Fraction(-1, 2), Fraction(1, 2),
        Fraction(-3), Fraction(3), Fraction(-3, 2), Fraction(3, 2),
        Fraction(-2, 3), Fraction(-1, 3), Fraction(1, 3), Fraction(2, 3),
        Fraction(-4),
    ]
    assert [rational_enum(k) for k in range(16)] == expected


def test_enumeration_matches_brute_force():
    want = brute_enumeration(400)
    assert [rational_enum(k) for k in range(400)] == want


def test_enumeration_has_no_repeats():
    seen = [rational_enum(k) for k in range(600)]
    assert len(set(seen)) == len(seen)


@given(st.integers(0, 500))
def test_index_inverts_enumeration(n):
    assert rational_index(rational_enum(n)) == n


@given(st.integers(-30, 30), st.integers(1, 30))
def test_enumeration_inverts_index(num, den):
    x = Fraction(num, den)
    assert rational_enum(rational_index(x)) == x


def test_enumeration_rejects_negative_index():
    with pytest.raises(PreconditionError):
        rational_enum(-1)


def test_probe_rationals_filters_by_denominator():
    bounds = ProbeBounds(max_denominator=2, per_block=10)
    got = probe_rationals(bounds)
    assert len(got) == 10
    assert all(q.denominator <= 2 for q in got)
    want = [q for q in brute_enumeration(200) if q.denominator <= 2][:10]
    assert got == want


# ---------------------------------------------------------------------------
# piece minima


finite_members = st.lists(
    st.fractions(min_value=-20, max_value=20, max_denominator=16),
    min_size=0,
    max_size=8,
)
bound_fracs = st.fractions(min_value=-25, max_value=25, max_denominator=16)


@given(finite_members, bound_fracs, bound_fracs)
def test_finite_set_min_matches_brute_scan(members, b1, b2):
    if b1 == b2:
        return
    lower, upper = (b1, b2) if b1 < b2 else (b2, b1)
    piece = FiniteSet(tuple(members))
    for lo, hi in [(lower, upper), (None, upper), (lower, None), (None, None)]:
        assert min_in_interval(Q, piece, lo, hi) == brute_min(Q, members, lo, hi)


@given(bound_fracs, bound_fracs, bound_fracs)
def test_singleton_min(pt, b1, b2):
    if b1 == b2:
        return
    lower, upper = (b1, b2) if b1 < b2 else (b2, b1)
    got = min_in_interval(Q, Singleton(pt), lower, upper)
    assert got == (pt if lower < pt < upper else None)


def test_min_is_strict_at_the_endpoints():
    piece = FiniteSet((Fraction(1), Fraction(2)))
    assert min_in_interval(Q, piece, Fraction(1), Fraction(3)) == Fraction(2)
    assert min_in_interval(Q, piece, Fraction(0), Fraction(2)) == Fraction(1)
    assert min_in_interval(Q, piece, Fraction(1), Fraction(2)) is None


def test_min_rejects_inverted_interval():
    with pytest.raises(PreconditionError):
        min_in_interval(Q, EMPTY_PIECE, Fraction(2), Fraction(1))


@given(
    st.fractions(min_value=-10, max_value=10, max_denominator=8),
    bound_fracs,
    bound_fracs,
)
def test_natural_grid_min_matches_scan(start, b1, b2):
    if b1 == b2:
        return
    lower, upper = (b1, b2) if b1 < b2 else (b2, b1)
    grid = NaturalGrid(start)
    sample = [start + k for k in range(80)]
    for lo, hi in [(lower, upper), (None, upper), (lower, None)]:
        want = brute_min(Q, sample, lo, hi)
        if hi is None and want is None:
            continue  # scan window too short to witness the unbounded tail
        assert min_in_interval(Q, grid, lo, hi) == want, (start, lo, hi)


def test_block_slice_min():
    beta = Ordinal.from_int(2)
    inner = FiniteSet((Fraction(0), Fraction(5)))
    piece = BlockSlice(beta, inner)
    three = Ordinal.from_int(3)
    one = Ordinal.from_int(1)
    # interval covering the whole block: block 3 sits below, block 1 above
    got = min_in_interval(L1, piece, (three, Fraction(0)), (one, Fraction(0)))
    assert got == (beta, Fraction(0))
    # lower bound inside the same block trims the inner trace
    got = min_in_interval(L1, piece, (beta, Fraction(1)), (one, Fraction(0)))
    assert got == (beta, Fraction(5))
    # empty trace: the interval misses the block entirely
    assert (
        min_in_interval(L1, piece, (one, Fraction(0)), (one, Fraction(9))) is None
    )
    # unbounded sides
    assert min_in_interval(L1, piece, None, (three, Fraction(0))) is None
    assert min_in_interval(L1, piece, (three, Fraction(0)), None) == (beta, Fraction(0))


def test_piece_contains():
    assert piece_contains(Q, Singleton(Fraction(1, 2)), Fraction(1, 2))
    assert not piece_contains(Q, Singleton(Fraction(1, 2)), Fraction(1, 3))
    assert piece_contains(Q, FiniteSet((Fraction(1), Fraction(2))), Fraction(2))
    assert not piece_contains(Q, EMPTY_PIECE, Fraction(0))
    grid = NaturalGrid(Fraction(1, 2))
    assert piece_contains(Q, grid, Fraction(7, 2))
    assert not piece_contains(Q, grid, Fraction(-1, 2))
    assert not piece_contains(Q, grid, Fraction(1, 3))
    sl = BlockSlice(Ordinal.from_int(1), Singleton(Fraction(0)))
    assert piece_contains(L1, sl, (Ordinal.from_int(1), Fraction(0)))
    assert not piece_contains(L1, sl, (Ordinal.from_int(2), Fraction(0)))


def test_deterministic_inside():
    assert deterministic_inside(Q, Fraction(0), Fraction(1)) == Fraction(1, 2)
    assert deterministic_inside(Q, Fraction(3), None) == Fraction(4)
    assert deterministic_inside(Q, None, Fraction(3)) == Fraction(2)
    with pytest.raises(PreconditionError):
        deterministic_inside(Q, None, None)


# ---------------------------------------------------------------------------
# staged presentations


def test_enumerated_presentation_pieces_follow_the_enumeration():
    pres = enumerated_rationals_presentation(12)
    for k in range(12):
        piece = pres.piece_at(k)
        assert isinstance(piece, Singleton)
        assert piece.point == rational_enum(k)
        assert pres.member_index(rational_enum(k)) == k
    assert pres.piece_at(12) == EMPTY_PIECE
    assert pres.member_index(rational_enum(12)) is None
    assert pres.member_index(rational_enum(11)) == 11


def test_presentation_from_points_keeps_first_index_for_repeats():
    pres = presentation_from_points(Q, [1, 2, 1], "finite{1,2,1}")
    assert pres.member_index(Fraction(1)) == 0
    assert pres.member_index(Fraction(2)) == 1
    assert pres.piece_at(2) == Singleton(Fraction(1))
    assert pres.piece_at(3) == EMPTY_PIECE


def test_presentation_rejects_negative_stage():
    pres = presentation_from_points(Q, [0], "finite{0}")
    with pytest.raises(PreconditionError):
        pres.piece_at(-1)


def test_parse_presentation_errors():
    with pytest.raises(PreconditionError):
        parse_presentation(Q, "enumerated(f,8)")
    with pytest.raises(UnsupportedOrderError):
        parse_presentation(L1, "enumerated(e,8)")


# ---------------------------------------------------------------------------
# chains


def test_harmonic_chain_values():
    chain = harmonic_chain()
    assert [chain.point_at(n) for n in range(4)] == [
        Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4),
    ]
    assert chain.inf_value == Fraction(0)


@given(st.fractions(min_value=-2, max_value=2, max_denominator=40))
def test_harmonic_first_below_matches_scan(a):
    chain = harmonic_chain()
    got = chain.first_index_below(a)
    scan = next((n for n in range(400) if Fraction(1, n + 1) < a), None)
    if scan is None:
        # every scanned element is >= a, which for the harmonic chain means
        # a <= 0 (the tail eventually drops below any positive value)
        assert a <= Fraction(1, 400)
        if a <= 0:
            assert got is None
    else:
        assert got == scan


def test_harmonic_infimum_not_attained():
    chain = harmonic_chain()
    assert chain.first_index_below(Fraction(0)) is None
    assert chain.index_of(Q, Fraction(0)) is None
    assert chain.index_of(Q, Fraction(1, 5)) == 4
    assert chain.index_of(Q, Fraction(2, 5)) is None


def test_chain_from_points_rejects_non_decreasing():
    with pytest.raises(ChainValidationError) as info:
        chain_from_points(Q, [Fraction(1), Fraction(1, 3), Fraction(1, 2)], "bad")
    assert info.value.index == 1
    assert info.value.earlier == Fraction(1, 3)
    assert info.value.later == Fraction(1, 2)
    with pytest.raises(ChainValidationError):
        chain_from_points(Q, [Fraction(1), Fraction(1)], "flat")
    with pytest.raises(PreconditionError):
        chain_from_points(Q, [], "empty")


# ---------------------------------------------------------------------------
# full lex blocks


def test_full_blocks_geometry():
    fam = make_full_lex_blocks(L1)
    assert fam.gamma == OMEGA
    # later blocks sit lower: every probe of block 3 is below every probe of
    # block 1
    lo = fam.block_probes(Ordinal.from_int(3), 6)
    hi = fam.block_probes(Ordinal.from_int(1), 6)
    for x in lo:
        for y in hi:
            assert compare(L1, x, y) < 0


def test_full_blocks_cover_every_point():
    fam = make_full_lex_blocks(L1)
    for alpha in range(5):
        for k in range(10):
            pt = (Ordinal.from_int(alpha), rational_enum(k))
            assert fam.block_index(pt) == Ordinal.from_int(alpha)
            assert fam.block_contains(Ordinal.from_int(alpha), pt)
            assert not fam.block_contains(Ordinal.from_int(alpha + 1), pt)


def test_full_blocks_least_below_is_the_own_block():
    fam = make_full_lex_blocks(L1)
    a = (Ordinal.from_int(2), Fraction(1, 3))
    alpha, witness = fam.least_below(a)
    assert alpha == Ordinal.from_int(2)
    assert fam.block_contains(alpha, witness)
    assert compare(L1, witness, a) < 0


def test_full_blocks_separator_cases():
    fam = make_full_lex_blocks(L1)
    two = Ordinal.from_int(2)
    # lower's block is still above the bound: no separating move exists
    assert fam.separator(two, (Ordinal.from_int(1), Fraction(0)), None) is None
    # lower's block reached the bound: a move inside the same block works
    got = fam.separator(two, (two, Fraction(0)), (two, Fraction(1)))
    assert got == (two, Fraction(1, 2))
    got = fam.separator(two, (two, Fraction(0)), (Ordinal.from_int(1), Fraction(0)))
    assert got == (two, Fraction(1))
    # bound zero means the whole family is already excluded
    got = fam.separator(
        Ordinal(), (Ordinal.from_int(0), Fraction(0)), (Ordinal.from_int(0), Fraction(1))
    )
    assert got == (Ordinal.from_int(0), Fraction(1, 2))


def test_full_blocks_refuse_wrong_orders():
    with pytest.raises(UnsupportedOrderError):
        make_full_lex_blocks(Q)
    with pytest.raises(UnsupportedOrderError):
        make_full_lex_blocks(parse_order("lex(rev(ord(0)),Q)"))


# ---------------------------------------------------------------------------
# chain singleton families


def test_chain_family_capability_requirements():
    incomplete = harmonic_chain()
    incomplete.inf_value = None
    with pytest.raises(CapabilityError):
        chain_singleton_family(Q, incomplete)


def test_chain_family_separator():
    fam = chain_singleton_family(Q, harmonic_chain())
    assert fam.gamma == OMEGA
    # finite bound: the move is the last chain element above the cut
    assert fam.separator(Ordinal.from_int(2), Fraction(0), Fraction(1)) == Fraction(1, 2)
    # whole-family bound: the infimum, which fails when the interval floor
    # already sits at or above it
    assert fam.separator(OMEGA, Fraction(0), Fraction(1)) is None
    assert fam.separator(OMEGA, Fraction(-1), Fraction(1)) == Fraction(0)
    # infimum at or above the ceiling falls back to a plain inside point
    assert fam.separator(OMEGA, Fraction(-2), Fraction(-1)) == Fraction(-3, 2)


def test_chain_family_least_below():
    fam = chain_singleton_family(Q, harmonic_chain())
    alpha, witness = fam.least_below(Fraction(2, 5))
    assert alpha == Ordinal.from_int(2)
    assert witness == Fraction(1, 3)
    assert fam.least_below(Fraction(0)) is None
    assert fam.least_below(Fraction(-3)) is None


def test_finite_chain_family_scans_without_capabilities():
    chain = chain_from_points(Q, [Fraction(3), Fraction(1), Fraction(-2)], "steps")
    fam = chain_singleton_family(Q, chain)
    assert fam.gamma == Ordinal.from_int(3)
    alpha, witness = fam.least_below(Fraction(2))
    assert (alpha, witness) == (Ordinal.from_int(1), Fraction(1))
    assert fam.least_below(Fraction(-5)) is None
    assert fam.block_index(Fraction(1)) == Ordinal.from_int(1)
    assert fam.block_index(Fraction(0)) is None
    # whole-family separator uses the last element
    assert fam.separator(Ordinal.from_int(3), Fraction(-4), Fraction(0)) == Fraction(-2)


# ---------------------------------------------------------------------------
# stacked chains


def boundary(j: int) -> Fraction:
    return Fraction(-j, j + 1)


def stacked_element(alpha: int, k: int) -> Fraction:
    low = boundary(alpha + 1)
    return low + (boundary(alpha) - low) / (k + 1)


def test_stacked_chain_layout():
    fam = stacked_chain_family()
    assert fam.gamma == OMEGA
    for alpha in range(6):
        for k in range(6):
            x = stacked_element(alpha, k)
            assert boundary(alpha + 1) < x <= boundary(alpha)
            assert fam.block_index(x) == Ordinal.from_int(alpha)
            assert fam.block_contains(Ordinal.from_int(alpha), x)
    # each boundary is the top element of its own block
    assert fam.block_index(boundary(1)) == Ordinal.from_int(1)
    assert fam.block_index(boundary(0)) == Ordinal.from_int(0)
    assert fam.block_index(Fraction(-1)) is None
    assert fam.block_index(Fraction(1, 2)) is None
    # a point inside block 1's span but off its chain is not a member
    assert fam.block_index(Fraction(-3, 5)) is None


def test_stacked_chain_least_below_walks_down():
    fam = stacked_chain_family()
    # -3/4 is the top of block 3, so blocks 0..2 sit entirely above it and
    # block 3 itself holds the first elements below
    alpha, witness = fam.least_below(Fraction(-3, 4))
    assert alpha == Ordinal.from_int(3)
    assert witness < Fraction(-3, 4)
    assert fam.block_contains(alpha, witness)
    # strictly inside block 1's span the own block still answers
    alpha, witness = fam.least_below(Fraction(-7, 12))
    assert alpha == Ordinal.from_int(1)
    assert witness < Fraction(-7, 12)
    assert fam.least_below(Fraction(-1)) is None


def test_stacked_chain_separator_at_boundaries():
    fam = stacked_chain_family()
    # bound j separates along t_j when the interval allows it
    assert fam.separator(Ordinal.from_int(1), Fraction(-3, 4), Fraction(0)) == boundary(1)
    # the boundary at or below the floor is no use
    assert fam.separator(Ordinal.from_int(1), boundary(1), Fraction(0)) is None
    # whole-family separator needs room below -1
    assert fam.separator(OMEGA, Fraction(-3, 4), Fraction(0)) is None
    assert fam.separator(OMEGA, Fraction(-2), Fraction(0)) == Fraction(-1)


def test_stacked_chain_truncation():
    fam = stacked_chain_family(2)
    assert fam.gamma == Ordinal.from_int(2)
    assert fam.block_index(stacked_element(1, 3)) == Ordinal.from_int(1)
    assert fam.block_index(stacked_element(2, 3)) is None
    assert fam.least_below(boundary(2)) is None
    assert fam.separator(Ordinal.from_int(2), Fraction(-5, 6), Fraction(0)) == boundary(2)


def test_stacked_chain_nested_payoffs_are_chain_families():
    fam = stacked_chain_family()
    inner = fam.block_payoff(Ordinal.from_int(1))
    assert inner.gamma == OMEGA
    # the inner family's blocks are the chain points of block 1
    assert inner.block_contains(Ordinal.from_int(0), stacked_element(1, 0))
    assert inner.block_contains(Ordinal.from_int(3), stacked_element(1, 3))


# ---------------------------------------------------------------------------
# oracles and probes


def test_oracle_probes_respect_bounds():
    bounds = ProbeBounds(max_denominator=8, per_block=12)
    probes = gen_probes(oracle_enumerated(64), bounds)
    assert probes
    assert len(probes) == len(set(probes))
    for p in probes:
        assert p.denominator <= 8


def test_full_grid_oracle_covers_sampled_blocks():
    oracle = oracle_for_payoff(L1, "fullblocks")
    bounds = ProbeBounds(
        max_denominator=8,
        block_indices=(Ordinal.from_int(0), Ordinal.from_int(2)),
        per_block=5,
    )
    probes = gen_probes(oracle, bounds)
    blocks = {p[0] for p in probes}
    assert blocks == {Ordinal.from_int(0), Ordinal.from_int(2)}
    for p in probes:
        assert oracle.contains(p)


def test_chain_oracle_membership():
    oracle = oracle_chain(Q, harmonic_chain())
    assert oracle.contains(Fraction(1, 9))
    assert not oracle.contains(Fraction(0))
    probes = gen_probes(oracle, ProbeBounds(max_denominator=16, per_block=10))
    assert Fraction(1, 2) in probes
    for p in probes:
        assert oracle.contains(p)


def test_stacked_oracle_agrees_with_family_membership():
    oracle = oracle_for_payoff(Q, "stackedchains(w)")
    fam = stacked_chain_family()
    for alpha in range(4):
        for k in range(4):
            x = stacked_element(alpha, k)
            assert oracle.contains(x)
            assert fam.block_index(x) is not None
    assert not oracle.contains(Fraction(-1))
    assert not oracle.contains(Fraction(-9, 10) + Fraction(1, 97))
