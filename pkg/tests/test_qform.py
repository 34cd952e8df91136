"""Tests for src/qform.py"""

import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from src.cycles import fake_point_poly, linear_cycle_poly
from src.errors import ArityMismatch, DegreeMismatch, NotInColonIdeal, NotInIdeal
from src.exactfield import zeta_pow
from src.jacobian import HypersurfaceSpec, colon_piece
from src.polyring import (
    Polynomial,
    binary_form_from_roots,
    fermat_form,
    linear_form,
    monomial_basis,
    parse_polynomial,
)
from src.qform import (
    DEGENERATE,
    NOT_SMOOTH,
    SMOOTH_EXPECTED,
    fake_point_certificate,
    koszul_decompose,
    qff_join_check,
    qff_join_predicate,
    qff_pair,
    qff_vanishes_on_degree,
    qff_with_decompositions,
    quotient_class,
    two_point_witness,
)


@pytest.fixture
def surface_cycle(fermat_cubic_surface):
    """The linear cycle x0 = zeta_6 x1, x2 = -x3 on the Fermat cubic surface."""
    return linear_cycle_poly(3, 2, [zeta_pow(6, 1), zeta_pow(6, 3)])


@pytest.fixture
def fake_cubic_point(split_cubic):
    """Fake point c = 2 on x0 (x0 - x1)(x0 + x1)."""
    return fake_point_poly(split_cubic, Fraction(2))


def _random_colon_element(rng: random.Random, spec, cycle, degree: int) -> Polynomial:
    G = Polynomial.zero(spec.nvars)
    while not G:
        for g in colon_piece(spec, cycle, degree).polynomials():
            G = G + g.scale(rng.randint(-2, 2))
    return G


class TestKoszulDecompose:
    """Tests for koszul_decompose."""

    def test_recombines(self, fermat_cubic_surface):
        """sum Q_i dF/dx_i reproduces A."""
        spec = fermat_cubic_surface
        A = spec.partials[0] * parse_polynomial("x1 + 2*x3", 4) + spec.partials[2] * Polynomial.variable(4, 0)
        assert koszul_decompose(spec, A).combine(spec) == A

    def test_binary_block(self, split_cubic):
        """Non-Fermat blocks decompose too."""
        A = split_cubic.partials[1] * Polynomial.variable(2, 1)
        assert koszul_decompose(split_cubic, A).combine(split_cubic) == A

    def test_not_in_ideal(self, fermat_cubic_curve):
        """x0 x1 is not in J^F for x0^3 + x1^3."""
        with pytest.raises(NotInIdeal):
            koszul_decompose(fermat_cubic_curve, Polynomial.monomial(2, (1, 1)))

    def test_zero(self, fermat_cubic_curve):
        """The zero polynomial has zero components."""
        decomposition = koszul_decompose(fermat_cubic_curve, Polynomial.zero(2))
        assert all(q.is_zero() for q in decomposition.components)


class TestQffPair:
    """Tests for qff_pair and its algebraic properties."""

    def test_fake_point_constant(self, split_cubic, fake_cubic_point):
        """q(x0 - c x1, x0 - c x1) = -d F(c, 1) = -18 for c = 2."""
        G = parse_polynomial("x0 - 2*x1")
        value = qff_pair(split_cubic, fake_cubic_point, G, G)
        assert value.representative == Polynomial.constant(2, Fraction(-18))
        assert value.degree == 0
        assert not value.is_zero

    def test_honest_point_vanishes(self, fermat_cubic_curve, cubic_point):
        """For a genuine point F(c, 1) = 0 and q vanishes."""
        G = linear_form(2, {0: 1, 1: -zeta_pow(6, 1)})
        assert qff_pair(fermat_cubic_curve, cubic_point, G, G).is_zero

    def test_rejects_non_colon_element(self, fermat_cubic_curve, cubic_point):
        """G outside the colon ideal raises NotInColonIdeal."""
        G = Polynomial.variable(2, 0)
        with pytest.raises(NotInColonIdeal):
            qff_pair(fermat_cubic_curve, cubic_point, G, G)

    def test_randomized_symmetry(self, fermat_cubic_surface, surface_cycle):
        """q(G, H) and q(H, G) have the same class."""
        rng = random.Random(31)
        for _ in range(5):
            G = _random_colon_element(rng, fermat_cubic_surface, surface_cycle, 2)
            H = _random_colon_element(rng, fermat_cubic_surface, surface_cycle, 2)
            left = qff_pair(fermat_cubic_surface, surface_cycle, G, H)
            right = qff_pair(fermat_cubic_surface, surface_cycle, H, G)
            assert left.class_coords == right.class_coords

    def test_randomized_bilinearity(self, fermat_cubic_surface, surface_cycle):
        """q(G1 + G2, H) = q(G1, H) + q(G2, H) in R^F/<P>."""
        rng = random.Random(37)
        spec = fermat_cubic_surface
        for _ in range(5):
            G1, G2, H = (_random_colon_element(rng, spec, surface_cycle, 2) for _ in range(3))
            if not G1 + G2:
                continue
            total = qff_pair(spec, surface_cycle, G1 + G2, H).representative
            parts = (
                qff_pair(spec, surface_cycle, G1, H).representative
                + qff_pair(spec, surface_cycle, G2, H).representative
            )
            assert quotient_class(spec, surface_cycle, total - parts) == {}

    def test_jacobian_elements_pair_to_zero(self, fermat_cubic_surface, surface_cycle):
        """q vanishes when one argument lies in J^F."""
        rng = random.Random(41)
        spec = fermat_cubic_surface
        for i in range(4):
            G = spec.partials[i]
            H = _random_colon_element(rng, spec, surface_cycle, 2)
            assert qff_pair(spec, surface_cycle, G, H).is_zero

    def test_decomposition_independence(self, fermat_cubic_surface, surface_cycle):
        """Adding a Koszul syzygy to a decomposition leaves the class unchanged."""
        spec = fermat_cubic_surface
        rng = random.Random(47)
        G = _random_colon_element(rng, spec, surface_cycle, 2)
        H = _random_colon_element(rng, spec, surface_cycle, 2)
        components = list(koszul_decompose(spec, G * surface_cycle.P).components)
        components[0] = components[0] + spec.partials[1]
        components[1] = components[1] - spec.partials[0]
        H_components = koszul_decompose(spec, H * surface_cycle.P).components
        shifted = qff_with_decompositions(spec, surface_cycle, G, H, components, H_components)
        plain = qff_pair(spec, surface_cycle, G, H)
        assert shifted.class_coords == plain.class_coords

    def test_wrong_decomposition_rejected(self, split_cubic, fake_cubic_point):
        """A decomposition that does not reproduce G*P is rejected."""
        G = parse_polynomial("x0 - 2*x1")
        components = [Polynomial.constant(2, 1), Polynomial.constant(2, 1)]
        with pytest.raises(NotInColonIdeal):
            qff_with_decompositions(split_cubic, fake_cubic_point, G, G, components, components)


@pytest.fixture(params=[3, 4], ids=["cubic", "quartic"])
def fermat_surface_case(request):
    """A linear cycle on the Fermat surface of degree 3 or 4."""
    d = request.param
    spec = HypersurfaceSpec(fermat_form(4, d), "grevlex")
    return spec, linear_cycle_poly(d, 2, [zeta_pow(2 * d, 1), zeta_pow(2 * d, 3)])


def _random_monomial(rng: random.Random, nvars: int, degree: int) -> Polynomial:
    return Polynomial.monomial(nvars, rng.choice(monomial_basis(nvars, degree)))


def _random_syzygy_shift(rng: random.Random, spec, components) -> list[Polynomial]:
    """Add m (F_j e_i - F_i e_j) for random i < j and monomials m of matching degree."""
    shifted = list(components)
    degree = next(q.degree for q in components if q) - (spec.d - 1)
    for _ in range(2):
        i, j = sorted(rng.sample(range(spec.nvars), 2))
        m = _random_monomial(rng, spec.nvars, degree).scale(Fraction(rng.choice((-2, -1, 1, 3))))
        shifted[i] = shifted[i] + m * spec.partials[j]
        shifted[j] = shifted[j] - m * spec.partials[i]
    return shifted


class TestRandomizedQff:
    """Seeded algebraic identities of q on cubic and quartic surfaces."""

    def test_symmetry(self, fermat_surface_case):
        """q(G, H) and q(H, G) have the same class."""
        spec, cycle = fermat_surface_case
        rng = random.Random(300 + spec.d)
        for _ in range(8):
            G = _random_colon_element(rng, spec, cycle, 2)
            H = _random_colon_element(rng, spec, cycle, 2)
            left = qff_pair(spec, cycle, G, H)
            right = qff_pair(spec, cycle, H, G)
            assert quotient_class(spec, cycle, left.representative - right.representative) == {}

    def test_bilinearity(self, fermat_surface_case):
        """q(G1 + G2, H) = q(G1, H) + q(G2, H) in R^F/<P>."""
        spec, cycle = fermat_surface_case
        rng = random.Random(310 + spec.d)
        for _ in range(6):
            G1, G2, H = (_random_colon_element(rng, spec, cycle, 2) for _ in range(3))
            if not G1 + G2:
                continue
            total = qff_pair(spec, cycle, G1 + G2, H).representative
            parts = qff_pair(spec, cycle, G1, H).representative + qff_pair(spec, cycle, G2, H).representative
            assert quotient_class(spec, cycle, total - parts) == {}

    def test_scalar_homogeneity(self, fermat_surface_case):
        """q(aG, H) = a q(G, H) for rational and cyclotomic a."""
        spec, cycle = fermat_surface_case
        rng = random.Random(320 + spec.d)
        for _ in range(4):
            a = Fraction(rng.randint(1, 5), rng.randint(1, 3)) + zeta_pow(2 * spec.d, rng.randrange(2 * spec.d))
            G = _random_colon_element(rng, spec, cycle, 2)
            H = _random_colon_element(rng, spec, cycle, 2)
            scaled = qff_pair(spec, cycle, G.scale(a), H).representative
            plain = qff_pair(spec, cycle, G, H).representative
            assert quotient_class(spec, cycle, scaled - plain.scale(a)) == {}

    def test_monomial_times_partial_pairs_to_zero(self, fermat_surface_case):
        """q(G, m dF/dx_i) vanishes for a random monomial m."""
        spec, cycle = fermat_surface_case
        rng = random.Random(330 + spec.d)
        for _ in range(6):
            i = rng.randrange(spec.nvars)
            H = _random_monomial(rng, spec.nvars, 1) * spec.partials[i]
            G = _random_colon_element(rng, spec, cycle, 1)
            assert qff_pair(spec, cycle, G, H).is_zero
            assert qff_pair(spec, cycle, H, G).is_zero

    def test_random_syzygies_leave_class_unchanged(self, fermat_surface_case):
        """Shifting both decompositions by Koszul syzygies keeps the class of q."""
        spec, cycle = fermat_surface_case
        rng = random.Random(340 + spec.d)
        for _ in range(6):
            G = _random_colon_element(rng, spec, cycle, 2)
            H = _random_colon_element(rng, spec, cycle, 3)
            components_g = _random_syzygy_shift(rng, spec, koszul_decompose(spec, G * cycle.P).components)
            components_h = _random_syzygy_shift(rng, spec, koszul_decompose(spec, H * cycle.P).components)
            shifted = qff_with_decompositions(spec, cycle, G, H, components_g, components_h)
            plain = qff_pair(spec, cycle, G, H)
            assert quotient_class(spec, cycle, shifted.representative - plain.representative) == {}

    def test_cycle_span_cached_across_threads(self, fermat_surface_case):
        """Concurrent reductions agree and share one cached span."""
        spec, cycle = fermat_surface_case
        rng = random.Random(350 + spec.d)
        degree = cycle.P.degree + 1
        monomial = _random_monomial(rng, spec.nvars, degree)
        poly = monomial + Polynomial.variable(spec.nvars, 0) * cycle.P
        with ThreadPoolExecutor(max_workers=4) as pool:
            classes = list(pool.map(lambda _: quotient_class(spec, cycle, poly), range(8)))
        assert all(c == classes[0] for c in classes)
        assert ("cycle-span", cycle.P, degree) in spec.cache
        assert quotient_class(spec, cycle, monomial) == classes[0]


class TestQffVanishing:
    """Tests for qff_vanishes_on_degree."""

    def test_linear_cycle_vanishes(self, fermat_cubic_surface, surface_cycle):
        """q vanishes on the degree-one colon piece of a linear cycle."""
        result = qff_vanishes_on_degree(fermat_cubic_surface, surface_cycle, 1)
        assert result.vanishes
        assert result.pairs_checked == 3

    def test_fake_point_does_not_vanish(self, split_cubic, fake_cubic_point):
        """A fake point has a witness pair in degree one."""
        result = qff_vanishes_on_degree(split_cubic, fake_cubic_point, 1)
        assert not result.vanishes
        assert result.witness is not None
        assert "witness" in result.to_dict()

    def test_workers_give_same_answer(self, fermat_cubic_surface, surface_cycle):
        """Threaded evaluation agrees with the sequential one."""
        sequential = qff_vanishes_on_degree(fermat_cubic_surface, surface_cycle, 2)
        threaded = qff_vanishes_on_degree(fermat_cubic_surface, surface_cycle, 2, workers=3)
        assert sequential.vanishes == threaded.vanishes


class TestJoinIdentity:
    """Tests for qff_join_check and qff_join_predicate."""

    def test_points_with_scalars(self, fermat_cubic_curve, cubic_point):
        """The join identity holds for scalar multipliers."""
        G = linear_form(2, {0: 1, 1: -zeta_pow(6, 1)})
        rng = random.Random(43)
        for _ in range(3):
            A1, A2, B1, B2 = (Fraction(rng.randint(1, 4)) for _ in range(4))
            assert qff_join_check(
                fermat_cubic_curve, fermat_cubic_curve, cubic_point, cubic_point, G, G, G, G, A1, A2, B1, B2
            )

    def test_fake_factor(self, split_cubic, fake_cubic_point, fermat_cubic_curve, cubic_point):
        """The identity holds with a fake point on one side."""
        G1 = parse_polynomial("x0 - 2*x1")
        G2 = linear_form(2, {0: 1, 1: -zeta_pow(6, 1)})
        assert qff_join_check(split_cubic, fermat_cubic_curve, fake_cubic_point, cubic_point, G1, G1, G2, G2)

    def test_predicate_for_point(self, fermat_cubic_curve, cubic_point):
        """An honest point has no failing (l, j)."""
        assert qff_join_predicate(fermat_cubic_curve, cubic_point, 1, 2) == []

    def test_predicate_for_fake_point(self, split_cubic, fake_cubic_point):
        """A fake point fails in degree one with no multiplier."""
        assert qff_join_predicate(split_cubic, fake_cubic_point, 1, 2) == [(1, 0)]


class TestTwoPointWitness:
    """Tests for two_point_witness."""

    def test_equal_multiplicities_zero(self):
        """r = rcheck gives determinant zero."""
        report = two_point_witness(4, 3, 1, 1)
        assert report.determinant == 0
        assert report.matches

    def test_distinct_multiplicities_nonzero(self):
        """r != rcheck gives the closed-form nonzero determinant."""
        report = two_point_witness(5, 5, 1, 2)
        assert report.determinant != 0
        assert report.matches
        assert report.to_dict()["matches"] is True

    def test_cubic_is_degenerate(self):
        """d = 3 has no room for the witness."""
        report = two_point_witness(3, 3, 1, 2)
        assert report.verdict == DEGENERATE
        assert "determinant" not in report.to_dict()

    def test_even_alpha_rejected(self):
        """alpha0 must be odd."""
        with pytest.raises(ValueError):
            two_point_witness(4, 4, 1, 2)

    def test_zero_multiplicity_rejected(self):
        """Multiplicities must be nonzero."""
        with pytest.raises(ValueError):
            two_point_witness(4, 3, 0, 2)


class TestFakePointCertificate:
    """Tests for fake_point_certificate."""

    @pytest.fixture
    def split_quartic(self) -> HypersurfaceSpec:
        return HypersurfaceSpec(binary_form_from_roots([0, 1, -1, 2]), "grevlex")

    def test_fake_factor_certifies(self, split_quartic, fermat_quartic_curve):
        """A fake point factor gives NotSmoothCertified with constant -4 F(3, 1) = -96."""
        report = fake_point_certificate([split_quartic, fermat_quartic_curve], [Fraction(3), zeta_pow(8, 1)])
        assert report.verdict == NOT_SMOOTH
        assert not report.condition_holds
        fake, honest = report.factors
        assert fake.kind == "fake"
        assert fake.constant == -96
        assert fake.constant == fake.expected
        assert fake.multiplier is not None
        assert honest.kind == "point"

    def test_all_points(self, split_quartic, fermat_quartic_curve):
        """Only honest points gives SmoothExpected."""
        report = fake_point_certificate([split_quartic, fermat_quartic_curve], [Fraction(0), zeta_pow(8, 1)])
        assert report.verdict == SMOOTH_EXPECTED
        assert report.to_dict()["factors"][0]["kind"] == "point"

    def test_parameter_count(self, split_quartic):
        """One parameter per factor."""
        with pytest.raises(ArityMismatch):
            fake_point_certificate([split_quartic], [Fraction(3), Fraction(4)])

    def test_degree_mismatch(self, split_quartic, fermat_cubic_curve):
        """Factors must share a degree."""
        with pytest.raises(DegreeMismatch):
            fake_point_certificate([split_quartic, fermat_cubic_curve], [Fraction(3), zeta_pow(6, 1)])
