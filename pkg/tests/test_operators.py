import random

import pytest

from jetcalc import CDiffOperator, ShapeMismatchError, VectorOperator, random_expr
from jetcalc.multiindex import MultiIndex
from jetcalc.calculus import random_vector_operator


def d_x(bundle, coeff=None):
    op = CDiffOperator.total_derivative(bundle, (1,))
    return op if coeff is None else CDiffOperator(bundle, 1, 1, {(0, 0): {(1,): coeff}})


def random_cdiff(bundle, seed, rows, cols, max_order=2):
    rng = random.Random(seed)
    entries = {}
    for i in range(rows):
        for j in range(cols):
            for _ in range(rng.randint(0, 2)):
                sigma = MultiIndex(tuple(rng.randint(0, max_order) for _ in range(bundle.n)))
                if sigma.order > max_order:
                    continue
                coeff = random_expr(bundle, rng.randrange(2**30), max_jet_order=1, max_degree=1)
                cell = entries.setdefault((i, j), {})
                cell[sigma] = cell.get(sigma, bundle.zero()) + coeff
    return CDiffOperator(bundle, rows, cols, entries)


class TestApply:
    def test_first_order_action(self, intro_pair):
        # expected value computed with the expression-level total derivative,
        # independently of the operator plumbing
        b, f, g = intro_pair
        p = b.jet(0, (1,))
        theta = d_x(b, 2 * p)
        expected = 2 * p * g[0].total_derivative(0)
        assert theta.apply(g) == VectorOperator([expected])

    def test_identity(self, plane_bundle):
        g = random_vector_operator(plane_bundle, 9)
        assert CDiffOperator.identity(plane_bundle).apply(g) == g

    def test_zero(self, plane_bundle):
        g = random_vector_operator(plane_bundle, 10)
        out = CDiffOperator.zero(plane_bundle).apply(g)
        assert out.is_zero()

    def test_shape_mismatch(self, plane_bundle):
        theta = CDiffOperator.identity(plane_bundle)
        with pytest.raises(ShapeMismatchError):
            theta.apply(VectorOperator([plane_bundle.fiber_var(0)]))


class TestCompose:
    def test_monomials_stack(self, scalar_bundle):
        b = scalar_bundle
        assert d_x(b).compose(d_x(b)) == CDiffOperator.total_derivative(b, (2,))

    def test_coefficient_passes_left(self, scalar_bundle):
        b = scalar_bundle
        p = b.jet(0, (1,))
        left = d_x(b, 2 * p)
        expected = CDiffOperator(b, 1, 1, {(0, 0): {(2,): 2 * p}})
        assert left.compose(d_x(b)) == expected

    def test_leibniz_expansion(self, scalar_bundle):
        b = scalar_bundle
        p, p2 = b.jet(0, (1,)), b.jet(0, (2,))
        expected = CDiffOperator(b, 1, 1, {(0, 0): {(2,): 2 * p, (1,): 2 * p2}})
        assert d_x(b).compose(d_x(b, 2 * p)) == expected

    def test_apply_homomorphism(self, plane_bundle):
        for seed in range(15):
            a = random_cdiff(plane_bundle, seed, 2, 2)
            b = random_cdiff(plane_bundle, seed + 100, 2, 2)
            g = random_vector_operator(plane_bundle, seed + 200)
            assert a.compose(b).apply(g) == a.apply(b.apply(g))

    def test_rectangular_shapes(self, plane_bundle):
        a = random_cdiff(plane_bundle, 1, 1, 2)
        b = random_cdiff(plane_bundle, 2, 2, 2)
        g = random_vector_operator(plane_bundle, 3)
        assert a.compose(b).apply(g) == a.apply(b.apply(g))
        with pytest.raises(ShapeMismatchError):
            b.compose(CDiffOperator.zero(plane_bundle, 1, 2))


class TestCommutator:
    def test_running_example(self, intro_pair):
        b, f, g = intro_pair
        p, p2 = b.jet(0, (1,)), b.jet(0, (2,))
        lhs = d_x(b, 2 * p).commutator(d_x(b))
        assert lhs == CDiffOperator(b, 1, 1, {(0, 0): {(1,): -2 * p2}})

    def test_self_commutator_vanishes(self, plane_bundle):
        theta = random_cdiff(plane_bundle, 4, 2, 2)
        assert theta.commutator(theta).is_zero()

    def test_multiplication_operator(self, scalar_bundle):
        b = scalar_bundle
        u_times = CDiffOperator.multiplication(b.fiber_var(0))
        assert d_x(b).commutator(u_times) == CDiffOperator.multiplication(b.jet(0, (1,)))

    def test_jacobi_identity(self, scalar_bundle):
        for seed in range(10):
            a = random_cdiff(scalar_bundle, seed, 1, 1)
            b = random_cdiff(scalar_bundle, seed + 50, 1, 1)
            c = random_cdiff(scalar_bundle, seed + 99, 1, 1)
            total = (
                a.commutator(b.commutator(c))
                + b.commutator(c.commutator(a))
                + c.commutator(a.commutator(b))
            )
            assert total.is_zero()

    def test_requires_square(self, plane_bundle):
        a = CDiffOperator.zero(plane_bundle, 1, 2)
        with pytest.raises(ShapeMismatchError):
            a.commutator(a)


class TestLinearStructure:
    def test_additive_identity(self, plane_bundle):
        theta = random_cdiff(plane_bundle, 7, 2, 2)
        zero = CDiffOperator.zero(plane_bundle, 2, 2)
        assert theta + zero == theta
        assert (theta - theta).is_zero()

    def test_scale(self, scalar_bundle):
        b = scalar_bundle
        p = b.jet(0, (1,))
        assert 2 * d_x(b, p) == d_x(b, 2 * p)

    def test_order(self, scalar_bundle):
        b = scalar_bundle
        assert CDiffOperator.zero(b).order == 0
        assert CDiffOperator.total_derivative(b, (3,)).order == 3


class TestCanonicalEquality:
    def test_distinct_forms_are_separated_by_probes(self, scalar_bundle):
        # Operators with different coefficient maps must differ on some
        # monomial probe; this is the self-test of canonicalization.
        b = scalar_bundle
        for seed in range(20):
            x = random_cdiff(b, seed, 1, 1)
            y = random_cdiff(b, seed + 37, 1, 1)
            if x == y:
                continue
            max_coeff_order = 0
            for op in (x, y):
                for key in ((0, 0),):
                    for sigma, coeff in op.entry(*key).items():
                        max_coeff_order = max(max_coeff_order, coeff.jet_order)
            found = False
            for order in range(max_coeff_order + 2):
                probe = VectorOperator([b.jet(0, (order,))])
                if x.apply(probe) != y.apply(probe):
                    found = True
                    break
            assert found

    def test_json_roundtrip(self, plane_bundle):
        theta = random_cdiff(plane_bundle, 11, 2, 2)
        assert CDiffOperator.from_json(theta.to_json()) == theta
        assert CDiffOperator.from_json(theta.to_json(), plane_bundle) == theta
