"""Tensor layer: cone constructions, cross norms, nuclearity, factorization,
and the PSD-backed 2x2 example suite."""

import dataclasses
from fractions import Fraction

import pytest
from conftest import rand_frac, rand_vec, rng

from aoulab.cones import is_simplicial, member
from aoulab.errors import InputError, InvariantViolation, ShapeError
from aoulab.linalg import Matrix, dot, vec
from aoulab.maps import UnitalMap, check_map, is_order_quotient, operator_norm
from aoulab.psd_examples import (
    BELL,
    I4,
    SEGRE_RELATION,
    SWAP,
    biquadratic_form,
    block_positive,
    partial_transpose,
    psd_example_suite,
    sos_matches,
)
from aoulab.spaces import lin_space, linf, order_norm, unit_ball_vertices
from aoulab.tensors import (
    EPSILON,
    PI,
    TensorElement,
    factorize,
    injective_banach_norm,
    is_nuclear_fd,
    is_nuclear_pairwise,
    kron_vec,
    member_tensor,
    tensor_map,
    tensor_space,
)

L2, L3 = linf(2), linf(3)
LS1, LS2, LS3 = lin_space(1), lin_space(2), lin_space(3)

# frozen witness of epsilon \ pi on lin_space(2) (x) lin_space(2); the padded
# variant is the same ray inside lin_space(3) (x) lin_space(2)
LS2_WITNESS = ((2, 0, 0), (0, -1, -1), (0, -1, 1))
LS3_WITNESS = ((2, 0, 0), (0, -1, -1), (0, -1, 1), (0, 0, 0))


def identity_map(space):
    return UnitalMap(space, space, Matrix.identity(space.dim))


class TestTensorSpace:
    def test_kron_vec_convention(self):
        # row-major pairing: kron(A, B) applied to v (x) w is Av (x) Bw
        r = rng(7)
        a = Matrix.from_rows([rand_vec(r, 3) for _ in range(3)])
        b = Matrix.from_rows([rand_vec(r, 2) for _ in range(2)])
        v, w = rand_vec(r, 3), rand_vec(r, 2)
        assert Matrix.kron(a, b).apply(kron_vec(v, w)) == kron_vec(
            a.apply(v), b.apply(w)
        )

    def test_linf_square_both_kinds_are_the_orthant(self):
        coords = {(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)}
        eps = tensor_space(L2, L2, EPSILON)
        assert eps.realized.dim == 4
        assert eps.realized.unit == (1, 1, 1, 1)
        assert {tuple(row) for row in eps.realized.cone.inequalities} == coords
        pi = tensor_space(L2, L2, PI)
        assert {tuple(g) for g in pi.realized.cone.generators} == coords

    def test_cache_returns_same_object(self):
        assert tensor_space(L2, L3, EPSILON) is tensor_space(L2, L3, EPSILON)
        assert tensor_space(L2, L3, EPSILON) is not tensor_space(L2, L3, PI)

    def test_unknown_kind_rejected(self):
        with pytest.raises(InputError):
            tensor_space(L2, L2, "gamma")

    def test_pi_inside_epsilon(self):
        for left, right in ((LS2, LS2), (LS3, LS2), (L3, LS2)):
            eps = tensor_space(left, right, EPSILON)
            pi = tensor_space(left, right, PI)
            for g in pi.realized.cone.generators:
                assert all(dot(row, g) >= 0 for row in eps.realized.cone.inequalities)

    def test_universal_property_instance(self):
        # a bilinear form nonnegative on positive pairs induces a functional
        # nonnegative on the whole pi cone, and only then
        r = rng(11)
        pi = tensor_space(L2, L3, PI)
        for _ in range(20):
            c = [[abs(rand_frac(r)) for _ in range(3)] for _ in range(2)]
            flat = vec([x for row in c for x in row])
            assert all(dot(flat, g) >= 0 for g in pi.realized.cone.generators)
        bad = vec((1, 1, 1, 1, 1, -1))
        assert any(dot(bad, g) < 0 for g in pi.realized.cone.generators)


class TestTensorElement:
    def test_shape_checked(self):
        with pytest.raises(ShapeError):
            TensorElement(L2, L3, Matrix.identity(2))

    def test_flatten_roundtrip(self):
        z = TensorElement.simple(L2, L3, (1, 2), (3, 4, 5))
        assert z.coeffs.data == ((3, 4, 5), (6, 8, 10))
        back = TensorElement.from_flat(L2, L3, z.flatten())
        assert back.coeffs.data == z.coeffs.data

    def test_membership_certificates(self):
        pi = tensor_space(L2, L2, PI)
        inside = TensorElement.simple(L2, L2, (1, 0), (1, 1))
        cert = member_tensor(pi, inside)
        assert cert.verdict == "member"
        assert cert.verify(pi.realized.cone, inside.flatten())
        outside = TensorElement.simple(L2, L2, (1, -1), (1, 1))
        cert = member_tensor(pi, outside)
        assert cert.verdict == "non_member"
        assert cert.verify(pi.realized.cone, outside.flatten())


class TestInjectiveNorm:
    def test_coefficient_matrix_in_linf(self):
        # for linf factors the extreme states are coordinates, so the norm
        # is the largest absolute entry
        z = TensorElement(L2, L2, Matrix.from_rows([(1, -2), (0, 3)]))
        assert injective_banach_norm(z) == 3

    def test_unit_has_norm_one(self):
        for left, right in ((L2, L3), (LS2, L2), (LS2, LS2)):
            unit = TensorElement.from_flat(
                left, right, kron_vec(left.unit, right.unit)
            )
            assert injective_banach_norm(unit) == 1

    def test_cross_norm_on_simple_tensors(self):
        r = rng(23)
        spaces = (L2, L3, LS1, LS2)
        for _ in range(25):
            left = r.choice(spaces)
            right = r.choice(spaces)
            v = rand_vec(r, left.dim)
            w = rand_vec(r, right.dim)
            z = TensorElement.simple(left, right, v, w)
            product = order_norm(left, v) * order_norm(right, w)
            assert injective_banach_norm(z) == product
            pi = tensor_space(left, right, PI)
            assert order_norm(pi.realized, z.flatten()) == product

    def test_matches_epsilon_order_norm(self):
        r = rng(29)
        eps = tensor_space(LS2, L2, EPSILON)
        for _ in range(25):
            z = TensorElement.from_flat(LS2, L2, rand_vec(r, 6))
            assert injective_banach_norm(z) == order_norm(eps.realized, z.flatten())


class TestNuclearity:
    def test_linf_pairs_nuclear(self):
        assert is_nuclear_pairwise(L2, L2).nuclear
        assert is_nuclear_pairwise(L3, L2).nuclear
        assert is_nuclear_pairwise(LS1, L3).nuclear

    def test_lin_space_pair_not_nuclear(self):
        rep = is_nuclear_pairwise(LS2, LS2)
        assert not rep.nuclear
        assert rep.witness.coeffs.data == LS2_WITNESS
        eps = tensor_space(LS2, LS2, EPSILON)
        pi = tensor_space(LS2, LS2, PI)
        flat = rep.witness.flatten()
        assert rep.epsilon_certificate.verdict == "member"
        assert rep.epsilon_certificate.verify(eps.realized.cone, flat)
        assert rep.pi_certificate.verdict == "non_member"
        assert rep.pi_certificate.verify(pi.realized.cone, flat)
        # the Farkas functional also kills the witness directly
        sep = rep.pi_certificate.witness
        assert dot(sep, flat) < 0
        assert all(dot(sep, g) >= 0 for g in pi.realized.cone.generators)

    def test_mixed_pair_witness(self):
        rep = is_nuclear_pairwise(LS3, LS2)
        assert not rep.nuclear
        assert rep.witness.coeffs.data == LS3_WITNESS

    def test_fd_battery_matches_simpliciality(self):
        for space in (linf(1), L2, L3, linf(4), LS1, LS2, LS3):
            assert is_nuclear_fd(space) == is_simplicial(space.cone)

    def test_custom_battery(self):
        # the simpliciality answer must survive cross-validation against
        # whatever partners the caller supplies
        assert is_nuclear_fd(LS2, battery=(L2,)) is False
        assert is_nuclear_fd(L3, battery=(L2, LS2)) is True


class TestTensorMap:
    def test_identity_tensor_identity(self):
        for kind in (EPSILON, PI):
            m = tensor_map(identity_map(L2), identity_map(L3), kind)
            assert m.matrix.data == Matrix.identity(6).data
            assert m.unital and m.positive

    def test_requires_positive_unital_factors(self):
        skew = UnitalMap(L2, L2, Matrix.from_rows([(2, -1), (0, 1)]))
        with pytest.raises(InputError):
            tensor_map(skew, identity_map(L2), PI)

    def test_embedding_tensor_identity_is_epsilon_embedding(self):
        iota = UnitalMap(
            L2,
            L3,
            Matrix.from_rows([(1, 0), (0, 1), (Fraction(1, 2), Fraction(1, 2))]),
        )
        assert check_map(iota).order_embedding
        big = tensor_map(iota, identity_map(L2), EPSILON)
        rep = check_map(big)
        assert rep.order_embedding and rep.isometry

    def test_quotient_tensor_identity_is_pi_quotient(self):
        q = UnitalMap(
            L3,
            L2,
            Matrix.from_rows([(1, 0, 0), (0, Fraction(1, 2), Fraction(1, 2))]),
        )
        assert is_order_quotient(q).is_quotient
        big = tensor_map(q, identity_map(L2), PI)
        assert is_order_quotient(big).is_quotient


class TestFactorize:
    def test_simplicial_spaces_factor_exactly(self):
        for space, k in ((L3, 3), (LS1, 2)):
            res = factorize(space)
            assert res.success and res.defect == 0 and not res.exhausted
            assert res.states_used == k
            assert res.schedule == ((k, Fraction(0)),)
            assert res.phi.source is space and res.phi.target.label == f"linf({k})"
            comp = res.psi.compose(res.phi)
            assert comp.matrix.data == Matrix.identity(space.dim).data
            assert res.phi.positive and res.psi.positive

    def test_lin_space_two_stalls_at_one_half(self):
        res = factorize(LS2)
        assert not res.success and res.exhausted
        assert res.defect == Fraction(1, 2)
        assert res.states_used == 4
        assert res.schedule == ((3, Fraction(1)), (4, Fraction(1, 2)))
        # the reported defect is the true operator norm of the round trip
        # defect on the unit ball, recomputed independently
        comp = res.psi.compose(res.phi)
        worst = Fraction(0)
        for v in unit_ball_vertices(LS2):
            diff = tuple(a - b for a, b in zip(comp.apply(v), v))
            worst = max(worst, order_norm(LS2, diff))
        assert worst == res.defect

    def test_loose_tolerance_accepts_lin_space_two(self):
        res = factorize(LS2, eps=Fraction(1, 2))
        assert res.success and res.defect <= Fraction(1, 2)


class TestPartialTranspose:
    def test_involution_and_bell_swap(self):
        assert partial_transpose(BELL).data == SWAP.data
        assert partial_transpose(SWAP).data == BELL.data
        r = rng(31)
        for _ in range(10):
            rows = [[rand_frac(r) for _ in range(4)] for _ in range(4)]
            for i in range(4):
                for j in range(i):
                    rows[i][j] = rows[j][i]
            m = Matrix.from_rows(rows)
            assert partial_transpose(partial_transpose(m)).data == m.data

    def test_requires_symmetry(self):
        with pytest.raises(InputError):
            partial_transpose(Matrix.from_rows([[0] * 4, [1] + [0] * 3, [0] * 4, [0] * 4]))


class TestBlockForms:
    def test_segre_relation_vanishes_on_simple_tensors(self):
        assert biquadratic_form(SEGRE_RELATION) == {}
        r = rng(37)
        for _ in range(10):
            x = rand_vec(r, 2)
            y = rand_vec(r, 2)
            z = kron_vec(x, y)
            assert dot(z, SEGRE_RELATION.apply(z)) == 0

    def test_swap_is_inner_product_squared(self):
        assert sos_matches(SWAP, (vec((1, 0, 0, 1)),))
        # Bell differs from Swap by the Segre relation only, so its block
        # form is the same square; the identity matrix genuinely differs
        assert sos_matches(BELL, (vec((1, 0, 0, 1)),))
        assert not sos_matches(I4, (vec((1, 0, 0, 1)),))

    def test_identity_is_sum_of_four_squares(self):
        squares = tuple(
            vec(tuple(1 if i == k else 0 for i in range(4))) for k in range(4)
        )
        assert sos_matches(I4, squares)


class TestPsdExampleSuite:
    def test_expected_verdicts(self):
        suite = {rep.label: rep for rep in psd_example_suite()}
        assert set(suite) == {"bell", "swap", "identity"}
        claims = {
            label: {cone: v.claim for cone, v in rep.verdicts.items()}
            for label, rep in suite.items()
        }
        assert claims["bell"] == {"psd": "member", "pi": "non_member", "epsilon": "member"}
        assert claims["swap"] == {"psd": "non_member", "pi": "non_member", "epsilon": "member"}
        assert claims["identity"] == {"psd": "member", "pi": "member", "epsilon": "member"}
        for rep in suite.values():
            assert rep.verify()

    def test_bell_witness_values(self):
        suite = {rep.label: rep for rep in psd_example_suite()}
        v = suite["bell"].verdicts["pi"]
        assert tuple(v.direction) == (0, 1, -1, 0)
        assert v.value == -2
        w = suite["swap"].verdicts["psd"]
        assert w.value == dot(w.direction, SWAP.apply(w.direction))
        assert w.value == -2

    def test_tampered_verdicts_fail(self):
        suite = {rep.label: rep for rep in psd_example_suite()}
        v = suite["bell"].verdicts["pi"]
        assert not dataclasses.replace(v, value=Fraction(-1)).verify(BELL)
        assert not v.verify(SWAP)
        assert not suite["swap"].verdicts["epsilon"].verify(I4)

    def test_block_positivity_decisions(self):
        swap = block_positive(SWAP)
        assert swap.verdict == "certified_member"
        assert swap.evidence.shift == -2
        bell = block_positive(BELL)
        assert bell.verdict == "certified_member"
        assert bell.evidence.shift == 0
        assert block_positive(I4).verdict == "certified_member"
        neg = block_positive(Matrix.from_rows(
            [(-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)]
        ))
        assert neg.verdict == "certified_non_member"
        x, y, value = neg.counterexample
        z = kron_vec(x, y)
        m = Matrix.from_rows([(-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)])
        assert dot(z, m.apply(z)) == value < 0

    def test_swap_minus_two_relations_is_bell(self):
        shifted = Matrix.from_rows(
            [
                [SWAP.data[i][j] - 2 * SEGRE_RELATION.data[i][j] for j in range(4)]
                for i in range(4)
            ]
        )
        assert shifted.data == BELL.data
