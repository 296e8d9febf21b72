"""Tests for the exact integer / rational-mod-1 linear algebra layer."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tqdstab.exactmath import (IntMatrix, ModSolver, Rational01,
                               cokernel_orders, integer_kernel,
                               invariant_factors, kernel_mod, rat_sum,
                               smith_normal_form, solve_linear_mod,
                               unimodular_inverse)


# ---------------------------------------------------------------------------
# Rational01
# ---------------------------------------------------------------------------


class TestRational01:
    def test_reduced_and_mod_one(self):
        r = Rational01(5, 4)
        assert r.fraction == Fraction(1, 4)
        assert Rational01(-1, 4).fraction == Fraction(3, 4)
        assert Rational01(8, 4) == Rational01(0)

    def test_arithmetic(self):
        assert Rational01(3, 4) + Rational01(1, 2) == Rational01(1, 4)
        assert Rational01(1, 4) - Rational01(1, 2) == Rational01(3, 4)
        assert -Rational01(1, 3) == Rational01(2, 3)
        assert Rational01(1, 6) * 4 == Rational01(2, 3)
        assert 4 * Rational01(1, 6) == Rational01(2, 3)

    def test_string_round_trip(self):
        assert str(Rational01(1, 2)) == "1/2"
        assert Rational01.from_string("3/4") == Rational01(3, 4)
        assert Rational01.from_string("0") == Rational01(0)

    def test_hash_equality_canonical(self):
        assert hash(Rational01(2, 8)) == hash(Rational01(1, 4))
        assert Rational01(2, 8) == Rational01(1, 4)

    @given(st.integers(-50, 50), st.integers(1, 30),
           st.integers(-50, 50), st.integers(1, 30))
    def test_add_matches_fraction_mod_one(self, p, q, r, s):
        total = Rational01(p, q) + Rational01(r, s)
        expect = (Fraction(p, q) + Fraction(r, s)) % 1
        assert total.fraction == expect

    def test_rat_sum(self):
        vals = [Rational01(1, 3), Rational01(1, 3), Rational01(1, 2)]
        assert rat_sum(vals) == Rational01(1, 6)


# ---------------------------------------------------------------------------
# IntMatrix
# ---------------------------------------------------------------------------


class TestIntMatrix:
    def test_shape_and_indexing(self):
        A = IntMatrix([[1, 2, 3], [4, 5, 6]])
        assert (A.rows, A.cols) == (2, 3)
        assert A[1, 2] == 6
        assert A.row(0) == (1, 2, 3)

    def test_matmul_and_identity(self):
        A = IntMatrix([[1, 2], [3, 4]])
        assert (A @ IntMatrix.identity(2)).tolist() == A.tolist()
        B = IntMatrix([[0, 1], [1, 0]])
        assert (A @ B).tolist() == [[2, 1], [4, 3]]

    def test_determinant_and_unimodular(self):
        assert IntMatrix([[2, 1], [1, 1]]).determinant() == 1
        assert IntMatrix([[2, 1], [1, 1]]).is_unimodular()
        assert not IntMatrix([[2, 0], [0, 2]]).is_unimodular()

    def test_unimodular_inverse(self):
        U = IntMatrix([[2, 1], [1, 1]])
        V = unimodular_inverse(U)
        assert (U @ V).tolist() == IntMatrix.identity(2).tolist()

    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            IntMatrix([[1, 2], [3]])


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _random_matrix(rng, rows, cols, bound=9):
    return IntMatrix([[rng.randint(-bound, bound) for _ in range(cols)]
                      for _ in range(rows)])


def _check_snf(A):
    snf = smith_normal_form(A)
    assert snf.U.is_unimodular()
    assert snf.V.is_unimodular()
    S = snf.U @ A @ snf.V
    assert S.tolist() == snf.S.tolist()
    diag = snf.diagonal()
    for i in range(min(snf.S.rows, snf.S.cols)):
        for j in range(min(snf.S.rows, snf.S.cols)):
            if i != j:
                assert snf.S[i, j] == 0
    for a, b in zip(diag, diag[1:]):
        assert a >= 0 and b >= 0
        if a != 0:
            assert b % a == 0
        else:
            assert b == 0


class TestSmithNormalForm:
    def test_identity(self):
        snf = smith_normal_form(IntMatrix.identity(2))
        assert snf.diagonal() == [1, 1]

    def test_z9_presentation(self):
        # relations 3b = 0-ish twisted: cokernel is a single Z9 factor
        A = IntMatrix([[0, 3], [3, -2]])
        snf = smith_normal_form(A)
        assert snf.diagonal() == [1, 9]
        assert cokernel_orders(A) == [9]

    def test_z2_z2_presentation(self):
        A = IntMatrix([[0, 2], [2, -2]])
        assert smith_normal_form(A).diagonal() == [2, 2]
        assert sorted(cokernel_orders(A)) == [2, 2]

    def test_empty(self):
        snf = smith_normal_form(IntMatrix([], rows=0, cols=0))
        assert snf.diagonal() == []

    def test_random_reconstruction(self):
        rng = random.Random(11)
        for _ in range(60):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            _check_snf(_random_matrix(rng, rows, cols))

    @given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3),
                    min_size=2, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_property_reconstruction(self, entries):
        _check_snf(IntMatrix(entries))

    def test_invariant_factors_and_cokernel(self):
        A = IntMatrix([[1, 0], [0, 6]])
        assert invariant_factors(A) == [1, 6]
        assert cokernel_orders(A) == [6]
        # free factor shows up as 0
        assert cokernel_orders(IntMatrix([[2], [0]])) == [2, 0]


# ---------------------------------------------------------------------------
# Modular solving
# ---------------------------------------------------------------------------


class TestSolveLinearMod:
    def test_trivial_solvable(self):
        x = solve_linear_mod(IntMatrix([[2]]), [0], [4])
        assert x is not None
        assert (2 * x[0]) % 4 == 0

    def test_parity_obstruction(self):
        assert solve_linear_mod(IntMatrix([[2]]), [1], [4]) is None

    def test_diagonal_mod9(self):
        A = IntMatrix([[3, 0], [0, 3]])
        x = solve_linear_mod(A, [3, 6], [9, 9])
        assert x is not None
        assert (3 * x[0]) % 9 == 3 and (3 * x[1]) % 9 == 6

    def test_mixed_moduli(self):
        A = IntMatrix([[1, 1], [0, 2]])
        x = solve_linear_mod(A, [1, 2], [2, 6])
        assert x is not None
        assert (x[0] + x[1]) % 2 == 1 and (2 * x[1]) % 6 == 2

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve_linear_mod(IntMatrix([[1, 0]]), [1, 2], [2])

    def test_solution_verification_random(self):
        rng = random.Random(5)
        moduli_pool = [2, 3, 4, 6, 8, 9]
        for _ in range(80):
            rows = rng.randint(1, 3)
            cols = rng.randint(1, 3)
            A = _random_matrix(rng, rows, cols, bound=5)
            moduli = [rng.choice(moduli_pool) for _ in range(rows)]
            b = [rng.randrange(m) for m in moduli]
            x = solve_linear_mod(A, b, moduli)
            if x is not None:
                for i in range(rows):
                    total = sum(A[i, j] * x[j] for j in range(cols))
                    assert total % moduli[i] == b[i] % moduli[i]
            else:
                # exhaustive certificate on small instances
                space = 1
                for m in moduli:
                    space *= m
                if space <= 10 ** 4 and cols <= 3:
                    bound = max(moduli)
                    found = False
                    for xi in range(bound):
                        for xj in range(bound if cols > 1 else 1):
                            for xk in range(bound if cols > 2 else 1):
                                vec = [xi, xj, xk][:cols]
                                if all(sum(A[i, j] * vec[j]
                                           for j in range(cols))
                                       % moduli[i] == b[i] % moduli[i]
                                       for i in range(rows)):
                                    found = True
                    assert not found


class TestKernels:
    def test_integer_kernel(self):
        A = IntMatrix([[1, 2, 3]])
        basis = integer_kernel(A)
        assert len(basis) == 2
        for vec in basis:
            assert sum(a * v for a, v in zip([1, 2, 3], vec)) == 0

    def test_kernel_mod(self):
        A = IntMatrix([[2]])
        vecs = kernel_mod(A, [4])
        assert any(v[0] % 4 == 2 for v in vecs)
        for v in vecs:
            assert (2 * v[0]) % 4 == 0

    def test_mod_solver_consistency(self):
        A = IntMatrix([[2, 0], [0, 3]])
        solver = ModSolver(A, [4, 9])
        x = solver.solve([2, 3])
        assert x is not None
        assert (2 * x[0]) % 4 == 2 and (3 * x[1]) % 9 == 3
        for vec in solver.kernel_basis():
            assert (2 * vec[0]) % 4 == 0 and (3 * vec[1]) % 9 == 0
