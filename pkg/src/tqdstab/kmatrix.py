"""K-matrix presentations of abelian anyon theories.

A symmetric integer matrix K with det K != 0 presents an abelian theory:
anyons are cosets of Z^k / K Z^k, statistics q(l) = (1/2) l^T K^{-1} l and
braiding b(l, l') = l^T K^{-1} l' mod 1. The layered models built here use

    K = [[0, N], [N, -S]],

with N = diag(N_1..N_M) and S the symmetric coupling table (S_ii = 2 n_i,
S_ij = n_ij). The same theory arises from a stack of Z_{N_i^2} toric codes,
K_TC = direct sum of [[0, N_i^2], [N_i^2, 0]], by condensing the bosons
collected in the column matrix Q; the deconfined generators form L and
L^{-1} K_TC L^{-T} recovers the layered K.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .exactmath import (IntMatrix, Rational01, smith_normal_form,
                        unimodular_inverse)
from .lattice import TqdParams


class SingularMatrixError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Rational matrix helpers
# ---------------------------------------------------------------------------


FracMatrix = list[list[Fraction]]


def _frac(A: IntMatrix) -> FracMatrix:
    return [[Fraction(A[i, j]) for j in range(A.cols)] for i in range(A.rows)]


def _fmatmul(A: FracMatrix, B: FracMatrix) -> FracMatrix:
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0))
             for j in range(len(B[0]))] for i in range(len(A))]


def _ftranspose(A: FracMatrix) -> FracMatrix:
    return [[A[i][j] for i in range(len(A))] for j in range(len(A[0]))]


def _as_int_matrix(A: FracMatrix) -> IntMatrix:
    assert all(x.denominator == 1 for row in A for x in row)
    return IntMatrix([[int(x) for x in row] for row in A],
                     cols=len(A[0]) if A else 0)


def _finverse(A: FracMatrix) -> FracMatrix:
    n = len(A)
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col]
        aug[col] = [x / inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _check_symmetric(K: IntMatrix) -> None:
    if K.rows != K.cols:
        raise ValueError("K must be square")
    for i in range(K.rows):
        for j in range(i):
            if K[i, j] != K[j, i]:
                raise ValueError("K must be symmetric")


def coupling_matrix(params: TqdParams) -> IntMatrix:
    """Symmetric M x M matrix S with S_ii = 2 n_i and S_ij = n_ij."""
    M = params.M
    return IntMatrix([[2 * params.n[i] if i == j else params.nij[i][j]
                       for j in range(M)] for i in range(M)])


def upper_coupling_matrix(params: TqdParams) -> IntMatrix:
    """Upper-triangular U with U_ii = n_i, U_ij = n_ij (i < j); S = U + U^T."""
    M = params.M
    return IntMatrix([[params.n[i] if i == j
                       else (params.nij[i][j] if j > i else 0)
                       for j in range(M)] for i in range(M)])


def build_k_tqd(params: TqdParams) -> IntMatrix:
    """[[0, N], [N, -S]] for the layered model with the given parameters."""
    M = params.M
    N = IntMatrix.diagonal(list(params.N))
    S = coupling_matrix(params)
    rows = []
    for i in range(M):
        rows.append([0] * M + [N[i, j] for j in range(M)])
    for i in range(M):
        rows.append([N[i, j] for j in range(M)] + [-S[i, j] for j in range(M)])
    return IntMatrix(rows)


def build_k_tc_stack(params: TqdParams) -> IntMatrix:
    """Direct sum of [[0, N_i^2], [N_i^2, 0]] blocks, flux-then-charge order.

    Coordinates are (m_1..m_M, e_1..e_M) so that the condensation matrices
    below can be written with diagonal N blocks.
    """
    M = params.M
    rows = []
    for i in range(M):
        rows.append([0] * M + [params.N[i] ** 2 if j == i else 0
                               for j in range(M)])
    for i in range(M):
        rows.append([params.N[i] ** 2 if j == i else 0 for j in range(M)]
                    + [0] * M)
    return IntMatrix(rows)


def k_inverse(K: IntMatrix) -> FracMatrix:
    """Exact rational inverse of K."""
    _check_symmetric(K)
    return _finverse(_frac(K))


def transform(K: IntMatrix, W: IntMatrix) -> IntMatrix:
    """Basis change K -> W K W^T for unimodular W."""
    _check_symmetric(K)
    if not W.is_unimodular():
        raise ValueError("W must be unimodular")
    return W @ K @ W.transpose()


# ---------------------------------------------------------------------------
# Anyons from K
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnyonGroupFromK:
    """Cokernel Z^k / K Z^k with deterministic coset representatives."""

    orders: tuple[int, ...]            # invariant factors > 1
    generators: tuple[tuple[int, ...], ...]  # one vector per order
    representatives: tuple[tuple[int, ...], ...]  # all |det K| cosets

    @property
    def size(self) -> int:
        return prod(self.orders)


def anyon_group_from_k(K: IntMatrix) -> AnyonGroupFromK:
    """Invariant factors and coset representatives of Z^k / K Z^k.

    Through the Smith decomposition U K V = diag(d), a vector x lies in the
    coset labelled by (U x mod d); representatives are U^{-1} t for t in the
    fundamental box prod [0, d_i).
    """
    _check_symmetric(K)
    if K.determinant() == 0:
        raise SingularMatrixError("K must be nonsingular")
    snf = smith_normal_form(K)
    diag = snf.diagonal()
    u_inv = unimodular_inverse(snf.U)
    kept = [i for i, d in enumerate(diag) if d > 1]
    orders = tuple(diag[i] for i in kept)
    gens = tuple(tuple(u_inv[r, i] for r in range(K.rows)) for i in kept)
    reps: list[tuple[int, ...]] = []
    tuples: list[list[int]] = [[]]
    for i in kept:
        tuples = [t + [v] for t in tuples for v in range(diag[i])]
    for t in tuples:
        full = [0] * K.rows
        for idx, i in enumerate(kept):
            full[i] = t[idx]
        reps.append(tuple(u_inv.mat_vec(full)))
    return AnyonGroupFromK(orders, gens, tuple(reps))


def reduce_vector(K: IntMatrix, l: Sequence[int]) -> tuple[int, ...]:
    """Canonical coset representative of l under l ~ l + K m."""
    snf = smith_normal_form(K)
    diag = snf.diagonal()
    t = snf.U.mat_vec(list(l))
    t = [v % d for v, d in zip(t, diag)]
    return tuple(unimodular_inverse(snf.U).mat_vec(t))


def q_of(K: IntMatrix, l: Sequence[int]) -> Rational01:
    """Exchange statistic q(l) = (1/2) l^T K^{-1} l mod 1."""
    kinv = k_inverse(K)
    vec = [sum(kinv[i][j] * l[j] for j in range(len(l)))
           for i in range(len(l))]
    return Rational01(Fraction(1, 2) * sum(li * vi for li, vi in zip(l, vec)))


def b_of(K: IntMatrix, l: Sequence[int], lp: Sequence[int]) -> Rational01:
    """Braiding phase b(l, l') = l^T K^{-1} l' mod 1."""
    kinv = k_inverse(K)
    vec = [sum(kinv[i][j] * lp[j] for j in range(len(lp)))
           for i in range(len(lp))]
    return Rational01(sum((li * vi for li, vi in zip(l, vec)), Fraction(0)))


def theory_from_k(K: IntMatrix):
    """AnyonTheory carried by Z^k / K Z^k with statistics from K^{-1}."""
    from .anyon import AnyonTheory
    group = anyon_group_from_k(K)
    gens = group.generators
    q_gen = [q_of(K, g) for g in gens]
    b_gen = [[b_of(K, g, h) for h in gens] for g in gens]
    return AnyonTheory(group.orders, q_gen, b_gen)


# ---------------------------------------------------------------------------
# Census and signature
# ---------------------------------------------------------------------------


def census(K: IntMatrix) -> dict[Rational01, int]:
    """Histogram of exchange statistics over all anyons of K."""
    group = anyon_group_from_k(K)
    counts: dict[Rational01, int] = {}
    for rep in group.representatives:
        q = q_of(K, rep)
        counts[q] = counts.get(q, 0) + 1
    return counts


def signature(K: IntMatrix) -> int:
    """Signature of K via symmetric (congruence) diagonalization."""
    _check_symmetric(K)
    a = _frac(K)
    n = len(a)
    sig = 0
    for t in range(n):
        if a[t][t] == 0:
            j = next((j for j in range(t + 1, n) if a[t][j] != 0), None)
            if j is None:
                continue  # zero row/column: contributes nothing
            # Symmetric row+col addition makes the pivot nonzero.
            for c in range(n):
                a[t][c] += a[j][c]
            for r in range(n):
                a[r][t] += a[r][j]
        pivot = a[t][t]
        sig += 1 if pivot > 0 else -1
        for r in range(t + 1, n):
            if a[r][t]:
                f = a[r][t] / pivot
                for c in range(n):
                    a[r][c] -= f * a[t][c]
                for rr in range(n):
                    a[rr][r] -= f * a[rr][t]
    return sig


def to_json_dict(K: IntMatrix) -> dict:
    """CLI-facing summary: matrix, fusion group, census, signature."""
    group = anyon_group_from_k(K)
    hist = census(K)
    return {
        "K": K.tolist(),
        "group": list(group.orders),
        "census": {str(q): c for q, c in sorted(
            hist.items(), key=lambda kv: (kv[0].denominator, kv[0].numerator))},
        "signature": signature(K),
    }


# ---------------------------------------------------------------------------
# Condensation matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CondensationMatrices:
    """Boson columns Q, deconfined-generator columns L, and checks."""

    k_tc: IntMatrix
    k_tqd: IntMatrix
    Q: IntMatrix
    L: IntMatrix
    report: dict[str, bool]

    @property
    def all_identities_hold(self) -> bool:
        return all(self.report.values())


def condensation_matrices(params: TqdParams) -> CondensationMatrices:
    """Condensation data taking the toric-code stack to the layered theory.

    Verifies exactly:
      Q^T K_TC^{-1} Q = -S,
      L^T K_TC^{-1} Q = (0; -I) mod 1,
      L^{-1} K_TC L^{-T} = build_k_tqd(params).
    """
    M = params.M
    N = params.N
    U = upper_coupling_matrix(params)
    S = coupling_matrix(params)
    k_tc = build_k_tc_stack(params)
    k_tqd = build_k_tqd(params)

    # Q columns are the bosons m_i^{-N_i} e_i^{N_i n_i} prod_{j<i} e_j^{N_j n_ij}.
    q_rows = [[-N[i] if j == i else 0 for j in range(M)] for i in range(M)]
    q_rows += [[N[i] * U[i, j] for j in range(M)] for i in range(M)]
    Q = IntMatrix(q_rows, cols=M)

    # L columns: elementary fluxes m_i e_i^{n_i} prod_{j>i} e_j^{(N_j/N_i) n_ij},
    # then charges e_i^{N_i}.
    l_rows = [[1 if j == i else 0 for j in range(M)] + [0] * M
              for i in range(M)]
    for i in range(M):
        row = []
        for j in range(M):
            val = N[i] * U[j, i]  # (N U^T)_{ij}
            assert val % N[j] == 0
            row.append(val // N[j])
        l_rows.append(row + [N[i] if j == i else 0 for j in range(M)])
    L = IntMatrix(l_rows)

    kinv = _finverse(_frac(k_tc))
    qf, lf = _frac(Q), _frac(L)

    prod_qq = _fmatmul(_ftranspose(qf), _fmatmul(kinv, qf))
    check_qq = _as_int_matrix(prod_qq) == -S

    prod_lq = _fmatmul(_ftranspose(lf), _fmatmul(kinv, qf))
    target = [[Fraction(0)] * M for _ in range(M)]
    target += [[Fraction(-1 if j == i else 0) for j in range(M)]
               for i in range(M)]
    check_lq = all((prod_lq[i][j] - target[i][j]).denominator == 1
                   for i in range(2 * M) for j in range(M))

    l_inv = _finverse(lf)
    cond_k = _fmatmul(l_inv, _fmatmul(_frac(k_tc), _ftranspose(l_inv)))
    check_k = _as_int_matrix(cond_k) == k_tqd

    report = {
        "bosons_mutually_trivial": check_qq,
        "deconfined_braid_trivially": check_lq,
        "condensed_k_matches": check_k,
    }
    return CondensationMatrices(k_tc, k_tqd, Q, L, report)
