"""Stabilizer groups over mixed-dimension qudits.

Group order, logical dimension, membership with exact phase, centralizers,
and condensation by measurement. All counting reduces to Smith-normal-form
cokernels after lifting site-q exponents by D/d_q into Z_D coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod
from typing import Literal, Sequence

from .exactmath import IntMatrix, ModSolver, Rational01
from .pauli import (PauliOperator, QuditSystem, commutation_phase, identity,
                    multiply, power)


class NonCommutingError(ValueError):
    pass


class InconsistentGroupError(ValueError):
    pass


@dataclass(frozen=True)
class MembershipResult:
    coefficients: tuple[int, ...]
    residual_phase: Rational01
    verdict: Literal["Member", "MemberUpToPhase", "NotMember"]

    @property
    def is_member(self) -> bool:
        return self.verdict == "Member"


class StabilizerGroup:
    """A qudit system together with a list of Pauli generators."""

    def __init__(self, system: QuditSystem,
                 generators: Sequence[PauliOperator],
                 validate: bool = True):
        self.system = system
        self.generators = tuple(generators)
        for g in self.generators:
            if g.system.dims != system.dims:
                raise ValueError("generator on a different system")
        if validate:
            bad = assert_commuting(self)
            if bad:
                raise NonCommutingError(f"non-commuting generator pairs: {bad}")
        self._solver: ModSolver | None = None
        self._phase_group: set[int] | None = None

    # -- lifted exponent coordinates ----------------------------------------

    def _lifted(self, P: PauliOperator) -> list[int]:
        D = self.system.D
        dims = self.system.dims
        vec = []
        for q in range(len(dims)):
            vec.append(P.x.get(q, 0) * (D // dims[q]))
        for q in range(len(dims)):
            vec.append(P.z.get(q, 0) * (D // dims[q]))
        return vec

    def _generator_matrix(self) -> IntMatrix:
        """2n x k matrix whose columns are lifted generator vectors."""
        cols = [self._lifted(g) for g in self.generators]
        n2 = 2 * len(self.system.dims)
        return IntMatrix([[col[i] for col in cols] for i in range(n2)],
                         cols=len(cols))

    def _get_solver(self) -> ModSolver:
        if self._solver is None:
            D = self.system.D
            n2 = 2 * len(self.system.dims)
            self._solver = ModSolver(self._generator_matrix(), [D] * n2)
        return self._solver

    def combination(self, coefficients: Sequence[int]) -> PauliOperator:
        """prod_i g_i^{a_i} in generator order (exact phase)."""
        out = identity(self.system)
        for g, a in zip(self.generators, coefficients):
            if a:
                out = multiply(out, power(g, a))
        return out

    # -- phase subgroup (scalars reachable as generator combinations) -------

    def _get_phase_group(self) -> set[int]:
        """Subgroup of Z_{2D} of phases of identity-exponent combinations.

        Only meaningful for commuting generator sets (all uses here).
        """
        if self._phase_group is None:
            two_d = 2 * self.system.D
            gens = []
            for vec in self._get_solver().kernel_basis():
                op = self.combination(vec)
                assert op.is_scalar(), "kernel combination is not scalar"
                gens.append(op.phase % two_d)
            group = {0}
            frontier = [0]
            while frontier:
                base = frontier.pop()
                for g in gens:
                    nxt = (base + g) % two_d
                    if nxt not in group:
                        group.add(nxt)
                        frontier.append(nxt)
            self._phase_group = group
        return self._phase_group

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.system.dims),
            "generators": [
                {"phase": g.phase,
                 "x": {str(s): e for s, e in sorted(g.x.items())},
                 "z": {str(s): e for s, e in sorted(g.z.items())}}
                for g in self.generators
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json_dict(data: dict, validate: bool = True) -> "StabilizerGroup":
        system = QuditSystem(data["dims"])
        gens = [PauliOperator(system, phase=g.get("phase", 0),
                              x={int(s): e for s, e in g.get("x", {}).items()},
                              z={int(s): e for s, e in g.get("z", {}).items()})
                for g in data["generators"]]
        return StabilizerGroup(system, gens, validate=validate)


def assert_commuting(S: StabilizerGroup) -> list[tuple[int, int]]:
    """Indices of generator pairs that fail to commute (empty iff abelian)."""
    bad = []
    gens = S.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commutation_phase(gens[i], gens[j]).is_zero():
                bad.append((i, j))
    return bad


def group_order(S: StabilizerGroup) -> int:
    """Order of the generated group modulo phases: the size of the span of
    the lifted generator columns inside Z_D^{2n}."""
    if assert_commuting(S):
        raise NonCommutingError("generators must commute")
    return S._get_solver().image_size()


@dataclass(frozen=True)
class ScalarConsistency:
    consistent: bool
    witness: tuple[tuple[int, ...], int] | None  # (coefficients, phase)


def scalar_consistency(S: StabilizerGroup) -> ScalarConsistency:
    """Consistent iff no combination of generators is a nonzero scalar."""
    if assert_commuting(S):
        raise NonCommutingError("generators must commute")
    two_d = 2 * S.system.D
    for vec in S._get_solver().kernel_basis():
        op = S.combination(vec)
        assert op.is_scalar()
        if op.phase % two_d:
            return ScalarConsistency(False, (tuple(vec), op.phase))
    return ScalarConsistency(True, None)


def logical_dimension(S: StabilizerGroup) -> int:
    """(prod_q d_q) / group_order(S) for commuting, scalar-consistent groups."""
    if not scalar_consistency(S).consistent:
        raise InconsistentGroupError("group contains a nontrivial scalar")
    total = prod(S.system.dims)
    dim, rem = divmod(total, group_order(S))
    assert rem == 0
    return dim


def member_with_phase(S: StabilizerGroup, P: PauliOperator) -> MembershipResult:
    """Express P as a generator combination, tracking the phase residual."""
    solver = S._get_solver()
    coeffs = solver.solve(S._lifted(P))
    if coeffs is None:
        return MembershipResult((), Rational01(0), "NotMember")
    combo = S.combination(coeffs)
    assert combo.x == P.x and combo.z == P.z, "exponent solve mismatch"
    two_d = 2 * S.system.D
    delta = (P.phase - combo.phase) % two_d
    if delta == 0:
        return MembershipResult(tuple(coeffs), Rational01(0), "Member")
    if delta in S._get_phase_group():
        # Some identity-exponent combination supplies the missing phase;
        # fold it into the coefficients so the combination is exact.
        kernel = solver.kernel_basis()
        phases = [S.combination(vec).phase for vec in kernel]
        from .exactmath import solve_linear_mod
        fix = solve_linear_mod(IntMatrix([phases], cols=len(phases)),
                               [delta], [two_d])
        assert fix is not None
        coeffs = [c + sum(f * vec[i] for f, vec in zip(fix, kernel))
                  for i, c in enumerate(coeffs)]
        combo = S.combination(coeffs)
        assert combo == P
        return MembershipResult(tuple(coeffs), Rational01(0), "Member")
    return MembershipResult(tuple(coeffs), Rational01(delta, two_d),
                            "MemberUpToPhase")


def centralizer_in_group(S: StabilizerGroup,
                         probes: Sequence[PauliOperator]) -> StabilizerGroup:
    """Generators of the subgroup of <S> commuting with every probe."""
    if not probes:
        return S
    D = S.system.D
    dims = S.system.dims
    # Integer pairing c_ij = D * commutation_phase(g_i, probe_j).
    def pairing(P: PauliOperator, Q: PauliOperator) -> int:
        return sum((D // dims[s]) * (P.z.get(s, 0) * Q.x.get(s, 0)
                                     - P.x.get(s, 0) * Q.z.get(s, 0))
                   for s in P.support | Q.support)

    k = len(S.generators)
    A = IntMatrix([[pairing(S.generators[i], probe) for i in range(k)]
                   for probe in probes], cols=k)
    basis = ModSolver(A, [D] * len(probes)).kernel_basis()
    gens = []
    seen = set()
    for vec in basis:
        op = S.combination(vec)
        if op.is_identity() or op in seen:
            continue
        seen.add(op)
        gens.append(op)
    return StabilizerGroup(S.system, gens, validate=False)


def measure(S: StabilizerGroup,
            ops: Sequence[PauliOperator]) -> StabilizerGroup:
    """Condense by measuring ops with +1 outcomes: <centralizer(S, ops), ops>."""
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not commutation_phase(ops[i], ops[j]).is_zero():
                raise NonCommutingError("measured operators must commute")
    central = centralizer_in_group(S, ops)
    return StabilizerGroup(S.system, tuple(central.generators) + tuple(ops))


def groups_equal(S1: StabilizerGroup, S2: StabilizerGroup) -> bool:
    """Mutual generator membership, exact including phases."""
    return (all(member_with_phase(S2, g).is_member for g in S1.generators)
            and all(member_with_phase(S1, g).is_member for g in S2.generators))
