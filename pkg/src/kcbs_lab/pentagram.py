"""The five KCBS test vectors, their context structure and both sides of the inequality."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import DomainError, NotAContext
from .qutrit import ORTHO_TOL, BinaryTest, Ray, born_prob, inner, make_ray, test_expectation

N_TESTS = 5
ZETA_PENT = math.pi / 5

# (multiple of zeta, sign of the second component) for chi_1 .. chi_5
_ANGLE_PATTERN = ((0, 1), (4, 1), (2, -1), (2, 1), (4, -1))


@dataclass(frozen=True)
class Pentagram:
    zeta_pent: float
    vectors: tuple[Ray, Ray, Ray, Ray, Ray]

    def tests(self) -> tuple[BinaryTest, ...]:
        return tuple(BinaryTest(v) for v in self.vectors)

    def contexts(self) -> list[tuple[int, int]]:
        """Cyclically adjacent index pairs ``(i, i+1 mod 5)``, zero-based."""
        return [(i, (i + 1) % N_TESTS) for i in range(N_TESTS)]


@dataclass(frozen=True)
class JointOutcomeDistribution:
    """Probabilities of the outcome pairs, keyed m = -1 and p = +1."""

    p_mm: float
    p_mp: float
    p_pm: float
    p_pp: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_mm, self.p_mp, self.p_pm, self.p_pp)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(OUTCOME_KEYS, self.as_tuple()))

    def total(self) -> float:
        return math.fsum(self.as_tuple())

    def max_abs_diff(self, other: JointOutcomeDistribution) -> float:
        return max(abs(a - b) for a, b in zip(self.as_tuple(), other.as_tuple()))


OUTCOME_KEYS = ("mm", "mp", "pm", "pp")
OUTCOMES = ((-1, -1), (-1, 1), (1, -1), (1, 1))


@dataclass(frozen=True)
class AssignmentTuple:
    values: tuple[int, int, int, int, int]

    def __post_init__(self) -> None:
        if len(self.values) != N_TESTS or any(v not in (-1, 1) for v in self.values):
            raise ValueError(f"assignment must be five values in {{-1, +1}}, got {self.values}")

    def total(self) -> int:
        return sum(self.values)

    def is_exclusive(self) -> bool:
        """No two cyclic neighbours are both -1."""
        v = self.values
        return all(not (v[i] == -1 and v[(i + 1) % N_TESTS] == -1) for i in range(N_TESTS))


@dataclass(frozen=True)
class PentagramReport:
    moduli: tuple[float, ...]
    tol: float

    @property
    def failures(self) -> list[int]:
        return [i for i, m in enumerate(self.moduli) if m > self.tol]

    @property
    def passed(self) -> bool:
        return not self.failures


def build_pentagram(zeta_pent: float = ZETA_PENT) -> Pentagram:
    """Construct chi_1..chi_5 for a given pentagram angle.

    Each vector is ``(cos k*zeta, +-sin k*zeta, sqrt(cos zeta)) / sqrt(1 + cos zeta)``.
    Any angle with ``cos zeta > 0`` is accepted; only ``pi/5`` gives an
    orthogonal cycle.
    """
    cz = math.cos(zeta_pent)
    if not cz > 0.0:
        raise DomainError(f"zeta_pent must satisfy cos(zeta_pent) > 0, got {zeta_pent!r}")
    n = 1.0 / math.sqrt(1.0 + cz)
    h = math.sqrt(cz)
    vecs = tuple(
        make_ray(n * math.cos(k * zeta_pent), n * sign * math.sin(k * zeta_pent), n * h)
        for k, sign in _ANGLE_PATTERN
    )
    return Pentagram(zeta_pent, vecs)


def verify_pentagram(p: Pentagram, tol: float = ORTHO_TOL) -> PentagramReport:
    moduli = tuple(abs(inner(p.vectors[i], p.vectors[j])) for i, j in p.contexts())
    return PentagramReport(moduli, tol)


def kcbs_quantum_sum(state: Ray, p: Pentagram) -> float:
    return math.fsum(test_expectation(state, t) for t in p.tests())


def all_assignments() -> list[AssignmentTuple]:
    return [AssignmentTuple(v) for v in itertools.product((-1, 1), repeat=N_TESTS)]


def admissible_assignments() -> list[AssignmentTuple]:
    return [a for a in all_assignments() if a.is_exclusive()]


def classical_min_sum(constrained: bool = True) -> int:
    """Minimum of sum(t_i) over deterministic +-1 assignments, by enumeration."""
    pool = admissible_assignments() if constrained else all_assignments()
    return min(a.total() for a in pool)


def context_joint_qm(
    state: Ray, a: BinaryTest, b: BinaryTest, tol: float = ORTHO_TOL
) -> JointOutcomeDistribution:
    """Born-rule joint distribution of two compatible tests.

    Raises:
        NotAContext: if the axes are not orthogonal within ``tol``.
    """
    overlap = abs(inner(a.axis, b.axis))
    if overlap > tol:
        raise NotAContext(f"test axes are not orthogonal: |<a|b>| = {overlap:.3e} > {tol:g}")
    p_mp = born_prob(state, a)
    p_pm = born_prob(state, b)
    p_pp = max(0.0, 1.0 - p_mp - p_pm)
    return JointOutcomeDistribution(0.0, p_mp, p_pm, p_pp)
