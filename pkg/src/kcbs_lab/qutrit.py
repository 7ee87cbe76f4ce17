"""Rays, binary tests and Born probabilities on a three-level system.

Amplitudes are plain Python ``complex`` numbers; a three-component vector is
small enough that numpy would only add overhead and hide rounding behaviour.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

from .errors import ZeroVector

ComplexAmplitude = complex

#: Squared-norm threshold below which a vector cannot be normalized.
MIN_NORM_SQ = 1e-24
#: Modulus below which a component is treated as zero for phase fixing.
PHASE_EPS = 1e-12
#: Default absolute tolerance on |<a|b>| for orthogonality.
ORTHO_TOL = 1e-10
# Re-normalization is skipped this close to unit norm, which makes
# make_ray bitwise idempotent.
_UNIT_SLACK = 1e-15


def _check_finite(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite amplitude {z!r}")
    return z


@dataclass(frozen=True)
class Ray:
    """Unit vector in C^3 with the global phase fixed.

    The first component whose modulus exceeds ``PHASE_EPS`` is real and
    nonnegative. Build instances with :func:`make_ray`; the constructor only
    validates.
    """

    c0: complex
    c1: complex
    c2: complex

    def __post_init__(self) -> None:
        comps = [_check_finite(c) for c in (self.c0, self.c1, self.c2)]
        norm_sq = sum(abs(c) ** 2 for c in comps)
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"ray is not unit norm (|v|^2 = {norm_sq!r})")
        lead = _leading(comps)
        if lead is not None and (comps[lead].imag != 0.0 or comps[lead].real < 0.0):
            raise ValueError("ray is not phase-canonical")

    @property
    def components(self) -> tuple[complex, complex, complex]:
        return (self.c0, self.c1, self.c2)

    def __iter__(self):
        return iter(self.components)

    def isclose(self, other: Ray, tol: float = 1e-12) -> bool:
        """Componentwise comparison of the canonical representatives."""
        return all(abs(a - b) <= tol for a, b in zip(self, other))

    def __repr__(self) -> str:
        parts = ", ".join(_fmt_complex(c) for c in self)
        return f"Ray({parts})"


def _fmt_complex(z: complex) -> str:
    if z.imag == 0.0:
        return f"{z.real:.7g}"
    return f"{z.real:.7g}{z.imag:+.7g}j"


def _leading(comps) -> int | None:
    for i, c in enumerate(comps):
        if abs(c) > PHASE_EPS:
            return i
    return None


@dataclass(frozen=True)
class BinaryTest:
    """The observable ``1 - 2|axis><axis|``; outcome -1 means projection onto the axis."""

    axis: Ray

    def matrix(self) -> list[list[complex]]:
        a = self.axis.components
        return [
            [(1.0 if i == j else 0.0) - 2.0 * a[i] * a[j].conjugate() for j in range(3)]
            for i in range(3)
        ]


def make_ray(c0: complex, c1: complex, c2: complex) -> Ray:
    """Normalize ``(c0, c1, c2)`` and remove its global phase.

    Raises:
        ZeroVector: if the squared norm is at most ``MIN_NORM_SQ``.
    """
    comps = [_check_finite(c) for c in (c0, c1, c2)]
    norm_sq = math.fsum(abs(c) ** 2 for c in comps)
    if norm_sq <= MIN_NORM_SQ:
        raise ZeroVector(f"cannot normalize a vector with |v|^2 = {norm_sq:.3g}")
    norm = math.sqrt(norm_sq)
    if abs(norm - 1.0) > _UNIT_SLACK:
        comps = [c / norm for c in comps]
    lead = _leading(comps)
    c = comps[lead]
    if c.imag == 0.0 and c.real > 0.0:
        out = comps
    else:
        unphase = c.conjugate() / abs(c)
        out = [z * unphase for z in comps]
    out[lead] = complex(abs(c), 0.0)
    return Ray(*out)


def ray(values: Iterable[complex]) -> Ray:
    """Convenience wrapper: ``ray([x, y, z])``."""
    c0, c1, c2 = values
    return make_ray(c0, c1, c2)


def inner(a: Ray, b: Ray) -> complex:
    """Return ``<a|b>``, conjugate-linear in ``a``."""
    return sum((x.conjugate() * y for x, y in zip(a, b)), 0j)


def born_prob(state: Ray, test: BinaryTest) -> float:
    """Probability of outcome -1, ``|<axis|state>|^2``."""
    p = abs(inner(test.axis, state)) ** 2
    return min(1.0, max(0.0, p))


def test_expectation(state: Ray, test: BinaryTest) -> float:
    return 1.0 - 2.0 * born_prob(state, test)


# keep pytest from collecting the name above when imported into test modules
test_expectation.__test__ = False


def is_orthogonal(a: Ray, b: Ray, tol: float = ORTHO_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return abs(inner(a, b)) <= tol


def rotate_z(r: Ray, angle: float) -> Ray:
    """Rotate ``r`` by ``angle`` about the third basis axis.

    This is the real SO(2) action on the first two components; it fixes
    ``(0, 0, 1)`` and preserves every inner product.
    """
    c, s = math.cos(angle), math.sin(angle)
    return make_ray(r.c0 * c - r.c1 * s, r.c0 * s + r.c1 * c, r.c2)


def phase(theta: float) -> complex:
    return cmath.exp(1j * theta)


Z_STATE = make_ray(0, 0, 1)
