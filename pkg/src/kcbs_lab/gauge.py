"""Canonical parameters for a pair of compatible tests.

With the state on the Z axis, a rotation about Z does not change any
observable probability. Fixing that freedom puts the first test in the XZ
plane at polar angle ``zeta``, and the second test, orthogonal to it, is then
fixed up to an irrelevant phase by its own polar angle ``theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NotAContext
from .qutrit import ORTHO_TOL, Ray, Z_STATE, inner, make_ray, phase

HALF_PI = math.pi / 2
TWO_PI = 2 * math.pi
# Slack on domain edges; arccos of an overlap lands a few ulps off exact boundaries.
DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class CanonicalContextParams:
    zeta_canon: float
    theta: float
    rho: float = 0.0

    def __post_init__(self) -> None:
        if not validate_domain(self.zeta_canon, self.theta):
            raise DomainError(_domain_message(self.zeta_canon, self.theta))
        if not 0.0 <= self.rho < TWO_PI:
            raise DomainError(f"rho must lie in [0, 2*pi), got {self.rho!r}")


def _domain_message(zeta_canon: float, theta: float) -> str:
    if not (0.0 - DOMAIN_TOL <= zeta_canon <= HALF_PI + DOMAIN_TOL):
        return f"zeta_canon = {zeta_canon:.7g} is outside [0, pi/2]"
    return (
        f"theta = {theta:.7g} is outside [pi/2, pi/2 + zeta_canon] = "
        f"[{HALF_PI:.7g}, {HALF_PI + zeta_canon:.7g}]; need pi/2 <= theta <= pi/2 + zeta"
    )


def validate_domain(zeta_canon: float, theta: float) -> bool:
    """True iff ``0 <= zeta <= pi/2`` and ``pi/2 <= theta <= pi/2 + zeta``."""
    if not (math.isfinite(zeta_canon) and math.isfinite(theta)):
        return False
    if not -DOMAIN_TOL <= zeta_canon <= HALF_PI + DOMAIN_TOL:
        return False
    return HALF_PI - DOMAIN_TOL <= theta <= HALF_PI + zeta_canon + DOMAIN_TOL


def chi1_of(zeta_canon: float) -> Ray:
    if not -DOMAIN_TOL <= zeta_canon <= HALF_PI + DOMAIN_TOL:
        raise DomainError(f"zeta_canon = {zeta_canon:.7g} is outside [0, pi/2]")
    return make_ray(math.sin(zeta_canon), 0.0, math.cos(zeta_canon))


def solve_omega(zeta_canon: float, theta: float) -> float:
    """Azimuthal opening of the second test that makes it orthogonal to the first.

    Solves ``cos(omega) = -1 / (tan(zeta) tan(theta))`` for ``omega`` in
    ``[0, pi/2]``. At ``theta = pi/2`` the continuous limit ``omega = pi/2``
    is returned.
    """
    if not validate_domain(zeta_canon, theta):
        raise DomainError(_domain_message(zeta_canon, theta))
    ct, st = math.cos(theta), math.sin(theta)
    if abs(ct) < 1e-15:
        return HALF_PI
    if st < 1e-15:
        # theta = pi with zeta = pi/2: the second test is the state axis and omega is moot
        return 0.0
    sz = math.sin(zeta_canon)
    if sz == 0.0:
        raise DomainError(_domain_message(zeta_canon, theta))
    # -1/(tan z tan t) written without the tan singularities
    cos_omega = -(ct * math.cos(zeta_canon)) / (st * sz)
    if abs(cos_omega) > 1.0 + 1e-12:
        raise DomainError(_domain_message(zeta_canon, theta))
    return math.acos(min(1.0, max(0.0, cos_omega)))


def chi2_of(zeta_canon: float, theta: float, rho: float = 0.0) -> Ray:
    """Second test axis ``(sin t cos w, e^{i rho} sin t sin w, cos t)`` with the solved omega."""
    omega = solve_omega(zeta_canon, theta)
    st = math.sin(theta)
    return make_ray(
        st * math.cos(omega),
        phase(rho) * st * math.sin(omega),
        math.cos(theta),
    )


def gauge_fix(state: Ray, a: Ray, b: Ray, tol: float = ORTHO_TOL) -> CanonicalContextParams:
    """Reduce an ordered orthogonal pair ``(a, b)`` to canonical ``(zeta, theta)``.

    ``a`` takes the first-test slot: ``zeta = arccos|<a|state>|`` and
    ``theta = arccos(-|<b|state>|)``. The free phase is reported as 0. The
    state must already be aligned with ``(0, 0, 1)``.

    Raises:
        NotAContext: if ``a`` and ``b`` are not orthogonal within ``tol``.
        DomainError: if ``state`` is not the Z-aligned state.
    """
    if not state.isclose(Z_STATE, 1e-12):
        raise DomainError("gauge fixing requires the state to be aligned with (0, 0, 1)")
    overlap = abs(inner(a, b))
    if overlap > tol:
        raise NotAContext(f"test axes are not orthogonal: |<a|b>| = {overlap:.3e} > {tol:g}")
    # arccos|<a|state>| evaluated as atan2(transverse, axial): stable near 0 and pi/2
    zeta = math.atan2(math.hypot(abs(a.c0), abs(a.c1)), abs(a.c2))
    theta = math.atan2(math.hypot(abs(b.c0), abs(b.c1)), -abs(b.c2))
    # |<a|state>|^2 + |<b|state>|^2 <= 1 makes theta <= pi/2 + zeta exactly; clamp the rounding
    theta = min(theta, HALF_PI + zeta)
    return CanonicalContextParams(zeta, theta, 0.0)
