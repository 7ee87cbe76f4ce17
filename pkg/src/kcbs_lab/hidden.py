"""Sphere hidden-variable model for a gauge-fixed pair of compatible tests.

Hidden configurations are points ``(omega, chi_az)`` on the unit sphere,
measured from the state axis, with density ``sin(omega) / 4 pi``. Each test
responds deterministically through a polar-cap threshold that depends only on
its own canonical angle.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gauge import CanonicalContextParams, gauge_fix, validate_domain
from .pentagram import OUTCOMES, JointOutcomeDistribution, Pentagram
from .qutrit import Ray

#: Identifier of the random stream; part of the reproducibility contract.
RNG_ALGORITHM = "numpy-PCG64/SeedSequence.spawn/u53-raw"
DEFAULT_CHUNKS = 8
DEFAULT_PANELS = 10_000
THREADS_ENV = "KCBS_LAB_THREADS"

_TWO_PI = 2.0 * math.pi
_U53 = 2.0**-53


@dataclass(frozen=True)
class HiddenConfig:
    omega: float
    chi_az: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.omega <= math.pi:
            raise DomainError(f"omega must lie in [0, pi], got {self.omega!r}")
        if not 0.0 <= self.chi_az < _TWO_PI:
            raise DomainError(f"chi_az must lie in [0, 2*pi), got {self.chi_az!r}")


@dataclass(frozen=True)
class SimulationResult:
    counts: tuple[int, int, int, int]
    n_samples: int
    estimate: JointOutcomeDistribution
    std_errors: tuple[float, float, float, float]
    seed: int
    chunks: int
    rng_algorithm: str = RNG_ALGORITHM

    def z_scores(self, reference: JointOutcomeDistribution) -> tuple[float | None, ...]:
        """Standardized deviation per outcome using the plug-in standard error.

        Where the plug-in error vanishes the score is 0 if the estimate equals
        the reference and ``None`` (undefined) otherwise.
        """
        out: list[float | None] = []
        for est, ref, se in zip(self.estimate.as_tuple(), reference.as_tuple(), self.std_errors):
            if se > 0.0:
                out.append((est - ref) / se)
            else:
                out.append(0.0 if est == ref else None)
        return tuple(out)


def density(omega: float) -> float:
    """Sphere density ``sin(omega) / (4 pi)``; its azimuthal integral is ``sin(omega) / 2``."""
    if not 0.0 <= omega <= math.pi:
        raise DomainError(f"omega must lie in [0, pi], got {omega!r}")
    return math.sin(omega) / (4.0 * math.pi)


def respond_t1(cfg: HiddenConfig, zeta_canon: float) -> int:
    # -1 on (2 zeta, pi]; everything else, including omega = 0, is +1
    return -1 if cfg.omega > 2.0 * zeta_canon else 1


def respond_t2(cfg: HiddenConfig, theta: float) -> int:
    # -1 on (0, 2 theta - pi]
    return -1 if 0.0 < cfg.omega <= 2.0 * theta - math.pi else 1


def _respond_t1_array(omega: np.ndarray, zeta_canon: float) -> np.ndarray:
    return np.where(omega > 2.0 * zeta_canon, -1, 1)


def _respond_t2_array(omega: np.ndarray, theta: float) -> np.ndarray:
    return np.where((omega > 0.0) & (omega <= 2.0 * theta - math.pi), -1, 1)


def _check_params(params: CanonicalContextParams) -> None:
    if not validate_domain(params.zeta_canon, params.theta):
        raise DomainError(f"invalid canonical parameters {params!r}")


def joint_analytic(params: CanonicalContextParams) -> JointOutcomeDistribution:
    """Closed-form cap areas of the four response regions."""
    _check_params(params)
    c2z = math.cos(2.0 * params.zeta_canon)
    c2t = math.cos(2.0 * params.theta)
    return JointOutcomeDistribution(
        0.0,
        (1.0 + c2z) / 2.0,
        (1.0 + c2t) / 2.0,
        max(0.0, -(c2z + c2t) / 2.0),
    )


def integrate_oracle(
    params: CanonicalContextParams, n_panels: int = DEFAULT_PANELS
) -> JointOutcomeDistribution:
    """Quadrature of the density over each response region.

    The polar axis is cut at the two response thresholds; on each piece the
    responses are constant, so they are read off by evaluating the response
    functions at the piece's midpoint, and the piece's mass is integrated with
    a composite midpoint rule at panel width ``pi / n_panels`` (each piece
    rounds up to a whole number of panels) and again at half that width;
    the Richardson combination of the two is accurate to O(n_panels**-4).
    The azimuth contributes an exact factor of 2 pi since nothing depends on
    it.
    """
    _check_params(params)
    if n_panels < 100:
        raise ValueError("n_panels must be at least 100")
    cuts = sorted({0.0, math.pi, *(min(math.pi, max(0.0, x)) for x in (
        2.0 * params.zeta_canon, 2.0 * params.theta - math.pi))})
    mass = dict.fromkeys(OUTCOMES, 0.0)
    width = math.pi / n_panels
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        mid = HiddenConfig(0.5 * (lo + hi), 0.0)
        key = (respond_t1(mid, params.zeta_canon), respond_t2(mid, params.theta))
        m = max(1, math.ceil((hi - lo) / width))
        coarse = _midpoint(lo, hi, m)
        fine = _midpoint(lo, hi, 2 * m)
        # one Richardson step cancels the h^2 term of the midpoint error
        mass[key] += _TWO_PI * (4.0 * fine - coarse) / 3.0
    return JointOutcomeDistribution(*(mass[k] for k in OUTCOMES))


def _midpoint(lo: float, hi: float, m: int) -> float:
    h = (hi - lo) / m
    nodes = lo + h * (np.arange(m) + 0.5)
    return h * math.fsum(np.sin(nodes) / (4.0 * math.pi))


def make_rng(seed: int) -> np.random.PCG64:
    return np.random.PCG64(np.random.SeedSequence(seed))


def _uniforms(bitgen: np.random.PCG64, n: int) -> np.ndarray:
    # top 53 bits of each raw 64-bit draw -> [0, 1); independent of numpy's float helpers
    raw = bitgen.random_raw(n)
    return (raw >> np.uint64(11)).astype(np.float64) * _U53


def sample_configs(bitgen: np.random.PCG64, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` uniform sphere points as ``(omega, chi_az)`` arrays.

    Each configuration consumes two raw draws, in order: one for
    ``cos(omega)`` (inverse CDF, uniform on [-1, 1]) and one for the azimuth.
    """
    u = _uniforms(bitgen, 2 * n).reshape(n, 2)
    cos_omega = 1.0 - 2.0 * u[:, 0]
    omega = np.arccos(cos_omega)
    chi_az = _TWO_PI * u[:, 1]
    # 2 pi * u can round up to 2 pi for u just below 1
    chi_az[chi_az >= _TWO_PI] = 0.0
    return omega, chi_az


def sample_config(bitgen: np.random.PCG64) -> HiddenConfig:
    omega, chi_az = sample_configs(bitgen, 1)
    return HiddenConfig(float(omega[0]), float(chi_az[0]))


def _chunk_sizes(n_samples: int, chunks: int) -> list[int]:
    base, extra = divmod(n_samples, chunks)
    return [base + (1 if k < extra else 0) for k in range(chunks)]


def _tally_chunk(params: CanonicalContextParams, n: int, seq: np.random.SeedSequence) -> np.ndarray:
    omega, _ = sample_configs(np.random.PCG64(seq), n)
    t1 = _respond_t1_array(omega, params.zeta_canon)
    t2 = _respond_t2_array(omega, params.theta)
    # index 0..3 in OUTCOMES order: (t1 == +1) * 2 + (t2 == +1)
    idx = (t1 > 0).astype(np.int64) * 2 + (t2 > 0).astype(np.int64)
    return np.bincount(idx, minlength=4)


def thread_count(chunks: int) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if cap < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, chunks))


def simulate(
    params: CanonicalContextParams,
    n_samples: int,
    seed: int,
    chunks: int = DEFAULT_CHUNKS,
    threads: int | None = None,
) -> SimulationResult:
    """Monte Carlo estimate of the joint outcome distribution.

    ``n_samples`` is split into ``min(chunks, n_samples)`` nearly equal
    chunks, chunk ``k`` drawing from the ``k``-th child of
    ``SeedSequence(seed)``. Counts depend only on ``(seed, n_samples,
    chunks)``; ``threads`` affects speed only.
    """
    _check_params(params)
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if chunks < 1:
        raise ValueError("chunks must be at least 1")
    chunks = min(chunks, n_samples)
    seqs = np.random.SeedSequence(seed).spawn(chunks)
    sizes = _chunk_sizes(n_samples, chunks)
    workers = thread_count(chunks) if threads is None else max(1, min(threads, chunks))
    if workers == 1:
        parts = [_tally_chunk(params, n, s) for n, s in zip(sizes, seqs)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _tally_chunk(params, *a), zip(sizes, seqs)))
    counts = tuple(int(c) for c in np.sum(parts, axis=0))
    est = tuple(c / n_samples for c in counts)
    se = tuple(math.sqrt(p * (1.0 - p) / n_samples) for p in est)
    return SimulationResult(
        counts=counts,
        n_samples=n_samples,
        estimate=JointOutcomeDistribution(*est),
        std_errors=se,
        seed=seed,
        chunks=chunks,
    )


def pentagram_contexts(state: Ray, p: Pentagram) -> list[CanonicalContextParams]:
    """Gauge-fixed parameters of the five contexts (chi_i, chi_{i+1})."""
    return [gauge_fix(state, p.vectors[i], p.vectors[j]) for i, j in p.contexts()]


def model_kcbs_sum(state: Ray, p: Pentagram) -> float:
    """Sum of the model's test expectations over the pentagram, each test counted once.

    Test ``i`` is read from context ``(i, i+1)``, where it sits in the first
    slot and ``P[T = -1]`` is the mass of the ``(-1, +1)`` region.
    """
    total = []
    for params in pentagram_contexts(state, p):
        dist = joint_analytic(params)
        p_minus = dist.p_mm + dist.p_mp
        total.append(1.0 - 2.0 * p_minus)
    return math.fsum(total)
