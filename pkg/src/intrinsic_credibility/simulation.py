"""Monte Carlo check of the replication-probability reading of p_IC.

Under a flat initial prior the first study gives ``theta | est1 ~ N(est1, se^2)``
and an identically designed replication gives ``est2 | theta ~ N(theta, se^2)``.
The simulator draws both stages explicitly and counts replications whose
estimate has the opposite sign (``est2 <= 0`` when ``est1 > 0``, ``est2 >= 0``
when ``est1 < 0``).  The exact flip probability is ``Phi(-|est1| / (sqrt(2) se))``,
which equals ``p_IC / 2``.

Random numbers
--------------
Draws are produced in fixed-size chunks.  Chunk ``i`` uses
``numpy.random.Generator(PCG64(SeedSequence(seed).spawn(n_chunks)[i]))`` and
fills a ``(2, m)`` block of standard normals with ``standard_normal``
(numpy's ziggurat sampler): row 0 drives the latent effect, row 1 the
replication noise.  The chunk layout depends only on ``num_draws``, so the
per-chunk counts, and hence the result, are identical for any number of
worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import DomainError
from .special import normal_upper_tail

CHUNK_SIZE = 1 << 16
DEFAULT_DRAWS = 1_000_000


@dataclass(frozen=True)
class SimulationConfig:
    first_estimate: float
    std_error: float
    num_draws: int = DEFAULT_DRAWS
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.first_estimate) and math.isfinite(self.std_error)):
            raise DomainError("estimate and standard error must be finite")
        if not self.std_error > 0:
            raise DomainError(f"std_error must be positive, got {self.std_error!r}")
        if int(self.num_draws) != self.num_draws or self.num_draws < 1:
            raise DomainError(f"num_draws must be a positive integer, got {self.num_draws!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise DomainError(f"seed must be a non-negative integer, got {self.seed!r}")


@dataclass(frozen=True)
class SimulationResult:
    flip_probability: float
    monte_carlo_se: float
    closed_form: float
    num_draws: int

    @property
    def p_rep(self) -> float:
        """Empirical probability that the replication keeps the sign."""
        return 1.0 - self.flip_probability

    @property
    def z_score(self) -> float:
        """Discrepancy from the closed form in Monte Carlo standard errors."""
        if self.monte_carlo_se == 0.0:
            return 0.0 if self.flip_probability == self.closed_form else math.inf
        return (self.flip_probability - self.closed_form) / self.monte_carlo_se


def closed_form_flip(first_estimate: float, std_error: float) -> float:
    """Pr(replication estimate has the opposite sign) = Phi(-|est1| / (sqrt(2) se))."""
    if not std_error > 0:
        raise DomainError(f"std_error must be positive, got {std_error!r}")
    return normal_upper_tail(abs(first_estimate) / (math.sqrt(2.0) * std_error))


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

@_accel.njit
def _count_flips_loop(z_effect, z_noise, first_estimate, std_error):
    n = 0
    if first_estimate > 0.0:
        for i in range(z_effect.shape[0]):
            theta = first_estimate + std_error * z_effect[i]
            if theta + std_error * z_noise[i] <= 0.0:
                n += 1
    else:
        for i in range(z_effect.shape[0]):
            theta = first_estimate + std_error * z_effect[i]
            if theta + std_error * z_noise[i] >= 0.0:
                n += 1
    return n


def count_flips_numpy(z_effect, z_noise, first_estimate, std_error):
    theta = first_estimate + std_error * z_effect
    replicate = theta + std_error * z_noise
    if first_estimate > 0.0:
        return int(np.count_nonzero(replicate <= 0.0))
    return int(np.count_nonzero(replicate >= 0.0))


def count_flips_numba(z_effect, z_noise, first_estimate, std_error):
    return int(_count_flips_loop(z_effect, z_noise, float(first_estimate), float(std_error)))


count_flips = count_flips_numba if _accel.USE_NUMBA else count_flips_numpy


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def _chunk_sizes(num_draws: int) -> list[int]:
    full, rest = divmod(num_draws, CHUNK_SIZE)
    return [CHUNK_SIZE] * full + ([rest] if rest else [])


def _chunk_normals(seed_seq: np.random.SeedSequence, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    return rng.standard_normal((2, size))


def _run_chunks(config: SimulationConfig, task, workers: int):
    sizes = _chunk_sizes(int(config.num_draws))
    children = np.random.SeedSequence(int(config.seed)).spawn(len(sizes))
    jobs = list(zip(children, sizes))
    if workers <= 1 or len(jobs) == 1:
        return [task(child, size) for child, size in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: task(*job), jobs))


def simulate_replication(config: SimulationConfig, workers: int = 1) -> SimulationResult:
    """Estimate the sign-flip probability of an identical replication.

    Parameters
    ----------
    config : SimulationConfig
        First-study estimate, shared standard error, number of draws and seed.
    workers : int
        Threads used to process chunks.  Does not affect the result.

    Raises
    ------
    DomainError
        If the first estimate is exactly zero (no direction to replicate).
    """
    if config.first_estimate == 0.0:
        raise DomainError("first estimate is zero: the direction of the effect is undefined")

    def task(child, size):
        z = _chunk_normals(child, size)
        return count_flips(z[0], z[1], config.first_estimate, config.std_error)

    flips = sum(_run_chunks(config, task, workers))
    n = int(config.num_draws)
    f = flips / n
    return SimulationResult(
        flip_probability=f,
        monte_carlo_se=math.sqrt(f * (1.0 - f) / n),
        closed_form=closed_form_flip(config.first_estimate, config.std_error),
        num_draws=n,
    )


def sample_replication_estimates(config: SimulationConfig) -> np.ndarray:
    """The simulated replication estimates themselves, same streams as
    :func:`simulate_replication`."""

    def task(child, size):
        z = _chunk_normals(child, size)
        theta = config.first_estimate + config.std_error * z[0]
        return theta + config.std_error * z[1]

    return np.concatenate(_run_chunks(config, task, workers=1))
