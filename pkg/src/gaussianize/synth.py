"""Seeded Gaussian-copula generator of non-normal longitudinal data.

Each subject gets a latent standard normal trait. A session value is
``sqrt(rho) * trait + sqrt(1 - rho) * noise`` (so any two sessions correlate
at exactly ``rho`` on the latent scale), pushed through ``quantile(Phi(.))``
of the configured marginal. Every session therefore has the marginal law
exactly, and the latent correlation is known ground truth.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .dataset import LongitudinalDataset
from .distributions import LogNormal, parse_distribution, uniform_open
from .errors import DomainError

__all__ = ["SynthConfig", "generate", "latent_scores"]


@dataclass(frozen=True)
class SynthConfig:
    """Generator settings.

    ``marginal`` is a distribution object or a ``"name:p1,p2"`` string.
    Negative ``latent_correlation`` is only possible with two sessions.
    A single session is allowed (for normality work); reliability analyses
    need at least two.
    """

    n_subjects: int = 193
    n_sessions: int = 2
    latent_correlation: float = 0.7
    marginal: object = LogNormal(0.0, 1.0)
    seed: int = 0
    measures: tuple = ("value",)

    def __post_init__(self):
        if isinstance(self.marginal, str):
            object.__setattr__(self, "marginal", parse_distribution(self.marginal))
        if isinstance(self.measures, str):
            object.__setattr__(self, "measures", (self.measures,))
        if self.n_subjects < 3:
            raise DomainError(f"need at least 3 subjects, got {self.n_subjects}")
        if self.n_sessions < 1:
            raise DomainError(f"need at least 1 session, got {self.n_sessions}")
        rho = self.latent_correlation
        if not -1.0 < rho <= 1.0:
            raise DomainError(f"latent correlation must lie in (-1, 1], got {rho!r}")
        if rho < 0 and self.n_sessions > 2:
            raise DomainError("negative latent correlation needs exactly two sessions")
        if len(set(self.measures)) != len(self.measures) or not self.measures:
            raise DomainError("measure names must be unique and non-empty")


def _std_normal(rng, size):
    return kernels.ndtri(uniform_open(rng, size))


def latent_scores(config, stream=0):
    """(n_subjects, n_sessions) latent standard normal scores for one measure."""
    rng = np.random.default_rng([config.seed, stream])
    n, k, rho = config.n_subjects, config.n_sessions, config.latent_correlation
    trait = _std_normal(rng, n)
    noise = _std_normal(rng, n * k).reshape(n, k)
    if rho >= 0:
        return math.sqrt(rho) * trait[:, None] + math.sqrt(1.0 - rho) * noise
    z = np.empty((n, k))
    z[:, 0] = trait
    z[:, 1] = rho * trait + math.sqrt(1.0 - rho * rho) * noise[:, 1]
    return z


def generate(config):
    """Long-format dataset with subjects ``s001...``, sessions ``1..k``."""
    width = max(3, len(str(config.n_subjects)))
    subjects = [f"s{i:0{width}d}" for i in range(1, config.n_subjects + 1)]
    records = []
    for stream, measure in enumerate(config.measures):
        values = config.marginal.from_normal(latent_scores(config, stream))
        for i, subject in enumerate(subjects):
            for j in range(config.n_sessions):
                records.append((subject, j + 1, measure, values[i, j]))
    return LongitudinalDataset(records)
