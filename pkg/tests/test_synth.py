import numpy as np
import pytest

from gaussianize import (
    LogNormal, SynthConfig, anderson_darling, average_test_retest, gaussianize, generate, pearson,
)
from gaussianize.errors import DomainError
from gaussianize.synth import latent_scores


def test_seed_determinism():
    cfg = SynthConfig(n_subjects=50, n_sessions=3, seed=11, measures=("a", "b"))
    assert generate(cfg) == generate(cfg)
    assert generate(cfg) != generate(SynthConfig(n_subjects=50, n_sessions=3, seed=12, measures=("a", "b")))


def test_layout():
    d = generate(SynthConfig(n_subjects=12, n_sessions=2, measures=("x", "y")))
    assert len(d) == 48
    assert d.subjects()[0] == "s001" and d.sessions() == [1, 2]
    assert d.measures() == ["x", "y"]


def test_measures_use_independent_streams():
    d = generate(SynthConfig(n_subjects=300, n_sessions=1, measures=("a", "b"), seed=1))
    assert abs(pearson(d.pooled("a"), d.pooled("b"))) < 0.2


def test_rho_one_gives_identical_sessions():
    d = generate(SynthConfig(n_subjects=40, n_sessions=3, latent_correlation=1.0, marginal="normal:0,1"))
    s1, s3 = d.session_values("value", 1), d.session_values("value", 3)
    assert s1 == s3


def test_rho_zero_null_width():
    d = generate(SynthConfig(n_subjects=1000, n_sessions=2, latent_correlation=0.0, seed=3))
    r = average_test_retest(d, "value").mean_r
    assert abs(r) < 3 / np.sqrt(1000)


def test_negative_rho_two_sessions():
    z = latent_scores(SynthConfig(n_subjects=5000, n_sessions=2, latent_correlation=-0.5))
    assert np.corrcoef(z.T)[0, 1] == pytest.approx(-0.5, abs=0.04)
    with pytest.raises(DomainError):
        SynthConfig(n_sessions=3, latent_correlation=-0.5)


def test_latent_correlation_matrix():
    z = latent_scores(SynthConfig(n_subjects=20000, n_sessions=4, latent_correlation=0.7))
    c = np.corrcoef(z.T)
    off = c[~np.eye(4, dtype=bool)]
    assert np.all(np.abs(off - 0.7) < 0.02)
    assert np.all(np.abs(z.std(axis=0) - 1) < 0.02)


def test_marginal_is_exact():
    d = generate(SynthConfig(n_subjects=193, n_sessions=2, marginal=LogNormal(0, 1), seed=2))
    # pooled lognormal values are strongly non-normal, their logs are not
    assert anderson_darling(d.pooled("value")).p_value < 0.001
    assert anderson_darling(np.log(list(d.session_values("value", 1).values()))).p_value > 0.001


def test_rank_normal_recovers_latent_rank_correlation():
    cfg = SynthConfig(n_subjects=193, n_sessions=2, seed=5)
    d = generate(cfg)
    z = latent_scores(cfg)
    t = d.replace_values("value", lambda v: gaussianize(v)[0])
    want = pearson(gaussianize(z[:, 0])[0], gaussianize(z[:, 1])[0])
    assert average_test_retest(t, "value").mean_r == pytest.approx(want, abs=0.02)


@pytest.mark.parametrize("kwargs", [
    dict(n_subjects=2), dict(n_sessions=0), dict(latent_correlation=1.5),
    dict(latent_correlation=-1.0), dict(measures=("a", "a")), dict(marginal="beta:1,2"),
])
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        SynthConfig(**kwargs)
