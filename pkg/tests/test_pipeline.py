import numpy as np
import pytest

from priormask.errors import ShapeError
from priormask.masks import Mask
from priormask.metrics import evaluate_pair
from priormask.pipeline import (AnalysisConfig, analyse, edge_padding, enhance,
                                filter_with_mask, oracle_prior, prior_shape, separate)
from priormask.priors import DegradationSettings, LtssProfile
from priormask.signal_io import Waveform, mix
from priormask.synth import tone

from conftest import random_wave


@pytest.mark.parametrize("n", [640, 1000, 16000, 16123])
def test_padding_covers_every_sample(n):
    cfg = AnalysisConfig()
    left, right = edge_padding(n, cfg.stft)
    assert left == 480
    assert (n + left + right - 640) % 160 == 0
    assert prior_shape(n, cfg)[0] == analyse(Waveform(np.zeros(n), 16000)).mel.shape[0]


@pytest.mark.parametrize("n", [1000, 16123])
def test_unmasked_roundtrip_is_exact(rng, n):
    w = random_wave(rng, n)
    a = analyse(w)
    out = filter_with_mask(a, Mask(np.ones(a.mel.shape), "binary"))
    assert len(out) == n
    np.testing.assert_allclose(out.samples, w.samples, atol=1e-10)


def test_two_tone_exact_priors():
    s1, s2 = tone(440.0), tone(2000.0)
    m = mix(s1, s2)
    p1, p2 = analyse(s1).mel, analyse(s2).mel
    for method in ("binary", "ratio"):
        rep = evaluate_pair(separate(m, p1, p2, method), [s1, s2])
        assert min(s.sdr for s in rep.scores) > 30


def test_prior_shape_checked(rng):
    m = random_wave(rng, 8000)
    good = analyse(m).mel
    bad = good.with_values(good.values[:-1])
    with pytest.raises(ShapeError, match="prior 2"):
        separate(m, good, bad)


def test_identical_binary_priors_route_all_to_second(rng):
    m = random_wave(rng, 8000)
    p = analyse(m).mel
    e1, e2 = separate(m, p, p, "binary")
    assert np.all(e1.samples == 0)
    np.testing.assert_allclose(e2.samples, m.samples, atol=1e-10)


def test_enhance_pass_and_block(rng):
    noisy = random_wave(rng, 8000)
    prior = analyse(noisy).mel
    low = LtssProfile(75.0, np.full(80, prior.values.min() / 2))
    high = LtssProfile(75.0, np.full(80, prior.values.max() * 2))
    np.testing.assert_allclose(enhance(noisy, prior, low).samples, noisy.samples, atol=1e-10)
    assert np.all(enhance(noisy, prior, high).samples == 0)


def test_oracle_prior_deterministic():
    s = tone(300.0, 0.5)
    d = DegradationSettings(0.5, 3, 4)
    np.testing.assert_array_equal(oracle_prior(s, d).values, oracle_prior(s, d).values)
