"""Event-level Monte Carlo oracle for every analytic per-pulse statistic.

Each pulse is simulated photon by photon: source emission, loss, bath or
pre-channel noise coupling, polarization routing, depolarization flips,
heralding and dark counts.  Two detection geometries are supported: the
polarization-resolving key-generation setup ("key": accepted events, errors,
single-photon fraction) and the 50:50 autocorrelation setup ("autocorr":
single/coincidence/no-click probabilities and photon-arrival statistics).

Sampling is split into fixed-size blocks, each seeded from (seed, block
index), so results are bit-identical however the blocks are distributed
over workers.  Dark counts follow the channel models' accounting: they
decide an event only when no real photon reached the detectors, which is
the leading-order regime the analytic expressions encode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson as _poisson

from . import photon_stats as ps
from .errors import ParameterDomainError
from .noise_before import NoiseBeforeParams
from .spdc import SpdcParams
from .thermal_bath import ThermalBathParams

KEY = "key"
AUTOCORR = "autocorr"

_BLOCK = 1 << 16


@dataclass(frozen=True)
class McConfig:
    samples: int = 1_000_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ParameterDomainError(f"samples must be >= 1, got {self.samples}")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_err: float
    samples: int


def _bernoulli_estimate(count: int, n: int) -> McEstimate:
    v = count / n
    return McEstimate(value=v, std_err=math.sqrt(max(v * (1.0 - v), 0.0) / n), samples=n)


def _sample_noise(rng: np.random.Generator, dist: ps.PhotonDistribution, n: int) -> np.ndarray:
    if dist.mean == 0.0:
        return np.zeros(n, dtype=np.int64)
    if dist.kind == ps.THERMAL:
        return rng.geometric(1.0 / (1.0 + dist.mean), size=n).astype(np.int64) - 1
    return rng.poisson(dist.mean, size=n).astype(np.int64)


def _sample_heralded_pairs(rng: np.random.Generator, nu: float, n: int) -> np.ndarray:
    """Pair counts conditioned on the ideal herald (at least one pair)."""
    p0 = math.exp(-nu)
    u = p0 + (1.0 - p0) * rng.random(n)
    u = np.maximum(u, np.nextafter(p0, 1.0))  # keep strictly above the vacuum mass
    return _poisson.ppf(u, nu).astype(np.int64)


class _Tally:
    def __init__(self) -> None:
        self.counts: dict[str, int] = {}
        self.n = 0

    def add(self, n: int, **indicator_counts: int) -> None:
        self.n += n
        for name, c in indicator_counts.items():
            self.counts[name] = self.counts.get(name, 0) + int(c)


def simulate(params, config: McConfig, target: str = KEY) -> dict[str, McEstimate]:
    """Monte Carlo estimates of the per-pulse statistics of one channel model.

    Key geometry returns p_exp and qber (plus y and p_multi for the heralded
    source); autocorrelation geometry returns p_single, p_coincidence,
    p_none, omega1 and omega2plus.
    """
    if target not in (KEY, AUTOCORR):
        raise ParameterDomainError(f"unknown target geometry: {target!r}")
    tally = _Tally()
    done = 0
    block_index = 0
    while done < config.samples:
        n = min(_BLOCK, config.samples - done)
        rng = np.random.default_rng([config.seed, block_index])
        if isinstance(params, ThermalBathParams):
            _block_thermal_bath(rng, params, n, target, tally)
        elif isinstance(params, NoiseBeforeParams):
            _block_noise_before(rng, params, n, target, tally)
        elif isinstance(params, SpdcParams):
            _block_spdc(rng, params, n, target, tally)
        else:
            raise ParameterDomainError(f"unknown model parameter record: {type(params).__name__}")
        done += n
        block_index += 1
    return _assemble(tally, target, heralded=isinstance(params, SpdcParams))


def _assemble(tally: _Tally, target: str, heralded: bool) -> dict[str, McEstimate]:
    n = tally.n
    c = tally.counts
    if target == AUTOCORR:
        return {
            "p_single": _bernoulli_estimate(c["single"], n),
            "p_coincidence": _bernoulli_estimate(c["coinc"], n),
            "p_none": _bernoulli_estimate(c["none"], n),
            "omega1": _bernoulli_estimate(c["omega1"], n),
            "omega2plus": _bernoulli_estimate(c["omega2plus"], n),
        }
    out = {"p_exp": _bernoulli_estimate(c["accepted"], n)}
    n_acc = c["accepted"]
    if n_acc > 0:
        out["qber"] = _bernoulli_estimate(c["error"], n_acc)
    for name, key in (
        ("p_exp_signal", "accepted_signal"),
        ("p_exp_noise", "accepted_noise"),
        ("p_exp_noise_signal", "accepted_noise_signal"),
        ("p_exp_dark", "accepted_dark"),
    ):
        if key in c:
            out[name] = _bernoulli_estimate(c[key], n)
    if heralded:
        out["p_multi"] = _bernoulli_estimate(c["multi"], n)
        out["y"] = _ratio_estimate(
            multi=c["multi"], acc=n_acc, both=c["multi_and_accepted"], n=n
        )
    return out


def _ratio_estimate(multi: int, acc: int, both: int, n: int) -> McEstimate:
    """y = max(0, 1 - p_multi / p_exp) with a delta-method standard error."""
    m = multi / n
    a = acc / n
    if a == 0.0:
        return McEstimate(value=0.0, std_err=0.0, samples=n)
    f = m / a
    cov = both / n - m * a
    var_f = (f * f) * (
        (m * (1.0 - m)) / (m * m if m > 0 else 1.0)
        + (a * (1.0 - a)) / (a * a)
        - 2.0 * cov / (m * a if m > 0 else 1.0)
    ) / n
    return McEstimate(value=max(0.0, 1.0 - f), std_err=math.sqrt(max(var_f, 0.0)), samples=n)


def _depolarization_flips(rng: np.random.Generator, e: float, n: int) -> np.ndarray:
    # mixing in the fully depolarized state flips the measured bit half the time
    return rng.random(n) < 0.5 * e


def _key_clicks(
    rng: np.random.Generator,
    tally: _Tally,
    n: int,
    signal_arrives: np.ndarray,
    flipped: np.ndarray,
    right_noise: np.ndarray,
    wrong_noise: np.ndarray,
    d: float,
    multi: np.ndarray | None = None,
) -> np.ndarray:
    signal_right = signal_arrives & ~flipped
    signal_wrong = signal_arrives & flipped
    real_right = signal_right | (right_noise >= 1)
    real_wrong = signal_wrong | (wrong_noise >= 1)
    any_real = real_right | real_wrong
    dark_right = rng.random(n) < d
    dark_wrong = rng.random(n) < d
    click_right = real_right | (~any_real & dark_right)
    click_wrong = real_wrong | (~any_real & dark_wrong)
    accepted = click_right ^ click_wrong
    error = accepted & click_wrong
    extra: dict[str, int] = {}
    if multi is not None:
        extra["multi"] = int(multi.sum())
        extra["multi_and_accepted"] = int((multi & accepted).sum())
    tally.add(n, accepted=accepted.sum(), error=error.sum(), **extra)
    return accepted


def _autocorr_clicks(rng: np.random.Generator, tally: _Tally, arrivals: np.ndarray) -> None:
    n = arrivals.shape[0]
    at_a = rng.binomial(arrivals, 0.5)
    at_b = arrivals - at_a
    single = (arrivals >= 1) & ((at_a == 0) | (at_b == 0))
    coinc = (at_a >= 1) & (at_b >= 1)
    tally.add(
        n,
        single=single.sum(),
        coinc=coinc.sum(),
        none=(arrivals == 0).sum(),
        omega1=(arrivals == 1).sum(),
        omega2plus=(arrivals >= 2).sum(),
    )


def _block_thermal_bath(
    rng: np.random.Generator, params: ThermalBathParams, n: int, target: str, tally: _Tally
) -> None:
    emitted = rng.random(n) < params.p
    transmitted = emitted & (rng.random(n) < params.T)
    bath = params.bath()
    # bath photons couple into Bob's path through the reflected (1-T) port
    right = rng.binomial(_sample_noise(rng, bath, n), 1.0 - params.T)
    wrong = rng.binomial(_sample_noise(rng, bath, n), 1.0 - params.T)
    if target == KEY:
        flipped = _depolarization_flips(rng, params.e, n)
        _key_clicks(rng, tally, n, transmitted, flipped, right, wrong, params.d)
    else:
        _autocorr_clicks(rng, tally, transmitted.astype(np.int64) + right + wrong)


def _block_noise_before(
    rng: np.random.Generator, params: NoiseBeforeParams, n: int, target: str, tally: _Tally
) -> None:
    emitted = rng.random(n) < params.p
    transmitted = emitted & (rng.random(n) < params.T)
    survivors = rng.binomial(_sample_noise(rng, params.noise(), n), params.T)
    if target == KEY:
        # one random polarization per noise pulse; the relative phase never
        # enters any routing probability but is drawn to mirror the state
        x = rng.random(n)
        rng.random(n)  # phase
        at_right = rng.binomial(survivors, x)
        at_wrong = survivors - at_right
        flipped = _depolarization_flips(rng, params.e, n)
        accepted = _key_clicks(
            rng, tally, n, transmitted, flipped, at_right, at_wrong, params.d
        )
        noisy = survivors >= 1
        tally.add(
            0,
            accepted_signal=(accepted & transmitted & ~noisy).sum(),
            accepted_noise=(accepted & ~transmitted & noisy).sum(),
            accepted_noise_signal=(accepted & transmitted & noisy).sum(),
            accepted_dark=(accepted & ~transmitted & ~noisy).sum(),
        )
    else:
        _autocorr_clicks(rng, tally, transmitted.astype(np.int64) + survivors)


def _block_spdc(
    rng: np.random.Generator, params: SpdcParams, n: int, target: str, tally: _Tally
) -> None:
    pairs = _sample_heralded_pairs(rng, params.nu, n)
    signal_survivors = rng.binomial(pairs, params.T)
    bath = params.bath()
    right = rng.binomial(_sample_noise(rng, bath, n), 1.0 - params.T)
    wrong = rng.binomial(_sample_noise(rng, bath, n), 1.0 - params.T)
    if target == KEY:
        flipped = _depolarization_flips(rng, params.e, n)
        _key_clicks(
            rng,
            tally,
            n,
            signal_survivors >= 1,
            flipped,
            right,
            wrong,
            params.d,
            multi=pairs >= 2,
        )
    else:
        _autocorr_clicks(rng, tally, signal_survivors + right + wrong)


def same_detector_fraction(j: int, samples: int, seed: int) -> McEstimate:
    """Fraction of j-photon pulses with one shared random polarization that
    land entirely in one detector of a polarizing splitter.

    Validates the analytic 2/(j+1) polarization average used by the
    noise-before-channel model.
    """
    if j < 1:
        raise ParameterDomainError(f"photon count must be >= 1, got {j}")
    rng = np.random.default_rng([seed, j])
    x = rng.random(samples)
    at_right = rng.binomial(np.full(samples, j), x)
    same = (at_right == 0) | (at_right == j)
    return _bernoulli_estimate(int(same.sum()), samples)
