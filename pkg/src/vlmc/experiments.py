"""Monte Carlo experiments: recovery-error curves and deviation frequencies.

Replicate ``r`` at grid index ``i`` is sampled with
``child_seed(master_seed, i, r)`` (splitmix64 folding, see
:func:`vlmc.sampler.child_seed`), so results never depend on how the
replicates are scheduled across workers.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .core_tree import CombSpec, load_model, model_to_dict, truncate
from .empirical import build_counts
from .errors import InvalidInput, PreconditionViolation
from .estimator import EstimationParams, estimate
from .model_analysis import (
    bound_count_deviation,
    constant_C,
    divergence_sets,
    epsilon,
    minimal_depth,
    phat_deviation_value,
    recovery_threshold,
    recovery_value,
    stationary_law,
    word_probability,
)
from .sampler import MIN_BURN_IN, child_seed, sample_path

CSV_FIELDS = ["n", "failures", "R", "error_freq", "stderr", "bound", "vacuous", "config_hash"]
CONFIG_FIELDS = ["model", "n_grid", "delta", "d", "K", "R", "master_seed", "burn_in", "out"]


@dataclass
class ExperimentConfig:
    """Recovery experiment settings.

    ``delta`` and ``d`` accept ``"auto"``: ``d`` becomes the minimal
    admissible depth at level ``K`` and ``delta`` becomes ``D_d / 2``.
    """

    model: object
    n_grid: list
    delta: object = "auto"
    d: object = "auto"
    K: int = 1
    R: int = 100
    master_seed: int = 0
    burn_in: int = MIN_BURN_IN
    out: str | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        unknown = set(d) - set(CONFIG_FIELDS)
        if unknown:
            raise InvalidInput(f"unknown config fields: {sorted(unknown)}")
        if "model" not in d or "n_grid" not in d:
            raise InvalidInput("config needs 'model' and 'n_grid'")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def model_dict(self) -> dict:
        return model_to_dict(load_model(self.model))

    def config_hash(self) -> str:
        payload = {k: v for k, v in asdict(self).items() if k != "out"}
        payload["model"] = self.model_dict()
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ResolvedConfig:
    model: object
    n_grid: tuple
    delta: float
    d: int
    K: int
    R: int
    master_seed: int
    burn_in: int
    D_d: float
    eps_d: float
    C: float
    config_hash: str


def resolve_config(config: ExperimentConfig) -> ResolvedConfig:
    """Fill in ``"auto"`` values and check every precondition up front."""
    model = load_model(config.model)
    n_grid = tuple(int(n) for n in config.n_grid)
    if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise InvalidInput("n_grid must be non-empty and strictly increasing")
    if config.R < 1:
        raise InvalidInput("R must be at least 1")
    law = stationary_law(model)
    K = int(config.K)
    d_min = minimal_depth(law, K)
    d = d_min if config.d == "auto" else int(config.d)
    if d < 1 or d >= n_grid[0]:
        raise PreconditionViolation(f"need 1 <= d < n for every n; d = {d}")
    D_d = divergence_sets(law, d)[1]
    delta = D_d / 2 if config.delta == "auto" else float(config.delta)
    if not delta > 0:
        raise InvalidInput("delta must be positive")
    eps_d = epsilon(law, d)
    A = len(model.alphabet)
    if d < d_min:
        raise PreconditionViolation(f"d = {d} is below the minimal admissible depth {d_min}")
    if not delta < D_d:
        raise PreconditionViolation(f"delta = {delta} must be below D_d = {D_d}")
    if not n_grid[-1] > recovery_threshold(A, d, delta, D_d, eps_d):
        raise PreconditionViolation("largest n is below the recovery-bound threshold")
    return ResolvedConfig(model, n_grid, delta, d, K, int(config.R), int(config.master_seed),
                          int(config.burn_in), D_d, eps_d, constant_C(law), config.config_hash())


@dataclass
class RecoveryRow:
    n: int
    failures: int
    R: int
    error_freq: float
    stderr: float
    bound: float | None
    vacuous: bool | None


@dataclass
class RecoveryCurve:
    rows: list
    config_hash: str
    d: int
    delta: float
    K: int
    failure_bits: list = field(default_factory=list, repr=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.rows:
            w.writerow([r.n, r.failures, r.R, repr(r.error_freq), repr(r.stderr),
                        "" if r.bound is None else repr(r.bound),
                        "" if r.vacuous is None else str(r.vacuous).lower(),
                        self.config_hash])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())


def binomial_stderr(freq: float, R: int) -> float:
    return math.sqrt(freq * (1.0 - freq) / R)


def _recovery_replicate(job):
    model, truth, n, seed, burn_in, params = job
    sample = sample_path(model, n, seed, burn_in)
    est = estimate(build_counts(sample, params.d), params)
    return truncate(est.tree, params.K).contexts != truth


def _run_jobs(fn, jobs, workers):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def run_recovery_experiment(config: ExperimentConfig, workers: int = 1) -> RecoveryCurve:
    """Empirical ``P(estimated tree at level K != true tree at level K)``
    for each ``n`` in the grid, next to the theoretical bound."""
    rc = resolve_config(config)
    A = len(rc.model.alphabet)
    truth = truncate(rc.model, rc.K).contexts
    params = EstimationParams(rc.delta, rc.d, rc.K)
    rows, bits = [], []
    for i, n in enumerate(rc.n_grid):
        jobs = [(rc.model, truth, n, child_seed(rc.master_seed, i, r), rc.burn_in, params)
                for r in range(rc.R)]
        fails = _run_jobs(_recovery_replicate, jobs, workers)
        bits.append(fails)
        k = int(sum(fails))
        freq = k / rc.R
        bound = vac = None
        if n > recovery_threshold(A, rc.d, rc.delta, rc.D_d, rc.eps_d):
            bound = recovery_value(A, rc.d, rc.delta, n, rc.D_d, rc.eps_d, rc.C)
            vac = bound >= 1.0
        rows.append(RecoveryRow(n, k, rc.R, freq, binomial_stderr(freq, rc.R), bound, vac))
    return RecoveryCurve(rows, rc.config_hash, rc.d, rc.delta, rc.K, bits)


@dataclass
class DeviationRow:
    t: float
    freq: float
    stderr: float
    bound_thm31: float
    t_phat: float
    freq_phat: float
    bound_cor32: float | None


def _deviation_replicate(job):
    model, w, a, n, seed, burn_in = job
    sample = sample_path(model, n, seed, burn_in)
    trie = build_counts(sample, len(w))
    A = len(model.alphabet)
    phat = (trie.count(w + a) + 1) / (trie.count_dot(w) + A)
    return trie.count(w + a), phat


def run_deviation_experiment(model, w: str, a: str, n: int, t_grid, R: int, seed: int,
                             burn_in: int = MIN_BURN_IN, workers: int = 1) -> list:
    """Frequency of ``|N_n(wa) - (n - l(w)) p(wa)| > t`` over `R` replicates,
    with the count-deviation bound, and the matching frequency of
    ``|phat(a|w) - p(a|w)| > t / ((n - l(w)) p(w))`` with its bound."""
    if n <= len(w):
        raise PreconditionViolation("need n > l(w)")
    if R < 100:
        raise InvalidInput("R must be at least 100")
    law = stationary_law(model)
    model.alphabet.check_word(w + a)
    A = len(model.alphabet)
    m = n - len(w)
    pw, pwa = word_probability(law, w), word_probability(law, w + a)
    expected = m * pwa
    p_cond = pwa / pw
    C = constant_C(law)
    jobs = [(model, w, a, n, child_seed(seed, 0, r), burn_in) for r in range(R)]
    res = _run_jobs(_deviation_replicate, jobs, workers)
    counts = np.array([c for c, _ in res], dtype=float)
    phats = np.array([p for _, p in res])
    rows = []
    for t in t_grid:
        t = float(t)
        freq = float(np.mean(np.abs(counts - expected) > t))
        t_p = t / (m * pw)
        freq_p = float(np.mean(np.abs(phats - p_cond) > t_p))
        cor = None
        if t_p > 0 and n > (A + 1) / (t_p * pw) + len(w):
            cor = phat_deviation_value(C, A, len(w), pw, t_p, n)
        rows.append(DeviationRow(t, freq, binomial_stderr(freq, R),
                                 bound_count_deviation(law, w, a, t, n), t_p, freq_p, cor))
    return rows
