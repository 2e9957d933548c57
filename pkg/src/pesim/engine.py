"""Simulation engine: spin-up, the per-timestep market/PES cycle, pool
replenishment, history accumulation, model refits, and seeded ensembles.

A run is strictly sequential and owns a single numpy Generator, so results
are bit-reproducible for a fixed (config, seed). The pool is held as
column arrays; dataclass views exist only at module boundaries.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields

import numpy as np

from . import metrics as metrics_mod
from .errors import DegenerateHistory
from .intervention import InterventionParams, ScenarioConfig, update_skill_repeated
from .labor_market import MarketParams, job_probability
from .metrics import MetricsRow
from .population import PopulationParams, sample_arrays, s_real
from .prediction import (FitOptions, LogisticModel, Variant, fit_logistic,
                         prob_low_many)

__all__ = [
    "SimulationConfig",
    "SimState",
    "RunOutput",
    "EnsembleOutput",
    "spin_up",
    "step",
    "run",
    "run_ensemble",
    "round_csv",
]


@dataclass(frozen=True)
class SimulationConfig:
    population: PopulationParams = PopulationParams()
    market: MarketParams = MarketParams()
    intervention: InterventionParams = InterventionParams()
    scenario: ScenarioConfig = ScenarioConfig.from_name("balanced")
    model_variant: Variant = Variant.FULL
    fit: FitOptions = FitOptions()
    pool_size: int = 200
    spinup_steps: int = 400
    spinup_discard: int = 200
    total_steps: int = 1000
    refit_every: int = 1
    n_runs: int = 10
    base_seed: int = 12345

    def __post_init__(self):
        if self.model_variant not in (Variant.FULL, Variant.BASE):
            raise ValueError("model_variant must be full or base")
        if not (0 <= self.spinup_discard < self.spinup_steps <= self.total_steps):
            raise ValueError(
                "need spinup_discard < spinup_steps <= total_steps")
        if self.pool_size < 10:
            raise ValueError("pool_size must be >= 10")
        if self.refit_every < 1 or self.n_runs < 1:
            raise ValueError("refit_every and n_runs must be >= 1")

    def fingerprint(self) -> str:
        """Content hash over every config field."""
        return hashlib.sha256(repr(self).encode()).hexdigest()[:16]


class Pool:
    """Column-array store of individuals."""

    __slots__ = ("ids", "x1", "x2", "x_pr", "t_u", "wait")

    def __init__(self, ids, x1, x2, x_pr, t_u, wait):
        self.ids = ids
        self.x1 = x1
        self.x2 = x2
        self.x_pr = x_pr
        self.t_u = t_u
        self.wait = wait

    @classmethod
    def empty(cls) -> "Pool":
        return cls(np.empty(0, dtype=np.int64), np.empty(0), np.empty(0),
                   np.empty(0, dtype=np.int8), np.empty(0, dtype=np.int64),
                   np.empty(0, dtype=np.int64))

    def __len__(self) -> int:
        return self.ids.size

    @property
    def s(self) -> np.ndarray:
        return s_real(self.x1, self.x2)

    def subset(self, mask) -> "Pool":
        return Pool(self.ids[mask], self.x1[mask], self.x2[mask],
                    self.x_pr[mask], self.t_u[mask], self.wait[mask])

    @staticmethod
    def concat(a: "Pool", b: "Pool") -> "Pool":
        if len(a) == 0:
            return b
        if len(b) == 0:
            return a
        return Pool(*(np.concatenate([getattr(a, f), getattr(b, f)])
                      for f in Pool.__slots__))


class History:
    """Append-only record of completed spells, stored column-wise."""

    def __init__(self):
        self._cap = 1024
        self._n = 0
        self._x1 = np.empty(self._cap)
        self._x_pr = np.empty(self._cap, dtype=np.int8)
        self._s = np.empty(self._cap)
        self._t_u = np.empty(self._cap, dtype=np.int64)

    def __len__(self) -> int:
        return self._n

    def _grow(self, need: int):
        while self._cap < need:
            self._cap *= 2
        for name in ("_x1", "_x_pr", "_s", "_t_u"):
            old = getattr(self, name)
            new = np.empty(self._cap, dtype=old.dtype)
            new[:self._n] = old[:self._n]
            setattr(self, name, new)

    def append(self, x1, x_pr, s, t_u):
        n_new = np.asarray(x1).size
        if self._n + n_new > self._cap:
            self._grow(self._n + n_new)
        sl = slice(self._n, self._n + n_new)
        self._x1[sl] = x1
        self._x_pr[sl] = x_pr
        self._s[sl] = s
        self._t_u[sl] = t_u
        self._n += n_new

    @property
    def x1(self):
        return self._x1[:self._n]

    @property
    def x_pr(self):
        return self._x_pr[:self._n]

    @property
    def s(self):
        return self._s[:self._n]

    @property
    def t_u(self):
        return self._t_u[:self._n]


@dataclass
class SimState:
    t: int
    active: Pool
    waiting: Pool
    history: History
    pred_model: LogisticModel | None
    real_model: LogisticModel | None
    rng: np.random.Generator
    next_id: int
    last_fit_len: int = 0
    n_entrants: int = 0
    n_hires: int = 0
    n_forced_exits: int = 0
    metrics_rows: list = field(default_factory=list)
    coeff_rows: list = field(default_factory=list)
    fit_warnings: int = 0


@dataclass
class RunOutput:
    seed: int
    fingerprint: str
    rows: list
    coeff_rows: list
    n_forced_exits: int = 0
    fit_warnings: int = 0


@dataclass
class EnsembleOutput:
    config: SimulationConfig
    runs: list
    mean_rows: list

    @property
    def seeds(self) -> list:
        return [r.seed for r in self.runs]


def _labels(history: History, threshold: int) -> np.ndarray:
    return (history.t_u > threshold).astype(float)


def _fit_models(state: SimState, config: SimulationConfig) -> bool:
    """Refit prediction and real-prospect models; False if history degenerate."""
    h = state.history
    labels = _labels(h, config.intervention.t_u_threshold)
    if len(h) < 2 or labels.min() == labels.max():
        return False
    if config.model_variant is Variant.FULL:
        feats = np.column_stack([h.x1, h.x_pr.astype(float)])
    else:
        feats = h.x1[:, None]

    def warm(model):
        if model is None:
            return None
        return np.asarray(list(model.coefficients) + [model.intercept])

    pred = fit_logistic(feats, labels, config.fit, variant=config.model_variant,
                        initial=warm(state.pred_model))
    real = fit_logistic(h.s[:, None], labels, config.fit,
                        variant=Variant.REAL_PROSPECT,
                        initial=warm(state.real_model))
    state.pred_model, state.real_model = pred, real
    state.fit_warnings += (not pred.converged) + (not real.converged)
    state.last_fit_len = len(h)
    return True


def _replenish(state: SimState, config: SimulationConfig):
    n = config.pool_size - len(state.active) - len(state.waiting)
    if n <= 0:
        return
    x1, x2, x_pr = sample_arrays(state.rng, config.population, n)
    ids = np.arange(state.next_id, state.next_id + n, dtype=np.int64)
    state.next_id += n
    state.n_entrants += n
    fresh = Pool(ids, x1, x2, x_pr,
                 np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64))
    state.active = Pool.concat(state.active, fresh)


def _snapshot_coefficients(state: SimState):
    for model in (state.pred_model, state.real_model):
        if model is None:
            continue
        c = list(model.coefficients)
        c += [None] * (2 - len(c))
        state.coeff_rows.append([state.t, model.variant.value, c[0], c[1],
                                 model.intercept])


def step(state: SimState, config: SimulationConfig, pes_active: bool = True,
         record_history: bool = True) -> SimState:
    """Advance the simulation by one timestep (mutates and returns state)."""
    state.t += 1
    iv = config.intervention

    # (1) waiting countdown; those reaching 0 rejoin the active pool
    if len(state.waiting):
        state.waiting.wait -= 1
        state.waiting.t_u += 1
        done = state.waiting.wait == 0
        state.active = Pool.concat(state.active, state.waiting.subset(done))
        state.waiting = state.waiting.subset(~done)

    # (2) market phase
    active = state.active
    hires_t_u = np.empty(0, dtype=np.int64)
    hires_x_pr = np.empty(0, dtype=np.int8)
    if len(active):
        p = job_probability(config.market, active.s, active.x_pr)
        hired = state.rng.random(len(active)) < p
        if hired.any():
            h = active.subset(hired)
            hires_t_u = h.t_u + 1  # spell includes the hiring step
            hires_x_pr = h.x_pr
            state.n_hires += int(hired.sum())
            if record_history:
                state.history.append(h.x1, h.x_pr, h.s, hires_t_u)
        active = active.subset(~hired)
        active.t_u += 1

    # (3) forced exit, censored: no history record
    if len(active):
        overdue = active.t_u >= iv.t_u_max
        state.n_forced_exits += int(overdue.sum())
        active = active.subset(~overdue)

    # (4) PES phase
    eo = cf = None
    if pes_active and state.pred_model is not None and len(active):
        if config.model_variant is Variant.FULL:
            feats = np.column_stack([active.x1, active.x_pr.astype(float)])
        else:
            feats = active.x1[:, None]
        pred_low = prob_low_many(state.pred_model, feats) > 0.5
        real_low = prob_low_many(state.real_model, active.s[:, None]) > 0.5

        eo = metrics_mod.equal_opportunity_arrays(pred_low, real_low,
                                                  active.x_pr)
        cf = metrics_mod.counterfactual_fraction(state.pred_model, active.x1,
                                                 active.x_pr, active.s,
                                                 state.real_model)

        k = config.scenario.k_effective[np.where(real_low, 0, 1),
                                        np.where(pred_low, 0, 1)]
        reps = np.where(pred_low, iv.delta_t_u + 1, 1)
        for r in np.unique(reps):
            m = reps == r
            active.x1[m] = update_skill_repeated(active.x1[m], k[m],
                                                 iv.x1_max, int(r))
            active.x2[m] = update_skill_repeated(active.x2[m], k[m],
                                                 iv.x2_max, int(r))
        if iv.delta_t_u > 0 and pred_low.any():
            to_wait = active.subset(pred_low)
            to_wait.wait = np.full(len(to_wait), iv.delta_t_u, dtype=np.int64)
            state.waiting = Pool.concat(state.waiting, to_wait)
            active = active.subset(~pred_low)

    state.active = active

    # (5) replenishment keeps |active| + |waiting| = pool_size
    _replenish(state, config)

    # (6) refit on cadence when the history grew and is non-degenerate
    if (pes_active and state.t % config.refit_every == 0
            and len(state.history) > state.last_fit_len):
        _fit_models(state, config)  # degenerate -> keep previous models
        _snapshot_coefficients(state)

    # (7) metrics snapshot
    if state.t > config.spinup_discard:
        state.metrics_rows.append(
            _metrics_row(state, config, hires_t_u, hires_x_pr, eo, cf))
    return state


def _metrics_row(state: SimState, config: SimulationConfig, hires_t_u,
                 hires_x_pr, eo, cf) -> MetricsRow:
    s_all = np.concatenate([state.active.s, state.waiting.s])
    x_pr_all = np.concatenate([state.active.x_pr, state.waiting.x_pr])
    b = metrics_mod.bgsd(s_all, x_pr_all)
    priv = s_all[x_pr_all == 1]
    upriv = s_all[x_pr_all == 0]
    frac_upriv, fw_priv, fw_upriv = metrics_mod.pool_composition(
        state.active.x_pr, state.waiting.x_pr)
    mean_t_u, bgtud = metrics_mod.hire_statistics(hires_t_u, hires_x_pr)
    return MetricsRow(
        t=state.t,
        bgsd=b,
        bgsd_abs=None if b is None else abs(b),
        cf_fraction=cf,
        eo=eo,
        mean_s_priv=float(priv.mean()) if priv.size else None,
        mean_s_upriv=float(upriv.mean()) if upriv.size else None,
        mean_t_u_hires=mean_t_u,
        bgtud_current=bgtud,
        frac_upriv=frac_upriv,
        frac_waiting_priv=fw_priv,
        frac_waiting_upriv=fw_upriv,
        n_active=len(state.active),
        n_waiting=len(state.waiting),
    )


def spin_up(config: SimulationConfig, rng: np.random.Generator) -> SimState:
    """Run the intervention-free warm-up and fit the initial models.

    History keeps only spells completed after the discard window. Raises
    DegenerateHistory when the retained history cannot support a fit.
    """
    state = SimState(t=0, active=Pool.empty(), waiting=Pool.empty(),
                     history=History(), pred_model=None, real_model=None,
                     rng=rng, next_id=0)
    _replenish(state, config)
    for t in range(1, config.spinup_steps + 1):
        step(state, config, pes_active=False,
             record_history=t > config.spinup_discard)
    if not _fit_models(state, config):
        labels = _labels(state.history, config.intervention.t_u_threshold)
        frac = float(labels.mean()) if len(labels) else float("nan")
        raise DegenerateHistory(
            f"spin-up produced {len(state.history)} records with long-spell "
            f"fraction {frac:.3f}; market parameters look miscalibrated")
    _snapshot_coefficients(state)
    return state


def run(config: SimulationConfig, seed: int) -> RunOutput:
    """One full simulation: spin-up plus intervention phase."""
    rng = np.random.default_rng(seed)
    state = spin_up(config, rng)
    for _ in range(config.total_steps - config.spinup_steps):
        step(state, config, pes_active=True)
    return RunOutput(seed=seed, fingerprint=config.fingerprint(),
                     rows=state.metrics_rows, coeff_rows=state.coeff_rows,
                     n_forced_exits=state.n_forced_exits,
                     fit_warnings=state.fit_warnings)


def round_csv(x):
    """Round to the 9-significant-digit CSV representation."""
    return None if x is None else float(f"{x:.9g}")


def _mean_rows(runs: list) -> list:
    """Per-timestep arithmetic mean of each metric across runs.

    Averages the 9-significant-digit values that land in the per-run CSVs, so
    re-averaging the written files reproduces the ensemble file exactly.
    None cells are skipped; all-None yields None.
    """
    out = []
    for rows in zip(*(r.rows for r in runs)):
        vals = {"t": rows[0].t}
        for name in metrics_mod.CSV_COLUMNS[1:]:
            present = [round_csv(getattr(r, name)) for r in rows
                       if getattr(r, name) is not None]
            vals[name] = sum(present) / len(present) if present else None
        out.append(MetricsRow(**vals))
    return out


def run_ensemble(config: SimulationConfig) -> EnsembleOutput:
    """n_runs independent runs with seeds base_seed + i, plus their mean."""
    runs = [run(config, config.base_seed + i) for i in range(config.n_runs)]
    return EnsembleOutput(config=config, runs=runs, mean_rows=_mean_rows(runs))
