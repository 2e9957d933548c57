"""Flat INI-style configuration: parsing, validation, canonical echo.

One key per line under sections [population], [market], [intervention],
[scenario], [engine]. Unknown sections or keys are hard errors; missing keys
take the documented defaults. An empty file yields the all-defaults config.
"""

from __future__ import annotations

import configparser
import io
from pathlib import Path

from .engine import SimulationConfig
from .errors import ParseError, ValidationError
from .intervention import (K_SCALE_DEFAULT, SCENARIO_MATRICES,
                           InterventionParams, ScenarioConfig)
from .labor_market import MarketParams
from .population import PopulationParams, default_x2_max
from .prediction import FitOptions, Variant

__all__ = ["parse_config", "parse_config_text", "resolved_text", "KNOWN_KEYS"]

KNOWN_KEYS = {
    "population": {"alpha_pr": float, "trunc": float},
    "market": {"alpha_l": float, "beta_l": float, "beta_b": float},
    "intervention": {"x1_max": float, "x2_max": float, "delta_t_u": int,
                     "t_u_max": int, "t_u_threshold": int},
    "scenario": {"name": str, "k_scale": float, "k11": float, "k12": float,
                 "k21": float, "k22": float},
    "engine": {"model_variant": str, "pool_size": int, "spinup_steps": int,
               "spinup_discard": int, "total_steps": int, "refit_every": int,
               "n_runs": int, "base_seed": int, "ridge": float, "tol": float,
               "max_iter": int},
}


def _read(path) -> str:
    return Path(path).read_text()


def parse_config(path) -> SimulationConfig:
    """Parse and validate a config file."""
    return parse_config_text(_read(path))


def parse_config_text(text: str) -> SimulationConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        errors = getattr(exc, "errors", None)
        if lineno is None and errors:
            lineno = errors[0][0]
        where = f"line {lineno}: " if lineno is not None else ""
        raise ParseError(f"{where}{exc.message}") from exc

    raw: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        if section not in KNOWN_KEYS:
            raise ValidationError(f"unknown section [{section}]")
        raw[section] = {}
        for key, value in parser.items(section):
            if key not in KNOWN_KEYS[section]:
                raise ValidationError(f"unknown key {key!r} in [{section}]")
            conv = KNOWN_KEYS[section][key]
            try:
                raw[section][key] = conv(value)
            except ValueError as exc:
                raise ValidationError(
                    f"key {key!r} in [{section}]: cannot parse {value!r} "
                    f"as {conv.__name__}") from exc

    def get(section, key, default):
        return raw.get(section, {}).get(key, default)

    pop_d = PopulationParams()
    mkt_d = MarketParams()
    int_d = InterventionParams()
    eng_d = SimulationConfig()
    fit_d = FitOptions()
    try:
        population = PopulationParams(
            alpha_pr=get("population", "alpha_pr", pop_d.alpha_pr),
            trunc=get("population", "trunc", pop_d.trunc))
        market = MarketParams(
            alpha_l=get("market", "alpha_l", mkt_d.alpha_l),
            beta_l=get("market", "beta_l", mkt_d.beta_l),
            beta_b=get("market", "beta_b", mkt_d.beta_b))
        intervention = InterventionParams(
            x1_max=get("intervention", "x1_max", population.trunc),
            x2_max=get("intervention", "x2_max", default_x2_max(population)),
            delta_t_u=get("intervention", "delta_t_u", int_d.delta_t_u),
            t_u_max=get("intervention", "t_u_max", int_d.t_u_max),
            t_u_threshold=get("intervention", "t_u_threshold",
                              int_d.t_u_threshold))

        name = get("scenario", "name", "balanced").strip().lower()
        k_scale = get("scenario", "k_scale", K_SCALE_DEFAULT)
        matrix_keys = [k for k in ("k11", "k12", "k21", "k22")
                       if k in raw.get("scenario", {})]
        if name == "custom":
            if len(matrix_keys) != 4:
                raise ValidationError(
                    "scenario 'custom' requires all of k11, k12, k21, k22")
            sc = raw["scenario"]
            scenario = ScenarioConfig.custom(
                ((sc["k11"], sc["k12"]), (sc["k21"], sc["k22"])), k_scale)
        else:
            if name not in SCENARIO_MATRICES:
                raise ValidationError(
                    f"unknown scenario {name!r}; known: "
                    f"{sorted(SCENARIO_MATRICES) + ['custom']}")
            scenario = ScenarioConfig.from_name(name, k_scale)
            if matrix_keys:
                # resolved-config echoes carry the matrix; it must agree
                sc = raw["scenario"]
                canonical = {"k11": scenario.k_display[0][0],
                             "k12": scenario.k_display[0][1],
                             "k21": scenario.k_display[1][0],
                             "k22": scenario.k_display[1][1]}
                bad = [k for k in matrix_keys if sc[k] != canonical[k]]
                if bad:
                    raise ValidationError(
                        f"matrix keys {bad} contradict scenario {name!r}; "
                        f"use name 'custom' for a free matrix")

        variant_name = get("engine", "model_variant", "full").strip().lower()
        if variant_name not in ("full", "base"):
            raise ValidationError("model_variant must be 'full' or 'base'")
        fit = FitOptions(ridge=get("engine", "ridge", fit_d.ridge),
                         tol=get("engine", "tol", fit_d.tol),
                         max_iter=get("engine", "max_iter", fit_d.max_iter))
        return SimulationConfig(
            population=population, market=market, intervention=intervention,
            scenario=scenario, model_variant=Variant(variant_name), fit=fit,
            pool_size=get("engine", "pool_size", eng_d.pool_size),
            spinup_steps=get("engine", "spinup_steps", eng_d.spinup_steps),
            spinup_discard=get("engine", "spinup_discard",
                               eng_d.spinup_discard),
            total_steps=get("engine", "total_steps", eng_d.total_steps),
            refit_every=get("engine", "refit_every", eng_d.refit_every),
            n_runs=get("engine", "n_runs", eng_d.n_runs),
            base_seed=get("engine", "base_seed", eng_d.base_seed))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def resolved_text(config: SimulationConfig) -> str:
    """Canonical INI text with every key resolved to its effective value."""
    parser = configparser.ConfigParser(interpolation=None)
    k = config.scenario.k_display
    sections = {
        "population": {"alpha_pr": config.population.alpha_pr,
                       "trunc": config.population.trunc},
        "market": {"alpha_l": config.market.alpha_l,
                   "beta_l": config.market.beta_l,
                   "beta_b": config.market.beta_b},
        "intervention": {"x1_max": config.intervention.x1_max,
                         "x2_max": config.intervention.x2_max,
                         "delta_t_u": config.intervention.delta_t_u,
                         "t_u_max": config.intervention.t_u_max,
                         "t_u_threshold": config.intervention.t_u_threshold},
        "scenario": {"name": config.scenario.name,
                     "k_scale": config.scenario.k_scale,
                     "k11": k[0][0], "k12": k[0][1],
                     "k21": k[1][0], "k22": k[1][1]},
        "engine": {"model_variant": config.model_variant.value,
                   "pool_size": config.pool_size,
                   "spinup_steps": config.spinup_steps,
                   "spinup_discard": config.spinup_discard,
                   "total_steps": config.total_steps,
                   "refit_every": config.refit_every,
                   "n_runs": config.n_runs,
                   "base_seed": config.base_seed,
                   "ridge": config.fit.ridge,
                   "tol": config.fit.tol,
                   "max_iter": config.fit.max_iter},
    }
    for section, keys in sections.items():
        parser[section] = {key: repr(v) if isinstance(v, float) else str(v)
                           for key, v in keys.items()}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
