"""Tolerances, oracle budgets and their loading from a flat JSON config."""
from __future__ import annotations

import json
import os
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from pathlib import Path

SEED_ENV = "DELTAHOMOG_SEED"


@dataclass(frozen=True)
class Tolerances:
    orthogonality: float = 1e-10
    bracket: float = 1e-12
    membership: float = 1e-10   # "V in p": h-part <= membership * (1 + |V|)
    near_equal: float = 1e-8    # |x2 - x1| <= near_equal * max(x1, x2) counts as normal
    equality: float = 1e-10
    inequality: float = 1e-9
    geodesic: float = 1e-10
    refutation: float = 1e-8


@dataclass(frozen=True)
class OracleBudget:
    restarts: int = 64
    steps_per_restart: int = 500
    step_size: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.steps_per_restart < 1 or self.step_size <= 0 or self.seed < 0:
            raise ValueError(f"oracle budget entries must be positive: {self}")


TOL = Tolerances()
_ACTIVE: list[Tolerances] = [TOL]


def tolerances() -> Tolerances:
    """The tolerances in force (defaults unless inside ``using``)."""
    return _ACTIVE[-1]


@contextmanager
def using(tol: Tolerances):
    _ACTIVE.append(tol)
    try:
        yield tol
    finally:
        _ACTIVE.pop()


_KEYS = {
    "tol.orthogonality": ("tol", "orthogonality"),
    "tol.bracket": ("tol", "bracket"),
    "tol.membership": ("tol", "membership"),
    "tol.equality": ("tol", "equality"),
    "tol.inequality": ("tol", "inequality"),
    "tol.geodesic": ("tol", "geodesic"),
    "tol.near_equal": ("tol", "near_equal"),
    "tol.refutation": ("tol", "refutation"),
    "oracle.restarts": ("oracle", "restarts"),
    "oracle.steps": ("oracle", "steps_per_restart"),
    "oracle.step_size": ("oracle", "step_size"),
    "oracle.seed": ("oracle", "seed"),
}


def load_config(path: str | os.PathLike | None = None, data: dict | None = None) -> tuple[Tolerances, OracleBudget]:
    """Read flat dotted keys ("oracle.restarts", "tol.bracket", ...).

    The environment variable DELTAHOMOG_SEED overrides ``oracle.seed``.
    """
    doc = dict(data or {})
    if path is not None:
        doc.update(json.loads(Path(path).read_text()))
    unknown = set(doc) - set(_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    tol_kw, orc_kw = {}, {}
    types = {f.name: f.type for f in fields(OracleBudget)}
    for key, value in doc.items():
        group, name = _KEYS[key]
        if group == "tol":
            tol_kw[name] = float(value)
        else:
            orc_kw[name] = int(value) if types[name] in ("int", int) else float(value)
    budget = OracleBudget(**orc_kw)
    env = os.environ.get(SEED_ENV)
    if env is not None:
        budget = replace(budget, seed=int(env))
    return Tolerances(**tol_kw), budget
