"""Run configuration: parsing, validation, and seeded parameter draws.

Configs are plain structured text (YAML; JSON documents parse too).
Complex values are written as two-element [re, im] arrays; bare numbers are
real.  Defaults: tau = 1.0i, eta = 0.31, zeta = 0.17, lambda1 = 0.41,
lambda2 = -0.23, seed = 7.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import yaml

from .boundary import BoundaryConfig
from .elliptic import MIN_IM_TAU, ModularSetup, sigma
from .errors import ParseError, SingularityError, ValidationError
from .oracle import (MAX_BRUTEFORCE_N, MAX_ENUMERATION_N, MAX_FACE_N,
                     SpectralConfig)
from .closedform import MAX_DETERMINANT_N, MAX_PERMSUM_N
from .rmatrices import GENERICITY_FLOOR

ROUTE_GUARDS = {
    "enumeration": MAX_ENUMERATION_N,
    "bruteforce": MAX_BRUTEFORCE_N,
    "face": MAX_FACE_N,
    "permsum": MAX_PERMSUM_N,
    "determinant": MAX_DETERMINANT_N,
}
MODES = ("compare", "identities", "bench", "single-route")

DEFAULTS = {
    "mode": "compare",
    "N": 2,
    "seed": 7,
    "tau": 1.0j,
    "eta": 0.31,
    "zeta": 0.17,
    "lambda1": 0.41,
    "lambda2": -0.23,
    "tol": 1e-9,
    "output": "json",
    "series_tol": 1e-15,
    "n_max": 60,
}

DRAW_BOX = {"u_re": (0.08, 0.45), "u_im": (-0.12, 0.12),
            "xi_re": (-0.38, -0.05), "xi_im": (-0.12, 0.12)}


@dataclass
class RunConfig:
    mode: str
    n: int
    seed: int
    setup: ModularSetup
    bc: BoundaryConfig
    routes: tuple
    output: str
    tol: float
    explicit_u: tuple = None
    explicit_xi: tuple = None
    n_sweep: tuple = field(default_factory=tuple)

    def params_echo(self) -> dict:
        return {
            "mode": self.mode, "N": self.n, "seed": self.seed,
            "tau": [complex(self.setup.tau).real, complex(self.setup.tau).imag],
            "eta": [complex(self.setup.eta).real, complex(self.setup.eta).imag],
            "zeta": [complex(self.bc.zeta).real, complex(self.bc.zeta).imag],
            "lambda1": [complex(self.bc.lambda1).real, complex(self.bc.lambda1).imag],
            "lambda2": [complex(self.bc.lambda2).real, complex(self.bc.lambda2).imag],
            "routes": list(self.routes), "tol": self.tol,
            "series_tol": self.setup.series_tol, "n_max": self.setup.n_max,
        }


def _as_complex(raw, where: str) -> complex:
    if isinstance(raw, (int, float, complex)):
        return complex(raw)
    if isinstance(raw, (list, tuple)) and len(raw) == 2 \
            and all(isinstance(v, (int, float)) for v in raw):
        return complex(raw[0], raw[1])
    raise ValidationError(f"{where}: expected a number or [re, im] pair, got {raw!r}")


def default_routes(n: int) -> tuple:
    return tuple(r for r in ("enumeration", "bruteforce", "face", "permsum",
                             "determinant") if n <= ROUTE_GUARDS[r])


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"config parse failure: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ParseError(f"config must be a mapping, got {type(raw).__name__}")
    known = {"mode", "N", "seed", "tau", "eta", "zeta", "lambda1", "lambda2",
             "routes", "output", "tol", "series_tol", "n_max", "u", "xi",
             "n_sweep"}
    unknown = set(raw) - known
    if unknown:
        raise ValidationError(f"unknown config fields: {sorted(unknown)}")
    merged = {**DEFAULTS, **raw}

    mode = merged["mode"]
    if mode not in MODES:
        raise ValidationError(f"mode {mode!r} not one of {MODES}")
    n = merged["N"]
    if not isinstance(n, int) or n < 0:
        raise ValidationError(f"N must be a non-negative integer, got {n!r}")
    seed = merged["seed"]
    if not isinstance(seed, int):
        raise ValidationError(f"seed must be an integer, got {seed!r}")

    tau = _as_complex(merged["tau"], "tau")
    if tau.imag < MIN_IM_TAU:
        raise ValidationError(f"Im(tau) below {MIN_IM_TAU}: {tau.imag}")
    setup = ModularSetup(tau=tau, eta=_as_complex(merged["eta"], "eta"),
                         series_tol=float(merged["series_tol"]),
                         n_max=int(merged["n_max"]))
    bc = BoundaryConfig(lambda1=_as_complex(merged["lambda1"], "lambda1"),
                        lambda2=_as_complex(merged["lambda2"], "lambda2"),
                        zeta=_as_complex(merged["zeta"], "zeta"))

    routes = merged.get("routes")
    if routes is None:
        routes = default_routes(n)
    else:
        routes = tuple(routes)
        for r in routes:
            if r not in ROUTE_GUARDS:
                raise ValidationError(f"unknown route {r!r}")
            if n > ROUTE_GUARDS[r]:
                raise ValidationError(f"{r} limited to N <= {ROUTE_GUARDS[r]}, got N={n}")
    if mode == "single-route" and len(routes) != 1:
        raise ValidationError("single-route mode needs exactly one route")

    tol = float(merged["tol"])
    if tol <= 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    output = merged["output"]
    if output not in ("json", "csv"):
        raise ValidationError(f"output must be json or csv, got {output!r}")

    def parse_points(key):
        if key not in raw:
            return None
        pts = tuple(_as_complex(v, key) for v in raw[key])
        if len(pts) != n:
            raise ValidationError(f"{key} has {len(pts)} entries but N = {n}")
        return pts

    n_sweep = tuple(int(v) for v in merged.get("n_sweep", ()))
    return RunConfig(mode=mode, n=n, seed=seed, setup=setup, bc=bc,
                     routes=routes, output=output, tol=tol,
                     explicit_u=parse_points("u"), explicit_xi=parse_points("xi"),
                     n_sweep=n_sweep)


def draw_spectral(n: int, seed: int, setup: ModularSetup, bc: BoundaryConfig,
                  floor: float = GENERICITY_FLOOR, max_tries: int = 200,
                  box: dict = None) -> SpectralConfig:
    """Seeded rejection sampling of a generic spectral configuration."""
    box = box or DRAW_BOX
    rng = np.random.default_rng(seed)
    if n == 0:
        return SpectralConfig(u=(), xi=())
    for _ in range(max_tries):
        u = tuple(rng.uniform(*box["u_re"], n) + 1j * rng.uniform(*box["u_im"], n))
        xi = tuple(rng.uniform(*box["xi_re"], n) + 1j * rng.uniform(*box["xi_im"], n))
        spectral = SpectralConfig(u=u, xi=xi)
        try:
            spectral.require_generic(setup, floor)
            bc.require_spectral_compatible(setup, u, floor)
            for lam in (bc.lambda1, bc.lambda2):
                for x in xi:
                    if abs(sigma(lam + bc.zeta - x, setup)) < floor \
                            or abs(sigma(lam + bc.zeta + x, setup)) < floor:
                        raise SingularityError("boundary/xi collision")
        except SingularityError:
            continue
        return spectral
    raise SingularityError(f"no generic draw found in {max_tries} tries")


def spectral_for(cfg: RunConfig) -> SpectralConfig:
    if cfg.explicit_u is not None and cfg.explicit_xi is not None:
        return SpectralConfig(u=cfg.explicit_u, xi=cfg.explicit_xi)
    if (cfg.explicit_u is None) != (cfg.explicit_xi is None):
        raise ValidationError("u and xi must be given together")
    return draw_spectral(cfg.n, cfg.seed, cfg.setup, cfg.bc)
