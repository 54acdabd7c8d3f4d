"""Suite configuration: flat INI-style text with key = value sections.

Minimal example::

    [suite]
    names = weights, tm
    seed = 1234
    out = reports

    [quadrature]
    tolerance = 1e-6
    mc_budget = 1000000
    hls_budget = 1000000
    grid_m = 128

    [weights.instance.my-a1]
    kind = A1
    group = R:2:1,1:euclidean
    p = 2
    q = 2
    phi = alpha=-4 coeff=ballvol^-2
    psi = alpha=0
    expected = 1.0
    tol = 1e-3

Weight descriptors are power-log weights ``alpha=<f> [gamma=<f>]
[coeff=<f>|ballvol^<f>] [cutoff=<f>]``; the ``ballvol^k`` coefficient is
resolved to |B(0,1)|^k of the instance's group/norm.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from . import groups, hardy
from .errors import InvalidArgument
from .suites import SUITES, SuiteContext


class ConfigError(Exception):
    """Raised on parse/validation errors (CLI exit code 2)."""


@dataclass
class RunConfig:
    suites: list
    seed: int = 1234
    out_dir: str = "reports"
    ctx: SuiteContext = field(default_factory=SuiteContext)
    echo: dict = field(default_factory=dict)


def parse_weight_descriptor(text: str, norm) -> hardy.RadialWeight:
    alpha = 0.0
    gamma = 0.0
    coeff = 1.0
    cutoff = math.inf
    for token in text.split():
        if "=" not in token:
            raise ConfigError(f"bad weight token {token!r}")
        key, val = token.split("=", 1)
        if key == "alpha":
            alpha = float(val)
        elif key == "gamma":
            gamma = float(val)
        elif key == "coeff":
            if val.startswith("ballvol^"):
                vb = groups.unit_ball_volume_exact(norm)
                if vb is None:
                    raise ConfigError("no closed-form ball volume for this norm")
                coeff = vb ** float(val[len("ballvol^"):])
            else:
                coeff = float(val)
        elif key == "cutoff":
            cutoff = float(val)
        else:
            raise ConfigError(f"unknown weight key {key!r}")
    return hardy.RadialWeight(alpha, gamma, coeff, cutoff)


def load_config(path: str) -> RunConfig:
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        # configparser errors carry line numbers in their message
        raise ConfigError(str(exc)) from exc
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    if "suite" not in parser:
        raise ConfigError("missing [suite] section")
    s = parser["suite"]
    names = [n.strip() for n in s.get("names", "").split(",") if n.strip()]
    if not names:
        raise ConfigError("empty suite list")
    expanded = []
    for n in names:
        if n == "all":
            expanded.extend(SUITES.keys())
        elif n in SUITES:
            expanded.append(n)
        else:
            raise ConfigError(f"unknown suite {n!r}; known: {sorted(SUITES)} + ['all']")
    seen = set()
    ordered = [n for n in expanded if not (n in seen or seen.add(n))]

    try:
        seed = s.getint("seed", 1234)
    except ValueError as exc:
        raise ConfigError(f"bad seed: {exc}") from exc
    out_dir = s.get("out", "reports")

    ctx = SuiteContext(seed=seed)
    if "quadrature" in parser:
        qsec = parser["quadrature"]
        try:
            ctx.tolerance = qsec.getfloat("tolerance", ctx.tolerance)
            ctx.mc_budget = qsec.getint("mc_budget", ctx.mc_budget)
            ctx.hls_budget = qsec.getint("hls_budget", ctx.hls_budget)
            ctx.grid_m = qsec.getint("grid_m", ctx.grid_m)
        except ValueError as exc:
            raise ConfigError(f"bad [quadrature] value: {exc}") from exc

    echo = {sec: dict(parser[sec]) for sec in parser.sections()}

    for sec in parser.sections():
        if sec.startswith("weights.instance."):
            name = sec[len("weights.instance."):]
            body = parser[sec]
            try:
                norm = groups.from_id(body.get("group", "R:2:1,1:euclidean"))
                inst = {
                    "name": name,
                    "kind": body.get("kind", "A1"),
                    "group": body.get("group", "R:2:1,1:euclidean"),
                    "p": body.getfloat("p"),
                    "q": body.getfloat("q"),
                    "pair": hardy.WeightPair(
                        parse_weight_descriptor(body.get("phi", "alpha=0"), norm),
                        parse_weight_descriptor(body.get("psi", "alpha=0"), norm),
                    ),
                }
                if "expected" in body:
                    inst["expected"] = body.getfloat("expected")
                    inst["tol"] = body.getfloat("tol", fallback=1e-3)
            except (ValueError, InvalidArgument, TypeError) as exc:
                raise ConfigError(f"bad weight instance [{sec}]: {exc}") from exc
            ctx.extra_weight_instances.append(inst)
        elif sec.startswith("ratio.instance."):
            name = sec[len("ratio.instance."):]
            body = parser[sec]
            try:
                params = {
                    k: float(v)
                    for k, v in body.items()
                    if k not in ("theorem", "group", "family", "thetas", "kernel")
                }
                inst = {
                    "name": name,
                    "theorem": body.get("theorem"),
                    "group": body.get("group", "R:2:1,1:euclidean"),
                    "family": body.get("family", "gaussian"),
                    "thetas": [
                        tuple(float(x) for x in chunk.split(":"))
                        for chunk in body.get("thetas", "1.0").split(",")
                    ],
                    "kernel": body.get("kernel", "power"),
                    "params": params,
                }
                if inst["theorem"] is None:
                    raise ConfigError(f"missing theorem id in [{sec}]")
            except ValueError as exc:
                raise ConfigError(f"bad ratio instance [{sec}]: {exc}") from exc
            ctx.extra_ratio_instances.append(inst)

    return RunConfig(suites=ordered, seed=seed, out_dir=out_dir, ctx=ctx, echo=echo)
