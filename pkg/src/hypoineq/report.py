"""Report assembly: JSON with full provenance plus one CSV per suite.

Timings live in a separate block; the determinism digest covers only the
reproducible payload (config echo, seed, suite results), so identical seeds
give bit-identical digests across runs.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import time
from pathlib import Path

from . import __version__
from .suites import SuiteContext, run_suite


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def run_report(config, jobs: int = 1) -> dict:
    """Execute the configured suites and assemble the report dict.

    With jobs > 1 the suites run on a thread pool; results are merged in
    configured order, so the report is identical either way.
    """
    suites_out = {}
    timings = {}
    if jobs > 1 and len(config.suites) > 1:
        from concurrent.futures import ThreadPoolExecutor

        def timed(name):
            t0 = time.perf_counter()
            entries = run_suite(name, config.ctx)
            return entries, round(time.perf_counter() - t0, 3)

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(timed, config.suites))
        for name, (entries, secs) in zip(config.suites, results):
            timings[name] = secs
            suites_out[name] = [_jsonable(e) for e in entries]
    else:
        for name in config.suites:
            t0 = time.perf_counter()
            entries = run_suite(name, config.ctx)
            timings[name] = round(time.perf_counter() - t0, 3)
            suites_out[name] = [_jsonable(e) for e in entries]

    payload = {
        "tool": "hypoineq",
        "version": __version__,
        "seed": config.seed,
        "config_echo": _jsonable(config.echo),
        "suites": suites_out,
    }
    digest = hashlib.sha256(
        json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    report = dict(payload)
    report["digest"] = digest
    report["timings"] = timings
    report["all_passed"] = all(
        e["passed"] for entries in suites_out.values() for e in entries
    )
    return report


def failing_entries(report: dict):
    return [
        (suite, e["id"])
        for suite, entries in report["suites"].items()
        for e in entries
        if not e["passed"]
    ]


def write_report(report: dict, out_dir: str):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "report.json"
    json_path.write_text(json.dumps(report, indent=2, sort_keys=True))
    for suite, entries in report["suites"].items():
        with open(out / f"{suite}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "kind", "passed", "method", "abs_error", "seed",
                             "values", "envelope"])
            for e in entries:
                writer.writerow([
                    e["id"], e["kind"], int(e["passed"]), e["method"],
                    e["abs_error"], e["seed"],
                    json.dumps(e["values"], sort_keys=True),
                    json.dumps(e["envelope"], sort_keys=True),
                ])
    return json_path
