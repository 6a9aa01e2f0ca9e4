"""Command-line driver: ``uqcag verify`` runs suites, ``uqcag fock`` builds Fock modules.

Exit codes: 0 all checks fine, 1 some check Failed, 2 some check
Inconclusive (and none Failed), 64 malformed configuration, 65 energies
violating the Hamiltonian constraint.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .fock import (
    HamiltonianConstraintError,
    HamiltonianSpec,
    brute_force_dimension,
    build_fock,
    hamiltonian_forms_check,
    ladder_check,
    supercommutation_check,
    valid_energies,
)
from .presentations import AlgebraSpec
from .status import Status, worst
from .suites import SUITES, Budget, SuiteSpecError, run_suite
from .superfree import ElementParseError

SCHEMA_VERSION = 1
DEFAULT_SUITES = ("rep_validation", "theorem_fwd", "eq51")

EXIT_OK, EXIT_FAILED, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_CONSTRAINT = 64, 65


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 1
    m: int = 1
    deformed: bool = True
    suites: list[str] = field(default_factory=lambda: list(DEFAULT_SUITES))
    max_steps: int = Budget().max_steps
    max_degree: int = Budget().max_degree
    max_new_rules: int = Budget().max_new_rules
    cutoff: Optional[int] = None
    order_p: int = 1
    epsilons: list[list[str]] = field(default_factory=list)
    out: Optional[str] = None
    format: str = "json"
    timing: bool = True
    inject_relations: list[str] = field(default_factory=list)

    def validate(self):
        for name in ("n", "m", "max_steps", "max_degree", "max_new_rules", "order_p"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise ConfigError(f"{name} must be an integer")
        if min(self.max_steps, self.max_degree, self.max_new_rules, self.order_p) <= 0:
            raise ConfigError("budgets must be positive")
        if self.cutoff is not None and (not isinstance(self.cutoff, int) or self.cutoff < 0):
            raise ConfigError("cutoff must be a non-negative integer")
        if not self.suites:
            raise ConfigError("no suites requested")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
        if self.format not in ("json", "text"):
            raise ConfigError("format must be json or text")
        try:
            self.spec()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def spec(self) -> AlgebraSpec:
        return AlgebraSpec(self.n, self.m, self.deformed)

    def budget(self) -> Budget:
        return Budget(self.max_steps, self.max_degree, self.max_new_rules)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("timing")
        return d


_FIELDS = set(RunConfig.__dataclass_fields__)


def _parse_epsilons(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad energy vector {text!r}") from None
    return parts


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys mirror the flags")
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--deformed", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--max-steps", type=int)
    common.add_argument("--max-degree", type=int)
    common.add_argument("--max-new-rules", type=int)
    common.add_argument("--cutoff", type=int)
    common.add_argument("--order-p", type=int)
    common.add_argument("--epsilons", action="append", help="comma-separated energies; repeatable")
    common.add_argument("--out", help="output path (written atomically); stdout if omitted")
    common.add_argument("--format", choices=("json", "text"))
    common.add_argument("--no-timing", action="store_true", help="omit wall-time fields")
    p = argparse.ArgumentParser(prog="uqcag", description="Verification engine for the Chevalley and CAG presentations.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", action="append", choices=sorted(SUITES), help="repeatable")
    sub.add_parser("fock", parents=[common], help="build a classical Fock module and check the ladder property")
    return p


def load_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        if "suite" in data and "suites" not in data:
            data["suites"] = data.pop("suite")
        extra = set(data) - _FIELDS
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
    if args.command == "fock":
        data.setdefault("deformed", False)
    flags = {
        "n": args.n,
        "m": args.m,
        "deformed": args.deformed,
        "max_steps": args.max_steps,
        "max_degree": args.max_degree,
        "max_new_rules": args.max_new_rules,
        "cutoff": args.cutoff,
        "order_p": args.order_p,
        "out": args.out,
        "format": args.format,
        "suites": getattr(args, "suite", None),
    }
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.epsilons:
        data["epsilons"] = [_parse_epsilons(e) for e in args.epsilons]
    elif "epsilons" in data:
        eps = data["epsilons"]
        if not isinstance(eps, list):
            raise ConfigError("epsilons must be a list")
        if eps and not isinstance(eps[0], list):
            eps = [eps]
        data["epsilons"] = [_parse_epsilons(",".join(map(str, e))) for e in eps]
    if args.no_timing:
        data["timing"] = False
    try:
        cfg = RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


def _exit_code(statuses) -> int:
    w = worst(statuses)
    if w is Status.FAILED:
        return EXIT_FAILED
    if w is Status.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _envelope(command: str, cfg: RunConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "engine_version": __version__, "command": command, "config": cfg.echo()}


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    spec, budget = cfg.spec(), cfg.budget()
    reports = []
    for sid in cfg.suites:
        inject = cfg.inject_relations if sid == "rep_validation" else ()
        reports.append(run_suite(sid, spec, budget, inject=inject))
    if cfg.inject_relations and "rep_validation" not in cfg.suites:
        reports.append(run_suite("rep_validation", spec, budget, inject=cfg.inject_relations))
    statuses = [r.status for rep in reports for r in rep.records]
    counts = {s.value: 0 for s in Status}
    for s in statuses:
        counts[s.value] += 1
    out = _envelope("verify", cfg)
    out["suites"] = [r.to_dict(cfg.timing) for r in reports]
    out["summary"] = {**counts, "total": len(statuses)}
    out["status"] = worst(statuses).value
    return out, _exit_code(statuses)


def _check(label: str, ok: bool, detail: str = "") -> dict:
    d = {"label": label, "status": (Status.PROVED_ZERO if ok else Status.FAILED).value, "method": "fock-matrix"}
    if detail:
        d["detail"] = detail
    return d


def cmd_fock(cfg: RunConfig) -> tuple[dict, int]:
    spec = AlgebraSpec(cfg.n, cfg.m, False)
    if cfg.epsilons:
        hspecs = [HamiltonianSpec(tuple(Fraction(x) for x in e)) for e in cfg.epsilons]
        for h in hspecs:
            h.validate(spec)
    else:
        hspecs = valid_energies(spec)
    module = build_fock(spec, cfg.order_p, cfg.cutoff)
    checks = []
    bf = brute_force_dimension(spec, cfg.order_p, module.cutoff)
    checks.append(_check("dimension", module.dim == bf, f"module {module.dim}, enumeration {bf}"))
    sc = supercommutation_check(module)
    checks.append(_check("supercommutation", sc["ok"]))
    forms = []
    for h in hspecs:
        lc = ladder_check(module, h)
        eps = ",".join(str(e) for e in h.energies)
        checks.append(_check(f"ladder:eps={eps}", lc["ok"], f"{lc['interior_states']} interior states"))
        forms.append({"energies": [str(e) for e in h.energies], **hamiltonian_forms_check(module, h)})
    out = _envelope("fock", cfg)
    out["checks"] = checks
    out["hamiltonian_forms"] = forms
    out["module"] = module.to_dict(hspecs[0] if hspecs else None)
    statuses = [Status(c["status"]) for c in checks]
    out["status"] = worst(statuses).value
    return out, _exit_code(statuses)


def _render_text(report: dict) -> str:
    lines = [f"uqcag {report['engine_version']} {report['command']} schema {report['schema_version']}"]
    if report["command"] == "verify":
        for s in report["suites"]:
            lines.append(f"== {s['suite']} (n={s['spec']['n']}, m={s['spec']['m']}) {s['summary']}")
            for r in s["records"]:
                lines.append(f"{r['status']:<14} {r['provenance']:<6} {r['label']}  steps={r['steps']}")
    else:
        for c in report["checks"]:
            lines.append(f"{c['status']:<14} {c['label']}")
        lines.append("basis: " + " ".join("|" + ",".join(map(str, b)) + ">" for b in report["module"]["basis"]))
    lines.append(f"status: {report['status']}")
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".uqcag-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = load_config(args)
        if args.command == "verify":
            report, code = cmd_verify(cfg)
        else:
            report, code = cmd_fock(cfg)
    except HamiltonianConstraintError as exc:
        print(f"uqcag: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (ConfigError, SuiteSpecError, ElementParseError) as exc:
        print(f"uqcag: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(report, indent=2) + "\n" if cfg.format == "json" else _render_text(report)
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
