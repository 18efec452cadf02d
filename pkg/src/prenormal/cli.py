"""prenormal command line: run named demos or law suites over a backend catalog.

Exit codes: 0 expectations met, 1 unexpected verdict, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import engine as E
from .backends import BACKENDS
from .demos import ScenarioError, load_scenario, registry, render_text, run_scenario

ALL_LAWS = tuple(E.LAWS)


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    backend: str
    laws: tuple = E.FULL_SUITE
    mode: str = "exhaustive"
    seed: int | None = None
    samples: int | None = None
    max_order: int | None = None
    fmt: str = "text"
    expect_fail: tuple = field(default_factory=tuple)

    def validate(self):
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}; choose from {', '.join(sorted(BACKENDS))}")
        bad = [law for law in self.laws + self.expect_fail if law not in E.LAWS]
        if bad:
            raise ConfigError(f"unknown laws {bad}; choose from {', '.join(ALL_LAWS)}")
        if self.mode not in ("exhaustive", "sampled"):
            raise ConfigError("mode must be exhaustive or sampled")
        if self.mode == "sampled" and self.seed is None:
            raise ConfigError("sampled mode needs --seed")
        if self.samples is not None and self.samples <= 0:
            raise ConfigError("--samples must be positive")
        if self.max_order is not None and self.max_order <= 0:
            raise ConfigError("--max-order must be positive")
        if self.fmt not in ("text", "json"):
            raise ConfigError("format must be text or json")
        return self


def run_suite(cfg: SuiteConfig) -> tuple[int, str]:
    cfg.validate()
    B = BACKENDS[cfg.backend]
    catalog = B.catalog(max_order=cfg.max_order) if cfg.max_order else B.catalog()
    opts = {"mode": cfg.mode, "seed": cfg.seed, "samples": cfg.samples}
    reports = E.run_laws(catalog, cfg.laws, **opts)
    unexpected = []
    for law, r in zip(cfg.laws, reports):
        expected_fail = law in cfg.expect_fail
        if (r.verdict == "fail") != expected_fail:
            unexpected.append(law)
    if cfg.fmt == "json":
        body = json.dumps({"backend": cfg.backend, "catalog": repr(catalog), "objects": len(catalog.objects),
                           "laws": list(cfg.laws), "mode": cfg.mode, "seed": cfg.seed,
                           "expect_fail": list(cfg.expect_fail), "unexpected": unexpected,
                           "reports": [r.to_json() for r in reports]}, indent=2)
    else:
        lines = [f"backend {cfg.backend}: {catalog!r}"]
        for r in reports:
            lines.append(r.to_text())
        lines.append("expectations met" if not unexpected else f"unexpected verdicts: {', '.join(unexpected)}")
        body = "\n".join(lines)
    return (1 if unexpected else 0), body


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prenormal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="named scenarios")
    dsub = demo.add_subparsers(dest="action", required=True)
    dsub.add_parser("list", help="list demo names")
    run = dsub.add_parser("run", help="run one demo (by name) or a scenario file")
    run.add_argument("name", nargs="?")
    run.add_argument("--file", help="scenario JSON file instead of a registered name")
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.add_argument("--out")

    suite = sub.add_parser("suite", help="law suites over a backend catalog")
    ssub = suite.add_subparsers(dest="action", required=True)
    srun = ssub.add_parser("run")
    srun.add_argument("--backend", required=True)
    srun.add_argument("--laws", default=",".join(E.FULL_SUITE), help="comma separated, or 'all'")
    srun.add_argument("--mode", default="exhaustive")
    srun.add_argument("--seed", type=int)
    srun.add_argument("--samples", type=int)
    srun.add_argument("--max-order", type=int)
    srun.add_argument("--format", default="text")
    srun.add_argument("--out")
    srun.add_argument("--expect-fail", default="", help="laws whose failure is expected")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        if args.command == "demo":
            return _demo(args)
        return _suite(args)
    except (ConfigError, ScenarioError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _demo(args) -> int:
    reg = registry()
    if args.action == "list":
        for name, sc in reg.items():
            print(f"{name}: {sc['summary']}")
        return 0
    if args.file:
        try:
            sc = load_scenario(Path(args.file).read_text())
        except OSError as e:
            raise ScenarioError(str(e)) from None
    elif args.name in reg:
        sc = reg[args.name]
    else:
        print(f"error: unknown demo {args.name!r}; registered demos:", file=sys.stderr)
        for name in reg:
            print(f"  {name}", file=sys.stderr)
        return 2
    result = run_scenario(sc)
    text = json.dumps(result, indent=2) if args.format == "json" else render_text(result)
    _emit(text, args.out)
    return 0 if result["ok"] else 1


def _suite(args) -> int:
    laws = ALL_LAWS if args.laws == "all" else tuple(x for x in args.laws.split(",") if x)
    cfg = SuiteConfig(args.backend, laws, args.mode, args.seed, args.samples, args.max_order, args.format,
                      tuple(x for x in args.expect_fail.split(",") if x))
    code, text = run_suite(cfg)
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
