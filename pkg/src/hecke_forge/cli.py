"""Command-line entry point: ``hecke-forge <command> [options]``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass

from .gf import GF, is_prime
from .hecke import HeckeModule, default_parallelism
from .localfield import EQUAL_CHAR, MIXED_CHAR, make_field
from .report import Report, dumps, merge
from .weights import ProfileError, WeightProfile
from . import suites

COMMANDS = ("lucas", "binom-lemma", "psi", "p1", "relations", "comparison", "selfext", "all")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    p: int = 3
    f: int = 2
    r_mode: str = "profile"          # zero | q-1 | profile | both
    r_digits: tuple = (9, 13)
    depth: int = 2
    buffer: int = 2
    mode: str = EQUAL_CHAR
    output: str = "text"
    strict: bool = False
    parallel: int = 0

    @property
    def q(self) -> int:
        return self.p**self.f

    def params(self) -> dict:
        d = asdict(self)
        d["r_digits"] = list(self.r_digits)
        d.pop("output")
        d.pop("parallel")
        return d


def parse_r(text: str | None, p: int, f: int) -> tuple[str, tuple]:
    if text is None:
        return "default", ()
    t = text.strip().lower()
    if t in ("zero", "0"):
        return "zero", (0,) * f
    if t in ("q-1", "p-1"):
        return "q-1", (p - 1,) * f
    try:
        digits = tuple(int(x) for x in t.split(","))
    except ValueError:
        raise ConfigError(f"--r must be 0, q-1 or comma-separated digits r_0,...,r_(f-1); got {text!r}")
    if len(digits) == 1 and f == 1 and digits[0] == p - 1:
        return "q-1", digits
    return "profile", digits


def build_config(args: argparse.Namespace) -> SuiteConfig:
    p, f = args.p, args.f
    if f is None:
        f = 1 if args.mode == MIXED_CHAR or args.command == "selfext" else 2
    if not is_prime(p):
        raise ConfigError(f"--p must be prime; got {p}")
    if f < 1:
        raise ConfigError("--f must be at least 1")
    if p**f > 2**16:
        raise ConfigError("q = p^f must be at most 65536")
    if args.mode == MIXED_CHAR and f != 1:
        raise ConfigError("--mode qp needs --f 1 (Q_p has residue field F_p)")
    if args.depth < 0 or args.buffer < 0:
        raise ConfigError("--depth and --buffer must be non-negative")
    r_mode, digits = parse_r(args.r, p, f)
    cmd = args.command
    if r_mode == "default":
        if cmd == "selfext":
            r_mode, digits = "both", ()
        elif (p, f) == (3, 2):
            r_mode, digits = "profile", (9, 13)
        elif cmd in ("psi", "p1", "comparison", "all"):
            raise ConfigError(f"give --r r_0,...,r_{f - 1} for p={p}, f={f} (the default r=9,13 is for p=3, f=2)")
    if digits and len(digits) != f:
        raise ConfigError(f"--r needs {f} digits for f={f}; got {len(digits)}")
    parallel = args.parallel
    if parallel == -1:
        parallel = default_parallelism()
    cfg = SuiteConfig(p, f, r_mode, digits, args.depth, args.buffer, args.mode, args.output, args.strict, parallel)
    validate(cmd, cfg)
    return cfg


def validate(cmd: str, cfg: SuiteConfig) -> None:
    if cmd in ("selfext", "all"):
        if cfg.p == 2:
            raise ConfigError("the self-extension suite needs an odd prime; p = 2 is unsupported")
        if cmd == "selfext" and cfg.f != 1:
            raise ConfigError("the self-extension suite needs --f 1 (use --mode qp for Q_p)")
        if cfg.depth < cfg.buffer:
            raise ConfigError("the self-extension suite needs --depth >= --buffer")
        if cmd == "selfext" and cfg.r_mode not in ("zero", "q-1", "both"):
            raise ConfigError(f"selfext takes --r 0 or --r {cfg.p - 1} (p-1), or no --r for both")
    if cmd in ("psi", "p1", "comparison", "all"):
        if cfg.mode != EQUAL_CHAR and cmd in ("comparison", "all"):
            raise ConfigError("the comparison suite needs f >= 2, so it runs in --mode equal-char")
        if cfg.r_mode != "profile":
            raise ConfigError("psi, p1 and comparison need a weight profile --r r_0,...,r_(f-1)")
        prof = WeightProfile(GF(cfg.p, cfg.f), cfg.r_digits)
        if prof.r == 0 or prof.r % (cfg.q - 1):
            raise ConfigError(f"r = {prof.r} must be positive and divisible by q - 1 = {cfg.q - 1}")
        if cmd in ("p1", "comparison", "all"):
            try:
                prof.require_comparison_hypotheses()
            except ProfileError as exc:
                raise ConfigError(str(exc)) from None


def selfext_r(cfg: SuiteConfig):
    return {"zero": 0, "q-1": cfg.p - 1}.get(cfg.r_mode)


def run(cmd: str, cfg: SuiteConfig) -> list[Report]:
    """Run one command and return its reports."""
    if cmd == "lucas":
        return [suites.lucas_suite()]
    if cmd == "binom-lemma":
        return [suites.binom_lemma_suite()]
    if cmd in ("psi", "p1", "comparison"):
        prof = WeightProfile(GF(cfg.p, cfg.f), cfg.r_digits)
        if cmd == "psi":
            return [suites.psi_suite(prof)]
        if cmd == "p1":
            return [suites.p1_suite(prof, exhaustive=cfg.q <= 9)]
        H = HeckeModule(make_field(cfg.p, cfg.f, cfg.mode), parallel=cfg.parallel)
        return [suites.comparison_suite(H, prof, cfg.depth)]
    if cmd == "relations":
        H = HeckeModule(make_field(cfg.p, cfg.f, cfg.mode), parallel=cfg.parallel)
        return [suites.relations_suite(H, cfg.depth)]
    if cmd == "selfext":
        K = make_field(cfg.p, 1, cfg.mode)
        return [suites.selfext_suite(K, selfext_r(cfg), cfg.depth, cfg.buffer, cfg.parallel)]
    if cmd == "all":
        out: list[Report] = []
        for sub in ("lucas", "binom-lemma", "psi", "p1", "relations", "comparison"):
            out += run(sub, cfg)
        # the self-extension presentations live over Q_p with the same p
        out.append(suites.selfext_suite(make_field(cfg.p, 1, MIXED_CHAR), None, cfg.depth, cfg.buffer, cfg.parallel))
        return out
    raise ConfigError(f"unknown command {cmd!r}")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hecke-forge",
        description="Exact verification suites for Hecke operators on compact inductions of GL_2.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--p", type=int, default=3, help="residue characteristic (default 3)")
    ap.add_argument("--f", type=int, default=None,
                    help="residue degree, q = p^f (default 2; 1 for selfext and --mode qp)")
    ap.add_argument("--r", default=None,
                    help="weight: digits r_0,...,r_(f-1) (default 9,13), or 0 / p-1 for selfext")
    ap.add_argument("--depth", type=int, default=2, help="edge depth of the checked basis (default 2)")
    ap.add_argument("--buffer", type=int, default=2, help="extra depth for membership searches (default 2)")
    ap.add_argument("--mode", choices=(EQUAL_CHAR, MIXED_CHAR), default=EQUAL_CHAR,
                    help="local field: F_q((t)) or Q_p (default equal-char)")
    ap.add_argument("--output", choices=("text", "json"), default="text")
    ap.add_argument("--strict", action="store_true", help="treat inconclusive checks as failures")
    ap.add_argument("--parallel", type=int, nargs="?", const=-1, default=0,
                    help="worker processes for basis-wide operator images (no value: one per CPU)")
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"hecke-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = run(args.command, cfg)
    if cfg.output == "json":
        if len(reports) == 1:
            sys.stdout.write(reports[0].dumps())
        else:
            sys.stdout.write(dumps(merge(args.command, cfg.params(), reports)))
    else:
        for rep in reports:
            print(rep.text())
    ok = all(rep.ok(cfg.strict) for rep in reports)
    return EXIT_OK if ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
