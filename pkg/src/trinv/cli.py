"""Command-line entry point: ``trinv <check> [options]`` and ``trinv rewrite "<word>"``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .errors import UsageError
from .fields import FieldSpec, get_field, parse_field
from .invariants import ParamSet, build_generators, build_hsop, build_set, count_msog, transcendence_degree
from .report import FAIL, PASS, RunConfig, VerificationReport, combine_status, make_report

log = logging.getLogger("trinv")

MSOG_TABLE = {1: 3, 2: 11, 3: 48, 4: 189, 5: 607, 6: 1635}


def _params(cfg: RunConfig) -> ParamSet:
    return ParamSet(*cfg.params) if cfg.params else ParamSet.default(cfg.spec)


def _merge(check: str, spec: FieldSpec, reports: list[VerificationReport], **parameters) -> VerificationReport:
    items, seeds = [], []
    for r in reports:
        for it in r.items:
            items.append({"check": r.check, **it})
        seeds += [s for s in r.seeds if s not in seeds]
        for k, v in r.parameters.items():
            parameters.setdefault(f"{r.check}.{k}", v)
    status = combine_status(r.status for r in reports)
    return make_report(check, spec, items, parameters=parameters, seeds=seeds, status=status)


def check_generators(cfg: RunConfig) -> VerificationReport:
    spec = cfg.spec
    main = build_generators(spec)
    expected = 58 if spec.characteristic == 3 else 48
    items = []
    for label, size in (("G1", 38), ("G2", 10), ("G3", 20)):
        n = len(build_set(label, spec))
        items.append({"id": label, "size": n, "expected": size, "status": PASS if n == size else FAIL})
    items.append({"id": main.label, "size": len(main), "expected": expected,
                  "elements": [str(e) for e in main.elements],
                  "status": PASS if len(main) == expected else FAIL})
    return make_report("generators", spec, items, parameters={"set": main.label})


def check_counts(cfg: RunConfig) -> VerificationReport:
    items = []
    for d, want in MSOG_TABLE.items():
        got = count_msog(d)
        items.append({"id": f"M_{d}", "value": got, "expected": want, "status": PASS if got == want else FAIL})
    params = _params(cfg)
    for target, n, d in (("R33", 3, 3), ("R32", 3, 2), ("R42", 4, 2)):
        size = len(build_hsop(target, params, cfg.spec))
        want = transcendence_degree(n, d)
        items.append({"id": f"|{target} system|", "value": size, "expected": want,
                      "status": PASS if size == want else FAIL})
    return make_report("counts", cfg.spec, items)


def check_generation(cfg: RunConfig) -> VerificationReport:
    from .spans import verify_generation

    return verify_generation(build_generators(cfg.spec), cfg.bound, cfg.trials, cfg.seed)


def check_minimality(cfg: RunConfig) -> VerificationReport:
    from .spans import characteristic_split, verify_minimality

    rep = verify_minimality(build_generators(cfg.spec), cfg.trials, cfg.seed)
    split = make_report("characteristic-split", cfg.spec, characteristic_split(cfg.spec, cfg.trials, cfg.seed),
                        seeds=[cfg.seed])
    return _merge("minimality", cfg.spec, [rep, split])


def check_independence(cfg: RunConfig) -> VerificationReport:
    from .nullcone import jacobian_independence, planted_dependence_control

    params = _params(cfg)
    reports = [jacobian_independence(build_hsop(t, params, cfg.spec), cfg.trials or 10, cfg.seed)
               for t in ("R33", "R32", "R42")]
    reports.append(planted_dependence_control(cfg.spec, 100, cfg.seed))
    return _merge("hsop-independence", cfg.spec, reports)


def check_cases(cfg: RunConfig) -> VerificationReport:
    from .cases import run_all_cases

    return run_all_cases(cfg.spec, _params(cfg))


def check_nullcone(cfg: RunConfig) -> VerificationReport:
    from .nullcone import nullcone_vanishing

    return nullcone_vanishing(cfg.spec, cfg.trials or 1000, 10_000, cfg.seed, _params(cfg))


def check_rewrite_suite(cfg: RunConfig) -> VerificationReport:
    from .rewrite_suite import rewrite_suite

    return rewrite_suite(cfg.spec, cfg.bound or 8, 10_000, cfg.seed, cfg.trials)


def check_teranishi(cfg: RunConfig) -> VerificationReport:
    from .nullcone import verify_teranishi

    return verify_teranishi(cfg.spec)


def check_lemma2(cfg: RunConfig) -> VerificationReport:
    from .nullcone import verify_lemmaI_families, verify_lemmaII, verify_rank1_identity

    return _merge("lemma2-identities", cfg.spec, [
        verify_lemmaII(cfg.spec, cfg.trials or 500, cfg.seed),
        verify_rank1_identity(cfg.spec, 200, cfg.seed),
        verify_lemmaI_families(cfg.spec, cfg.seed),
    ])


CHECKS = {
    "generators": check_generators,
    "generation": check_generation,
    "minimality": check_minimality,
    "hsop-independence": check_independence,
    "hsop-cases": check_cases,
    "nullcone": check_nullcone,
    "rewrite-suite": check_rewrite_suite,
    "counts": check_counts,
    "teranishi": check_teranishi,
    "lemma2-identities": check_lemma2,
}


def run_check(name: str, cfg: RunConfig) -> VerificationReport:
    try:
        fn = CHECKS[name]
    except KeyError:
        raise UsageError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}") from None
    if cfg.params:
        ParamSet(*cfg.params).validate(get_field(cfg.spec))
    t0 = time.perf_counter()
    rep = fn(cfg)
    rep.timing = time.perf_counter() - t0
    rep.parameters.setdefault("config", cfg.describe())
    return rep


def rewrite_word(text: str, cfg: RunConfig) -> str:
    from .words import canonicalize, parse_word

    return str(canonicalize(parse_word(text), get_field(cfg.spec)))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trinv", description="Verify generators and parameter systems of 3x3 matrix invariants.")
    p.add_argument("check", help=f"one of: {', '.join(CHECKS)}, or 'rewrite'")
    p.add_argument("word", nargs="?", help="word to rewrite, e.g. 'x1 x2 x1' (rewrite only)")
    p.add_argument("--char", default="0", help="0 (prime surrogate), Q, 2, 3 or any prime")
    p.add_argument("--ext", type=int, default=None, help="extension degree for characteristic 2 or 3")
    p.add_argument("--seed", type=int, default=20240601)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--params", default=None, help="a1,a2,b1,b2,g")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        spec = parse_field(args.char, args.ext)
        params = ParamSet.parse(args.params).as_tuple() if args.params else None
        cfg = RunConfig(spec, args.seed, args.trials, args.bound, params, args.out)
        if args.check == "rewrite":
            if not args.word:
                raise UsageError("rewrite needs a word, e.g. trinv rewrite 'x1 x2 x1'")
            print(rewrite_word(args.word, cfg))
            return 0
        if args.word:
            raise UsageError(f"unexpected argument {args.word!r}")
        log.info("running %s over %s", args.check, spec.describe())
        rep = run_check(args.check, cfg)
    except UsageError as exc:
        print(f"trinv: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure, not a verdict
        log.debug("internal error", exc_info=True)
        print(f"trinv: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = rep.to_json()
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(rep.summary(), file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
