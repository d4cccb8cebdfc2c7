"""``recip-lab``: generate, verify and reconstruct compatible-system datasets.

Exit status: 0 on success, 1 when a verification or reconstruction fails
(the JSON report is still written), 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile

from .compsys import CompatibleSystemDataset, dumps, generate_dataset, verify_compatibility
from .errors import (ConfigError, CorruptDataError, DomainError, PreconditionError, ReciprocityError,
                     ReconstructionError, UnsupportedInputError)
from .hecke import load_character_config
from .kummer import find_uncovered_vector, lemma_splitting_checks, random_proper_subspaces
from .nf import CyclotomicField
from .reconstruct import (ReconstructConfig, SiteBank, default_bound, reconstruct_system, select_separating_prime,
                          separating_norms, split_charpoly)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON ({exc.msg})") from exc


def write_atomic(path: str | None, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_dataset(path: str) -> CompatibleSystemDataset:
    return CompatibleSystemDataset.from_json(_read_json(path))


def cmd_generate(args) -> int:
    K, L, chars = load_character_config(_read_json(args.config))
    ds = generate_dataset(chars, args.primes, args.seed, norm_bound=args.norm_bound,
                          T_extra=args.t_extra or ())
    write_atomic(args.output, ds.dumps())
    return EXIT_OK


def cmd_verify(args) -> int:
    ds = _load_dataset(args.dataset)
    chars = None
    if args.chars:
        _, _, chars = load_character_config(_read_json(args.chars))
    report = verify_compatibility(ds, chars, site_sample=args.sites, seed=args.seed)
    write_atomic(args.output, dumps(report))
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_reconstruct(args) -> int:
    ds = _load_dataset(args.dataset)
    cfg = ReconstructConfig(bound=args.bound, finite_order_bound=args.finite_order,
                            modulus_candidates=tuple(args.modulus) if args.modulus else None,
                            modulus_prime_bound=args.modulus_bound, seed=args.seed,
                            min_records=args.min_records)
    try:
        rec = reconstruct_system(ds, cfg)
    except ReconstructionError as exc:
        write_atomic(args.output, dumps({"version": 1, "error": type(exc).__name__, "message": str(exc),
                                         "report": exc.report}))
        return EXIT_FAILED
    write_atomic(args.output, dumps(rec.to_json()))
    return EXIT_OK


def cmd_check_lemma(args) -> int:
    ds = _load_dataset(args.dataset)
    bound = args.tuple_bound if args.tuple_bound is not None else default_bound(ds)
    bank = SiteBank(ds.L, seed=args.seed)
    count = min(args.records, len(ds.records))
    tuples = [[d.exponents for d in split_charpoly(list(r.charpoly), r.prime.generator, bound, bank)]
              for r in ds.records[:count]]
    runs = []
    for a in range(count):
        for b in range(count):
            if a == b:
                continue
            reps = lemma_splitting_checks(ds.records[a].prime, ds.records[b].prime, tuples[a], tuples[b],
                                          args.ell, args.bound, S=ds.S)
            for i, rep in enumerate(reps):
                runs.append({"r": a, "r_prime": b, "i": i, "samples": rep["samples"],
                             "violations": rep["violations"], "status": rep["status"]})
    passed = all(run["status"] == "ok" for run in runs)
    report = {"ell": args.ell, "bound": args.bound, "records": count, "runs": runs,
              "samples": min((r["samples"] for r in runs), default=0),
              "violations": sum(len(r["violations"]) for r in runs), "passed": passed}
    write_atomic(args.output, dumps(report))
    return EXIT_OK if passed else EXIT_FAILED


def cmd_check_claim(args) -> int:
    rng = random.Random(args.seed)
    instances = []
    for _ in range(args.trials):
        subs = random_proper_subspaces(args.ell, args.dim, args.k, rng)
        v = find_uncovered_vector(subs, rng)
        ok = not any(s.contains(v) for s in subs)
        instances.append({"vector": v, "verified": ok})
    passed = all(x["verified"] for x in instances)
    report = {"ell": args.ell, "dim": args.dim, "k": args.k, "trials": args.trials,
              "succeeded": sum(x["verified"] for x in instances), "instances": instances, "passed": passed}
    write_atomic(args.output, dumps(report))
    return EXIT_OK if passed else EXIT_FAILED


def cmd_separating_prime(args) -> int:
    K = CyclotomicField(args.N)
    alpha = K.element(args.alpha)
    p = select_separating_prime(alpha, args.bound, set(args.forbid or ()))
    norms = separating_norms(alpha, args.bound)
    report = {"N": args.N, "alpha": list(alpha.coords), "bound": args.bound, "prime": p,
              "checked": [{"tuple": list(m), "norm": v, "coprime": v % p != 0} for m, v in sorted(norms.items())]}
    report["passed"] = all(c["coprime"] for c in report["checked"])
    write_atomic(args.output, dumps(report))
    return EXIT_OK if report["passed"] else EXIT_FAILED


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recip-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample split primes and write f_r for a list of characters")
    p.add_argument("--config", required=True, help="character config JSON ({K, L, characters})")
    p.add_argument("--primes", type=int, required=True, help="number of records")
    p.add_argument("--seed", type=int, required=True, help="sampling seed")
    p.add_argument("--norm-bound", type=int, default=10 ** 5, help="upper bound for record norms")
    p.add_argument("--t-extra", type=_int_list, help="extra rational primes in the defect set")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="structural and reduction checks of a dataset")
    p.add_argument("dataset")
    p.add_argument("--chars", help="candidate character config; enables exact recomputation")
    p.add_argument("--sites", type=int, default=25, help="number of random reduction sites")
    p.add_argument("--seed", type=int, default=0, help="seed for site sampling")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reconstruct", help="recover Hecke characters from a dataset")
    p.add_argument("dataset")
    p.add_argument("--bound", type=int, help="bound on |m_sigma| (default: from coefficient heights)")
    p.add_argument("--finite-order", type=int, default=8, help="largest finite-part order searched")
    p.add_argument("--modulus", type=_int_list, help="rational primes allowed in the modulus")
    p.add_argument("--modulus-bound", type=int, default=30, help="default modulus primes are those up to this")
    p.add_argument("--min-records", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="seed for the auxiliary sites")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("check-lemma", help="sample the ell-th power splitting test on record pairs")
    p.add_argument("dataset")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--bound", type=int, default=10 ** 5, help="norm bound for sampled primes s")
    p.add_argument("--records", type=int, default=5, help="use pairs among the first RECORDS records")
    p.add_argument("--tuple-bound", type=int, help="bound for exponent recovery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check_lemma)

    p = sub.add_parser("check-claim", help="find vectors avoiding k random proper subspaces of F_ell^dim")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check_claim)

    p = sub.add_parser("separating-prime", help="least prime separating bounded monomials in alpha")
    p.add_argument("--N", type=int, default=4, help="conductor of K")
    p.add_argument("--alpha", type=_int_list, required=True, help="coordinates, e.g. 2,1 for 2+zeta")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--forbid", type=_int_list, help="primes to exclude")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_separating_prime)
    return parser


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ConfigError, CorruptDataError, DomainError, PreconditionError,
            UnsupportedInputError) as exc:
        print(f"recip-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReciprocityError as exc:
        print(f"recip-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
