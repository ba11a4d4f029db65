"""Command-line front end.

Every command emits a single JSON report on stdout carrying the command
echo, a content digest of each input, the result payload, the seed when
randomization was involved, and a timing field.  Reports are
byte-identical across runs for identical inputs and seeds, except for the
timing field.  Exit codes: 0 = analysis completed (whatever the verdict),
2 = input error; verdicts are data, never exit codes.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import domains, efficiency, mechanisms, model, oracle
from .errors import EffixError, InputError

VERIFY_DEFAULT = True


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_profile(path: str):
    data = _read(path)
    return model.parse_profile(data.decode("utf-8")), _sha256(data)


def _load_lottery(path: str):
    data = _read(path)
    return model.parse_lottery(data.decode("utf-8")), _sha256(data)


def _load_ballot(path: str):
    data = _read(path)
    return domains.parse_ballot_spec(data.decode("utf-8")), _sha256(data)


def _factorial_cap() -> int:
    raw = os.environ.get("EFFIX_FACTORIAL_CAP")
    if raw is None:
        return mechanisms.DEFAULT_FACTORIAL_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"bad EFFIX_FACTORIAL_CAP value {raw!r}") from exc


def _certificate_payload(cert, verify: bool) -> dict:
    if verify and cert.kind == efficiency.EFFICIENT:
        if not cert.utilities.represents(cert.profile):
            raise EffixError("certificate audit failed: representation property")
        top = set(cert.utilities.max_welfare_outcomes())
        if not set(cert.support) <= top:
            raise EffixError("certificate audit failed: support not welfare-maximal")
    if verify and cert.kind == efficiency.DOMINATED:
        verdict = efficiency.sd_compare(
            cert.profile, cert.dominating, model.Lottery.uniform(cert.support)
        )
        if verdict.relation != efficiency.STRICTLY_DOMINATES:
            raise EffixError("certificate audit failed: dominating lottery")
    return cert.to_json_dict()


def _equivalence_payload(profile, verify: bool) -> dict:
    decision = efficiency.equivalence(profile)
    payload: dict = {"coincide": decision.coincide}
    if decision.coincide:
        utilities = decision.utilities  # computing it runs the welfare audit
        payload["utilities"] = utilities.to_json_dict()
        view = domains.as_dichotomous(profile)
        if view is not None:
            cert = domains.dichotomous_lambda(view)
            if cert is not None:
                payload["lambda_certificate"] = cert.to_json_dict()
    else:
        payload["alpha"] = {x: v for x, v in decision.alpha}
        payload["witness_sequences"] = decision.witness.to_json_dict()
        payload["dominating"] = model.lottery_json_dict(decision.dominating)
        if verify:
            verdict = efficiency.sd_compare(
                profile,
                decision.dominating,
                model.Lottery.uniform(decision.pareto),
            )
            if verdict.relation != efficiency.STRICTLY_DOMINATES:
                raise EffixError("certificate audit failed: equivalence dominator")
        if profile.is_strict:
            spec = domains.extract_ballot_witness(profile)
            payload["ballot_spec"] = domains.ballot_spec_json_dict(spec)
    return payload


def _cmd_pareto(args) -> tuple[dict, dict, int | None]:
    profile, digest = _load_profile(args.profile)
    return {"pareto": list(mechanisms.pareto_set(profile))}, {"profile": digest}, None


def _cmd_rsd(args) -> tuple[dict, dict, int | None]:
    profile, digest = _load_profile(args.profile)
    if args.sample is not None:
        lottery = mechanisms.rsd(profile, trials=args.sample, seed=args.seed)
        seed = args.seed
    else:
        lottery = mechanisms.rsd(profile, factorial_cap=_factorial_cap())
        seed = None
    return (
        {"lottery": model.lottery_json_dict(lottery)},
        {"profile": digest},
        seed,
    )


def _cmd_efficient(args) -> tuple[dict, dict, int | None]:
    profile, pdigest = _load_profile(args.profile)
    lottery, ldigest = _load_lottery(args.lottery)
    model.check_lottery_outcomes(profile, lottery)
    cert = efficiency.is_ex_ante_efficient(profile, lottery)
    payload = _certificate_payload(cert, args.verify_certificates)
    if cert.kind == efficiency.DOMINATED and args.verify_certificates:
        verdict = efficiency.sd_compare(profile, cert.dominating, lottery)
        if verdict.relation != efficiency.STRICTLY_DOMINATES:
            raise EffixError("certificate audit failed: dominating lottery")
    return payload, {"profile": pdigest, "lottery": ldigest}, None


def _cmd_dominate(args) -> tuple[dict, dict, int | None]:
    profile, pdigest = _load_profile(args.profile)
    lottery, ldigest = _load_lottery(args.lottery)
    model.check_lottery_outcomes(profile, lottery)
    cert = efficiency.is_ex_ante_efficient(profile, lottery)
    if cert.kind == efficiency.EFFICIENT:
        payload = {"verdict": "efficient", "dominating": None}
    else:
        payload = {
            "verdict": "dominated",
            "dominating": model.lottery_json_dict(cert.dominating),
        }
    return payload, {"profile": pdigest, "lottery": ldigest}, None


def _cmd_equivalence(args) -> tuple[dict, dict, int | None]:
    profile, digest = _load_profile(args.profile)
    payload = _equivalence_payload(profile, args.verify_certificates)
    return payload, {"profile": digest}, None


def _cmd_reverse(args) -> tuple[dict, dict, int | None]:
    profile, digest = _load_profile(args.profile)
    reversed_doc = json.loads(model.serialize_profile(model.reverse_profile(profile)))
    return {"profile": reversed_doc}, {"profile": digest}, None


def _cmd_ballot(args) -> tuple[dict, dict, int | None]:
    spec, digest = _load_ballot(args.spec)
    if args.action == "verify":
        check = domains.verify_ballot(spec)
        payload = {
            "valid": check.ok,
            "violation": None if check.ok else check.describe(),
            "reason": check.reason,
            "permutation": check.permutation,
            "prefix": check.prefix,
            "pair": list(check.pair) if check.pair else None,
        }
    elif args.action == "build":
        profile = domains.ballot_to_profile(spec)
        payload = {"profile": json.loads(model.serialize_profile(profile))}
    else:  # split
        simple = domains.split_to_simple(spec)
        payload = {"spec": domains.ballot_spec_json_dict(simple)}
    return payload, {"spec": digest}, None


def _census_profiles(args, labels):
    if args.exhaustive:
        if args.domain == "single-peaked":
            raise InputError("exhaustive census is not supported for single-peaked")
        kind = "strict" if args.domain == "strict" else "dichotomous"
        yield from oracle.enumerate_profiles(args.agents, labels, kind)
        return
    if args.trials is None:
        raise InputError("census needs --trials or --exhaustive")
    rng = random.Random(args.seed)
    for _ in range(args.trials):
        if args.domain == "strict":
            yield oracle.random_strict_profile(args.agents, labels, rng)
        elif args.domain == "dichotomous":
            yield oracle.random_dichotomous_profile(args.agents, labels, rng)
        else:
            yield domains.generate_single_peaked(
                labels, args.agents, seed=rng.randrange(2**63)
            )


def _cmd_census(args) -> tuple[dict, dict, int | None]:
    labels = tuple(f"x{i + 1}" for i in range(args.outcomes))
    total = 0
    coincide = 0
    counterexamples = []
    rows = []
    for profile in _census_profiles(args, labels):
        decision = efficiency.equivalence(profile)
        total += 1
        digest = _sha256(model.serialize_profile(profile).encode("utf-8"))
        if decision.coincide:
            coincide += 1
        elif len(counterexamples) < 20:
            counterexamples.append(digest)
        if args.csv:
            rows.append((total - 1, digest, decision.coincide))
    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["index", "profile_sha256", "coincide"])
            writer.writerows(rows)
    if total == 0:
        raise InputError("census over zero profiles")
    payload = {
        "domain": args.domain,
        "agents": args.agents,
        "outcomes": args.outcomes,
        "total": total,
        "coincide": coincide,
        "fraction": str(Fraction(coincide, total)),
        "counterexamples": counterexamples,
    }
    params = json.dumps(
        {
            "domain": args.domain,
            "agents": args.agents,
            "outcomes": args.outcomes,
            "trials": args.trials,
            "exhaustive": args.exhaustive,
        },
        sort_keys=True,
    )
    seed = args.seed if not args.exhaustive else None
    return payload, {"parameters": _sha256(params.encode("utf-8"))}, seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effix",
        description="Exact efficiency certificates for lotteries over outcomes "
        "under ordinal preferences.",
    )
    parser.add_argument(
        "--no-verify-certificates",
        dest="verify_certificates",
        action="store_false",
        default=VERIFY_DEFAULT,
        help="skip the self-audit of emitted certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pareto", help="Pareto-optimal outcomes of a profile")
    p.add_argument("profile")
    p.set_defaults(handler=_cmd_pareto)

    p = sub.add_parser("rsd", help="random serial dictatorship lottery")
    p.add_argument("profile")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=False)
    group.add_argument("--sample", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_rsd)

    p = sub.add_parser("efficient", help="certify a lottery's ex-ante efficiency")
    p.add_argument("profile")
    p.add_argument("lottery")
    p.set_defaults(handler=_cmd_efficient)

    p = sub.add_parser(
        "dominate", help="like efficient, but report only the dominating lottery"
    )
    p.add_argument("profile")
    p.add_argument("lottery")
    p.set_defaults(handler=_cmd_dominate)

    p = sub.add_parser(
        "equivalence",
        help="decide whether ex-ante and ex-post efficiency coincide",
    )
    p.add_argument("profile")
    p.set_defaults(handler=_cmd_equivalence)

    p = sub.add_parser("reverse", help="reverse every agent's ranking")
    p.add_argument("profile")
    p.set_defaults(handler=_cmd_reverse)

    p = sub.add_parser("ballot", help="ballot-counting spec tools")
    p.add_argument("action", choices=("verify", "build", "split"))
    p.add_argument("spec")
    p.set_defaults(handler=_cmd_ballot)

    p = sub.add_parser("census", help="equivalence fractions over many profiles")
    p.add_argument("--domain", choices=("strict", "dichotomous", "single-peaked"), required=True)
    p.add_argument("--agents", type=int, required=True)
    p.add_argument("--outcomes", type=int, required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--csv")
    p.set_defaults(handler=_cmd_census)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        payload, digests, seed = args.handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "inputs": digests,
        "result": payload,
    }
    if seed is not None:
        report["seed"] = seed
    report["timing_ms"] = round((time.perf_counter() - started) * 1000, 3)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
