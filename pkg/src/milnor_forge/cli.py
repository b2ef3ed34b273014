"""``milnor-forge`` command line.

Exit codes: 0 success, 2 certified failure (witness in the envelope),
1 configuration or resource error, 64 unknown command.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import certificates
from .dickson import (
    coinvariant_hilbert_series,
    dickson_invariants,
    group_order_check,
    koszul_regularity,
    verify_invariance,
)
from .errors import CertificationFailure, MilnorForgeError, ParameterError
from .freeness import certify_freeness, compute_beta, locate_generator
from .groups import steinberg_idempotent
from .lazard import (
    LazardPresentation,
    TruncatedLazardRing,
    eliminate,
    exponent_ceiling,
    km_localization_check,
    verify_annihilates,
)
from .level import claimed_level, level_certificate
from .module import apply_idempotent, build_frobenius_module, build_module

log = logging.getLogger("milnor_forge")

COMMANDS = ("dickson", "steinberg", "module", "certify", "level", "annihilate", "regression")
EXIT_OK, EXIT_ERROR, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict
    out: str | None = None
    verbosity: int = 0
    extras: dict = field(default_factory=dict)


# ------------------------------------------------------------ pipelines

def _t_poly(coeffs: dict) -> str:
    parts = []
    for r, c in sorted(coeffs.items()):
        parts.append(str(c) if r == 0 else f"({c})*t^{r}")
    return " + ".join(parts) if parts else "0"


def run_dickson(params: dict) -> dict:
    p, n = params["p"], params["n"]
    ds = dickson_invariants(p, n)
    out = {
        "degrees": ds.degrees,
        "expected_degrees": [p**n - p ** (n - r) for r in range(1, n + 1)],
        "invariants": [{"r": r, "polynomial": str(D)} for r, D in enumerate(ds.invariants, start=1)],
    }
    if params.get("verify"):
        inv = verify_invariance(ds)
        out["invariance"] = inv.to_json()
        out["order_counts"] = group_order_check(p, n)
        out["hilbert"] = coinvariant_hilbert_series(ds, with_exterior=False).to_json()
        if not inv.invariant:
            raise CertificationFailure("Dickson invariant is not invariant", witness=out)
    if params.get("koszul_bound") is not None:
        out["koszul"] = koszul_regularity(ds, params["koszul_bound"]).to_json()
    return out


def run_steinberg(params: dict) -> dict:
    p, n, k = params["p"], params["n"], params["k"]
    e = steinberg_idempotent(p, n, k, strict=not params.get("allow_untwisted", False))
    ring = e.ring
    return {
        "support_size": len(e),
        "identity_coefficient": _t_poly(e.coefficient(ring.identity)),
        "idempotent": True,
        "coefficient_ring": {"t_minimal_polynomial": list(ring.minpoly), "t_mod_p": ring.root},
        "element": e.to_json(),
    }


def _summand(p, n, k, frobenius=False):
    e = steinberg_idempotent(p, n, k, strict=False)
    if frobenius:
        if p != 2:
            raise ParameterError("the Frobenius module is only defined for p = 2")
        return apply_idempotent(build_frobenius_module(n), e)
    return apply_idempotent(build_module(p, n), e)


def _grade_json(g):
    return g.to_json() if hasattr(g, "to_json") else {"degree": int(g)}


def run_module(params: dict, dump: str | None = None) -> dict:
    p, n, k = params["p"], params["n"], params["k"]
    frob = params.get("frobenius", False)
    sub = _summand(p, n, k, frob)
    parent = sub.parent
    out = {
        "ambient_dim": parent.dim,
        "dim": sub.dim,
        "frobenius": frob,
        "dims": [dict(_grade_json(g), dim=d) for g, d in sub.dims().items()],
    }
    if frob:
        out["realization_identity"] = parent.realization_identity()
    if dump:
        basis = []
        for i, (lab, g) in enumerate(zip(sub.labels, sub.grades)):
            images = {}
            for m, Q in sorted(sub.operators.items()):
                col = Q[:, i]
                images[str(m)] = [[int(j), int(col[j])] for j in col.nonzero()[0]]
            basis.append({"index": i, "label": lab, "grade": _grade_json(g), "q_images": images})
        Path(dump).write_text(certificates.canonical_json({"basis": basis}))
    return out


def run_certify(params: dict) -> dict:
    p, n, k = params["p"], params["n"], params["k"]
    ops = params.get("ops")
    if ops is None:
        ops = list(range(claimed_level(p, n)))
    sub = _summand(p, n, k, params.get("frobenius", False))
    cert = certify_freeness(sub, ops)
    out = {"freeness": cert.to_json(), "summand_dim": sub.dim}
    if not cert.free:
        raise CertificationFailure("summand is not free", witness=out)
    if not cert.margolis_agrees:
        raise CertificationFailure("Margolis and basis witnesses disagree", witness=out)
    if not params.get("frobenius", False):
        gen = compute_beta(sub, locate_generator(sub), ops)
        out["generator"] = gen.to_json()
    return out


def run_level(params: dict) -> dict:
    cert = level_certificate(params["p"], params["n"], params["k"], params.get("r_max"))
    return cert.to_json()


def run_annihilate(params: dict) -> dict:
    rj = params["ring"]
    gens = rj["generators"]
    ring = TruncatedLazardRing(int(rj["p"]), [g["name"] for g in gens],
                               [int(g["grading"]) for g in gens], rj["v_m"])
    pres = LazardPresentation.from_json(ring, params["presentation"])
    loc = km_localization_check(pres)
    out = {"ring": ring.to_json(), "presentation": pres.to_json(), "localization": loc.to_json()}
    if not pres.certified:
        raise CertificationFailure("some generator has no certificate relation", witness=out)
    a = eliminate(pres)
    report = verify_annihilates(a, pres, params.get("verify_bound"))
    out.update({"annihilator": a.to_json(), "exponent_ceiling": exponent_ceiling(pres),
                "verification": report.to_json()})
    if not report.verified:
        raise CertificationFailure("annihilator not verified", witness=out)
    return out


PIPELINES = {
    "dickson": run_dickson,
    "steinberg": run_steinberg,
    "module": run_module,
    "certify": run_certify,
    "level": run_level,
    "annihilate": run_annihilate,
}


def run(config: RunConfig) -> tuple[dict, int]:
    """Execute one pipeline; returns (envelope, exit code).

    Certified failures still produce an envelope.  Configuration errors raise.
    """
    if config.command not in PIPELINES:
        raise UsageError(f"unknown command {config.command!r}")
    fn = PIPELINES[config.command]
    log.info("running %s %s", config.command, config.params)
    try:
        result = fn(config.params, **config.extras) if config.extras else fn(config.params)
        result = {"status": "ok", **result}
        code = EXIT_OK
    except CertificationFailure as exc:
        result = {"status": "failure", "message": str(exc), "witness": exc.witness}
        code = EXIT_FAILURE
    return certificates.envelope(config.command, config.params, result), code


# ------------------------------------------------------------ goldens

GOLDEN_SET = [
    ("level_p3_n1_k1", "level", {"p": 3, "n": 1, "k": 1, "r_max": 3}),
    ("level_p2_n2_k0", "level", {"p": 2, "n": 2, "k": 0, "r_max": 3}),
    ("level_p3_n2_k1", "level", {"p": 3, "n": 2, "k": 1, "r_max": 4}),
    ("level_p2_n3_k0", "level", {"p": 2, "n": 3, "k": 0, "r_max": 4}),
    ("dickson_p2_n2", "dickson", {"p": 2, "n": 2, "verify": True, "koszul_bound": 5}),
    ("dickson_p3_n2", "dickson", {"p": 3, "n": 2, "verify": True, "koszul_bound": None}),
    ("steinberg_p3_n1_k1", "steinberg", {"p": 3, "n": 1, "k": 1}),
    ("steinberg_p2_n2_k0", "steinberg", {"p": 2, "n": 2, "k": 0}),
    ("steinberg_p7_n1_k2", "steinberg", {"p": 7, "n": 1, "k": 2}),
    ("certify_p3_n2_k1", "certify", {"p": 3, "n": 2, "k": 1, "ops": [0, 1]}),
    ("certify_frobenius_p2_n2_k0", "certify", {"p": 2, "n": 2, "k": 0, "ops": [0], "frobenius": True}),
    ("module_p3_n1_k1", "module", {"p": 3, "n": 1, "k": 1, "frobenius": False}),
    ("annihilate_two_generators", "annihilate", {
        "ring": {"p": 2, "v_m": "v1", "generators": [{"name": "v1", "grading": 1},
                                                     {"name": "x1", "grading": 1}]},
        "presentation": {"generators": [{"name": "y1", "grading": 0}, {"name": "y2", "grading": 0}],
                         "relations": [{"generator": "y1", "r": 1, "u": {"y2": "x1"}},
                                       {"generator": "y2", "r": 1, "u": {"y1": "x1"}}]},
        "verify_bound": None,
    }),
]


def write_goldens(directory: str | Path) -> list[str]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    names = []
    for name, command, params in GOLDEN_SET:
        env, _ = run(RunConfig(command, params))
        (d / f"{name}.json").write_text(certificates.canonical_json(env))
        names.append(name)
    (d / "manifest.json").write_text(certificates.canonical_json({"goldens": names}))
    return names


def regression(directory: str | Path) -> tuple[dict, int]:
    d = Path(directory)
    if not d.is_dir():
        raise ParameterError(f"goldens directory {d} does not exist")
    files = sorted(f for f in d.glob("*.json") if f.name != "manifest.json")
    warnings = []
    manifest = d / "manifest.json"
    if manifest.exists():
        expected = json.loads(manifest.read_text()).get("goldens", [])
        present = {f.stem for f in files}
        warnings += [f"missing golden {name}" for name in expected if name not in present]
    if not files:
        warnings.append("no golden certificates found; vacuous pass")
    entries = []
    failed = 0
    for f in files:
        stored_text = f.read_text()
        stored = json.loads(stored_text)
        env, _ = run(RunConfig(stored["command"], stored["params"]))
        fresh_text = certificates.canonical_json(env)
        same = fresh_text == stored_text
        entry = {"golden": f.name, "pass": same, "stored_hash": stored.get("determinism_hash"),
                 "fresh_hash": env["determinism_hash"]}
        if not same:
            failed += 1
            entry["diff"] = certificates.json_diff(stored, env)
        entries.append(entry)
    summary = {"checked": len(entries), "failed": failed, "warnings": warnings, "results": entries}
    return summary, EXIT_FAILURE if failed else EXIT_OK


# ------------------------------------------------------------ argparse

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(message)


def _ops(text: str) -> list[int]:
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --ops value {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", "--json", dest="out", help="also write the envelope to this path")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="milnor-forge", description="Certificates for Steinberg summands of "
                     "Dickson coinvariant modules and Lazard-ring annihilators.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def pnk(sp, k=True):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--n", type=int, required=True)
        if k:
            sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("dickson", parents=[common], help="Dickson invariants and checks")
    pnk(sp, k=False)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--koszul-bound", type=int)

    sp = sub.add_parser("steinberg", parents=[common], help="Steinberg idempotent e_k")
    pnk(sp)
    sp.add_argument("--allow-untwisted", action="store_true", help="allow k = 0 for odd p")

    sp = sub.add_parser("module", parents=[common], help="the summand L e_k")
    pnk(sp)
    sp.add_argument("--frobenius", action="store_true")
    sp.add_argument("--dump", help="write the basis with Q-images to this path")

    sp = sub.add_parser("certify", parents=[common], help="freeness certificate")
    pnk(sp)
    sp.add_argument("--ops", type=_ops)
    sp.add_argument("--frobenius", action="store_true")

    sp = sub.add_parser("level", parents=[common], help="level certificate")
    pnk(sp)
    sp.add_argument("--r-max", type=int)

    sp = sub.add_parser("annihilate", parents=[common], help="Lazard-ring annihilator")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--presentation", required=True)
    sp.add_argument("--verify-bound", type=int)

    sp = sub.add_parser("regression", parents=[common], help="re-run golden certificates")
    sp.add_argument("goldens", nargs="?", default="goldens")
    sp.add_argument("--update", action="store_true", help="regenerate the golden set")
    return parser


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read {path}: {exc}") from exc


def config_from_args(args) -> RunConfig:
    c = args.command
    if c == "dickson":
        params = {"p": args.p, "n": args.n, "verify": args.verify, "koszul_bound": args.koszul_bound}
    elif c == "steinberg":
        params = {"p": args.p, "n": args.n, "k": args.k}
        if args.allow_untwisted:
            params["allow_untwisted"] = True
    elif c == "module":
        params = {"p": args.p, "n": args.n, "k": args.k, "frobenius": args.frobenius}
    elif c == "certify":
        params = {"p": args.p, "n": args.n, "k": args.k, "ops": args.ops, "frobenius": args.frobenius}
    elif c == "level":
        params = {"p": args.p, "n": args.n, "k": args.k, "r_max": args.r_max}
    elif c == "annihilate":
        params = {"ring": _load_json(args.ring), "presentation": _load_json(args.presentation),
                  "verify_bound": args.verify_bound}
    else:  # pragma: no cover
        raise UsageError(c)
    extras = {"dump": args.dump} if c == "module" and args.dump else {}
    return RunConfig(c, params, args.out, args.verbose, extras)


def _emit(obj: dict, out: str | None):
    text = certificates.canonical_json(obj)
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    positional = [a for a in argv if not a.startswith("-")]
    if argv and argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return EXIT_OK
    if not positional or positional[0] not in COMMANDS:
        sys.stderr.write(f"milnor-forge: unknown command; expected one of {', '.join(COMMANDS)}\n")
        return EXIT_USAGE
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                            format="%(levelname)s %(message)s")
        if args.command == "regression":
            if args.update:
                names = write_goldens(args.goldens)
                _emit({"written": names}, args.out)
                return EXIT_OK
            summary, code = regression(args.goldens)
            for w in summary["warnings"]:
                log.warning(w)
            _emit(summary, args.out)
            return code
        env, code = run(config_from_args(args))
        _emit(env, args.out)
        return code
    except SystemExit as exc:  # --help inside a subcommand
        return int(exc.code or 0)
    except (MilnorForgeError, ValueError, KeyError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
