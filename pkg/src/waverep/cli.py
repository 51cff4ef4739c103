"""Command-line front end: file I/O, report assembly, fixture management.

Every subcommand emits one JSON run report with stable keys

    {"command", "inputs", "verdicts", "residuals", "artifacts", "elapsed"}

to stdout, or to --out when given.  Exit codes: 0 when every verdict is
true, 1 when a mathematical check failed, 2 for input or usage errors.
Angle-valued flags accept "8pi"-style literals (a float multiple of pi) as
well as plain floats.  Randomized commands take --seed (default 0), echoed
in the report.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import cascade as cas
from . import dilation as dil
from . import fixtures as fix
from . import index as idx
from . import permutative as perm
from . import serialize as ser
from . import wold as wld
from .filterbank import check_bank, complete_filterbank, unitarity_residual, VERIFY_TOL
from .laurent import CircleGrid, GridFunction, LaurentPoly


class InputError(Exception):
    """Bad file, malformed JSON, unknown fixture: exit code 2."""


def parse_angle(text: str) -> float:
    """Parse '8pi', '1.5pi', 'pi', or a plain float, into radians."""
    s = str(text).strip().lower().replace(" ", "")
    if s.endswith("pi"):
        head = s[:-2]
        if head in ("", "+"):
            return math.pi
        if head == "-":
            return -math.pi
        try:
            return float(head) * math.pi
        except ValueError as e:
            raise InputError(f"cannot parse angle {text!r}") from e
    try:
        return float(s)
    except ValueError as e:
        raise InputError(f"cannot parse angle {text!r}") from e


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as e:
        raise InputError(f"no such file: {path}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {path}: {e}") from e


def _load_bank(args) -> "FilterBank":
    if getattr(args, "fixture", None):
        try:
            return fix.fixture_bank(args.fixture)
        except KeyError as e:
            raise InputError(str(e)) from e
    if getattr(args, "bank", None):
        return ser.bank_from_dict(_load_json(args.bank))
    raise InputError("provide --bank FILE or --fixture NAME")


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.complexfloating):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit_csv(path: str, samples: cas.LineSamples) -> None:
    with open(path, "w") as fh:
        fh.write("t,re,im,abs\n")
        for t, v in zip(samples.t_values, samples.values):
            fh.write(f"{float(t)!r},{float(v.real)!r},{float(v.imag)!r},{float(abs(v))!r}\n")


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (verdicts, residuals, info, artifacts)


def cmd_check(args):
    bank = _load_bank(args)
    grid = CircleGrid(args.grid_size) if args.grid_size else None
    rep = check_bank(bank, grid)
    verdicts = {"unitary": rep.verified}
    residuals = {
        "unitarity": rep.unitarity_residual,
        **{f"qmf_{i}": r for i, r in enumerate(rep.qmf_residuals)},
    }
    info = {
        "scale": bank.scale,
        "kind": bank.kind,
        "check_report": {
            "qmf_residuals": rep.qmf_residuals,
            "pairwise_residuals": rep.pairwise_residuals,
            "unitarity_residual": rep.unitarity_residual,
            "lowpass_ok": rep.lowpass_ok,
            "grid_size": rep.grid_size,
            "worst_point": rep.worst_point,
        },
    }
    return verdicts, residuals, info, []


def cmd_complete(args):
    d = _load_json(args.lowpass)
    lowpass = ser.filter_from_dict(d)
    bank = complete_filterbank(lowpass, args.scale)
    res = unitarity_residual(bank)
    artifacts = []
    if args.out_bank:
        with open(args.out_bank, "w") as fh:
            json.dump(ser.bank_to_dict(bank), fh, indent=2, sort_keys=True)
        artifacts.append(args.out_bank)
    info = {"kind": bank.kind, "scale": bank.scale}
    if bank.kind == "grid" and not isinstance(lowpass, GridFunction):
        info["note"] = "polynomial completion above scale 2 falls back to grid samples"
    return {"unitary": res <= VERIFY_TOL}, {"unitarity": res}, info, artifacts


def cmd_cascade(args):
    bank = _load_bank(args)
    t_max = parse_angle(args.t_max)
    phi = cas.scaling_hat(bank.filters[0], bank.scale, t_max=t_max,
                          samples=args.samples, depth=args.depth)
    target = 1.0 / math.sqrt(2.0 * math.pi)
    zero_gap = abs(phi.value_at_zero() - target)
    verdicts = {"value_at_zero": zero_gap <= 1e-10}
    residuals = {"value_at_zero_gap": zero_gap}
    info = {"depth": args.depth, "t_max": t_max, "samples": len(phi.t_values),
            "approximate": phi.approximate}
    artifacts = []
    target_samples = phi
    if args.mother:
        target_samples = cas.mother_hat(bank, args.mother, phi)
        info["mother_index"] = args.mother
    if args.per:
        spacing = math.pi / 32.0
        wide_t = (2 * args.per + 1) * math.pi
        n = 2 * int(round(wide_t / spacing)) + 1
        wide = cas.scaling_hat(bank.filters[0], bank.scale, t_max=wide_t,
                               samples=n, depth=args.depth)
        if args.mother:
            wide = cas.mother_hat(bank, args.mother, wide)
        pr = cas.per_residual(wide, args.per)
        verdicts["periodization"] = pr.residual <= args.per_tol
        residuals["per_residual"] = pr.residual
        residuals["per_tail_estimate"] = pr.tail_estimate
    if args.csv:
        emit_csv(args.csv, target_samples)
        artifacts.append(args.csv)
    return verdicts, residuals, info, artifacts


def cmd_wold(args):
    if args.filter:
        filt = ser.filter_from_dict(_load_json(args.filter))
        scale = args.scale
        if not scale:
            raise InputError("--filter needs --scale")
        filters = [(None, filt)]
    else:
        bank = _load_bank(args)
        scale = bank.scale
        if args.shift_check:
            ok = wld.wavelet_shift_check(bank)
            return {"all_shifts": ok}, {}, {"scale": scale}, []
        filters = [(args.index, bank.filters[args.index])]
    i, filt = filters[0]
    rep = wld.wold_analysis(filt, scale)
    verdicts = {"isometry": rep.isometry_residual <= 1e-8,
                "consistent": rep.anomaly is None}
    residuals = {"unimodularity": rep.unimodularity_residual,
                 "isometry": rep.isometry_residual}
    if rep.cocycle_residual is not None:
        residuals["cocycle"] = rep.cocycle_residual
    info = {"unitary_dim": rep.unitary_dim, "grid_sizes": list(rep.grid_sizes),
            "grid_screen": rep.grid_screen, "filter_index": i}
    if rep.eigenvalue is not None:
        info["eigenvalue"] = rep.eigenvalue
    if isinstance(rep.eigenfunction, LaurentPoly):
        info["eigenfunction"] = ser.poly_to_dict(rep.eigenfunction)
    elif isinstance(rep.eigenfunction, GridFunction):
        info["eigenfunction"] = ser.gridfunction_to_dict(rep.eigenfunction)
    if rep.anomaly:
        info["anomaly"] = rep.anomaly
    return verdicts, residuals, info, []


def cmd_index(args):
    bank = _load_bank(args)
    if bank.scale != 2 or bank.kind != "poly":
        raise InputError("the index needs a polynomial bank at scale 2")
    rep = idx.spectral_solutions(bank.filters[0], bank.filters[1], window=args.window)
    worst = max((s.residual for s in rep.solutions), default=0.0)
    verdicts = {"index_in_range": rep.index <= 2 and rep.anomaly is None}
    residuals = {"max_solution_residual": worst, "pairing_constancy": rep.pairing_residual}
    info = {
        "index": rep.index,
        "window": rep.window,
        "eigenvalues": [s.eigenvalue for s in rep.solutions],
        "solutions": [ser.poly_to_dict(s.eigenvector) for s in rep.solutions],
        "pairing_matrix": rep.pairing_matrix,
        "haar_component": rep.index >= 1,
    }
    if rep.anomaly:
        info["anomaly"] = rep.anomaly
    return verdicts, residuals, info, []


def cmd_decompose(args):
    try:
        digits = [int(x) for x in args.digits.split(",") if x.strip()]
    except ValueError as e:
        raise InputError(f"cannot parse digits {args.digits!r}") from e
    rep = perm.decompose_monomial(perm.MonomialRep(args.scale, digits), args.window)
    info = {
        "cycles": [list(c) for c in rep.cycles],
        "n_components": len(rep.components),
        "window": list(rep.window),
        "components": [
            {"cycle": list(c.cycle), "members_in_window": c.members,
             "description": c.description}
            for c in rep.components
        ],
    }
    return {"partition": True}, {}, info, []


def cmd_equiv(args):
    u1 = ser.gridfunction_from_dict(_load_json(args.u1))
    u2 = ser.gridfunction_from_dict(_load_json(args.u2))
    rep = perm.equivalence_check(perm.CharRep(args.scale, u1), perm.CharRep(args.scale, u2))
    verdicts = {"equivalent": rep.equivalent}
    residuals = {}
    info = {"grid_screen": rep.grid_screen}
    if rep.equivalent:
        residuals["intertwining"] = rep.intertwining_residual
        info["delta"] = ser.gridfunction_to_dict(rep.delta)
    return verdicts, residuals, info, []


def cmd_dilate(args):
    if args.family:
        fam = ser.family_from_dict(_load_json(args.family))
    else:
        rng = np.random.default_rng(args.seed)
        fam = dil.random_coisometry(args.ops, args.random_dim, rng)
    fock = dil.fock_embedding(fam, args.lam, args.fock_depth)
    gram = dil.gram_matrix(fam, args.gram_depth)
    purity = dil.purity_diagnostics(fam)
    words = [dil.Word(), dil.Word(up=(0,), down=(0,)),
             dil.Word(up=(0, min(1, fam.n_ops - 1)), down=(0,))]
    state_gap = max(abs(dil.scaled_word_value(fam, 1.0, w) - dil.state_value(fam, w))
                    for w in words)
    verdicts = {
        "gram_psd": gram.psd,
        "fock_defect_matches": abs(fock.isometry_defect - fock.predicted_defect) <= 1e-12,
        "intertwining": fock.intertwining_residual <= 1e-10,
        "state_consistent": state_gap <= 1e-12,
    }
    residuals = {
        "fock_defect": fock.isometry_defect,
        "fock_defect_predicted": fock.predicted_defect,
        "intertwining": fock.intertwining_residual,
        "gram_min_eigenvalue": gram.min_eigenvalue,
        "state_gap": state_gap,
    }
    info = {"dim": fam.dim, "ops": fam.n_ops, "fock_dim": fock.fock_dim,
            "fixed_dim": purity.fixed_dim, "pure": purity.pure,
            "tail_trivial": purity.tail_trivial, "gram_words": gram.n_words}
    return verdicts, residuals, info, []


def cmd_fixtures(args):
    try:
        bank = fix.fixture_bank(args.name)
    except KeyError as e:
        raise InputError(str(e)) from e
    res = unitarity_residual(bank)
    artifacts = []
    if args.out_bank:
        with open(args.out_bank, "w") as fh:
            json.dump(ser.bank_to_dict(bank), fh, indent=2, sort_keys=True)
        artifacts.append(args.out_bank)
    info = {"name": args.name, "scale": bank.scale, "kind": bank.kind}
    return {"verified": res <= VERIFY_TOL}, {"unitarity": res}, info, artifacts


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="waverep",
                                description="filter banks, circle isometries, and their diagnostics")
    p.add_argument("--out", help="write the JSON run report here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    sub = p.add_subparsers(dest="command", required=True)

    def add_bank_source(q):
        q.add_argument("--bank", help="bank JSON file")
        q.add_argument("--fixture", help="fixture name (haar2, db4, shannon, monomial(0,1), ...)")

    q = sub.add_parser("check", help="verify a filter bank")
    q.add_argument("bank", nargs="?", help="bank JSON file")
    q.add_argument("--fixture")
    q.add_argument("--grid-size", type=int, default=0)
    q.set_defaults(handler=cmd_check)

    q = sub.add_parser("complete", help="extend a low-pass filter to a unitary bank")
    q.add_argument("--lowpass", required=True, help="filter JSON file")
    q.add_argument("--scale", type=int, required=True)
    q.add_argument("--out-bank", help="write the completed bank JSON here")
    q.set_defaults(handler=cmd_complete)

    q = sub.add_parser("cascade", help="scaling/mother functions on the frequency side")
    add_bank_source(q)
    q.add_argument("--depth", type=int, default=cas.DEFAULT_DEPTH)
    q.add_argument("--t-max", default="8pi")
    q.add_argument("--samples", type=int, default=cas.DEFAULT_SAMPLES)
    q.add_argument("--mother", type=int, default=0, help="also compute this mother index")
    q.add_argument("--per", type=int, default=0, help="lattice size K for the periodization check")
    q.add_argument("--per-tol", type=float, default=1e-3)
    q.add_argument("--csv", help="write t,re,im,abs samples here")
    q.set_defaults(handler=cmd_cascade)

    q = sub.add_parser("wold", help="classify the unitary part of one filter's isometry")
    add_bank_source(q)
    q.add_argument("--filter", help="single filter JSON file")
    q.add_argument("--scale", type=int, default=0)
    q.add_argument("--index", type=int, default=0, help="filter index within the bank")
    q.add_argument("--shift-check", action="store_true",
                   help="check that every filter of the bank generates a shift")
    q.set_defaults(handler=cmd_wold)

    q = sub.add_parser("index", help="unit-circle eigenspaces of the combined isometry")
    add_bank_source(q)
    q.add_argument("--window", type=int, default=64)
    q.set_defaults(handler=cmd_index)

    q = sub.add_parser("decompose", help="orbit decomposition of a monomial family")
    q.add_argument("--scale", type=int, required=True)
    q.add_argument("--digits", required=True, help="comma-separated digits, e.g. 0,1")
    q.add_argument("--window", type=int, default=64)
    q.set_defaults(handler=cmd_decompose)

    q = sub.add_parser("equiv", help="cocycle equivalence of characteristic-function families")
    q.add_argument("--u1", required=True, help="grid-function JSON file")
    q.add_argument("--u2", required=True, help="grid-function JSON file")
    q.add_argument("--scale", type=int, required=True)
    q.set_defaults(handler=cmd_equiv)

    q = sub.add_parser("dilate", help="Fock-space dilation diagnostics of a coisometry family")
    q.add_argument("--family", help="family JSON file")
    q.add_argument("--random-dim", type=int, default=3, help="draw a random family of this dim")
    q.add_argument("--ops", type=int, default=2, help="number of operators for random families")
    q.add_argument("--lam", "--lambda", dest="lam", type=float, default=0.5)
    q.add_argument("--fock-depth", type=int, default=8)
    q.add_argument("--gram-depth", type=int, default=3)
    q.set_defaults(handler=cmd_dilate)

    q = sub.add_parser("fixtures", help="materialize a named fixture bank")
    q.add_argument("name")
    q.add_argument("--out-bank", help="write the bank JSON here")
    q.set_defaults(handler=cmd_fixtures)

    return p


def run(argv) -> int:
    parser = build_parser()
    start = time.monotonic()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        verdicts, residuals, info, artifacts = args.handler(args)
        code = 0 if all(verdicts.values()) else 1
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, IndexError, KeyError, TypeError) as e:
        verdicts, residuals, artifacts = {"ok": False}, {}, []
        info = {"error": str(e)}
        code = 1
    report = {
        "command": args.command,
        "inputs": {k: v for k, v in sorted(vars(args).items())
                   if k != "handler" and v is not None},
        "verdicts": _jsonable(verdicts),
        "residuals": _jsonable(residuals),
        "artifacts": artifacts,
        "elapsed": time.monotonic() - start,
        "info": _jsonable(info),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))
