"""Command line: build map families, certify, decompose, search, verify.

Exit codes: 0 success (certified / converged / violation found), 2 invalid
input, 3 criterion not satisfied, 4 criterion inapplicable, 5 no result
within budget.  All artifacts are UTF-8 JSON; ``--reproducible`` drops the
timestamp so identical seeds give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import criterion, io, linalg, maps, optim
from ._backend import backend_name
from .criterion import Verdict
from .linalg import BipartiteShape, ToleranceConfig

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_SATISFIED = 3
EXIT_INAPPLICABLE = 4
EXIT_NO_RESULT = 5

_VERDICT_EXIT = {
    Verdict.CERTIFIED_INDECOMPOSABLE: EXIT_OK,
    Verdict.CRITERION_NOT_SATISFIED: EXIT_NOT_SATISFIED,
    Verdict.INAPPLICABLE: EXIT_INAPPLICABLE,
}


def _parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",") if x.strip() != ""])
    except ValueError as exc:
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--seed", type=int, default=None,
                    help="RNG seed (default: POSMAPS_SEED or 0)")
    sp.add_argument("--reproducible", action="store_true",
                    help="omit the timestamp so outputs are byte-stable")
    sp.add_argument("--tol-hermiticity", type=float, default=None)
    sp.add_argument("--tol-psd", type=float, default=None)
    sp.add_argument("--tol-equality", type=float, default=None)


def _seed_of(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("POSMAPS_SEED", "0"))


def _tol_of(args) -> ToleranceConfig:
    base = ToleranceConfig()
    return ToleranceConfig(
        hermiticity=args.tol_hermiticity if args.tol_hermiticity is not None else base.hermiticity,
        psd_cutoff=args.tol_psd if args.tol_psd is not None else base.psd_cutoff,
        equality=args.tol_equality if args.tol_equality is not None else base.equality,
    )


def _build_family(args, rng: np.random.Generator) -> maps.KrausPairMap:
    fam = args.family
    if fam == "reduction":
        if args.dim is None:
            raise ValueError("--dim is required for the reduction family")
        return maps.reduction_map(args.dim)
    if fam == "extended-reduction":
        if args.dim is None:
            raise ValueError("--dim is required for the extended-reduction family")
        phases = _parse_floats(args.phases) if args.phases else None
        orth = linalg.random_orthogonal(args.dim, rng) if args.random_orthogonal else None
        u = maps.antisymmetric_unitary(args.dim, phases=phases, orthogonal=orth)
        return maps.extended_reduction_map(args.dim, u)
    if fam == "piani":
        if args.d1 is None or args.d2 is None:
            raise ValueError("--d1 and --d2 are required for the piani family")
        lam1 = _parse_floats(args.lambda1) if args.lambda1 else np.ones(args.d1 ** 2)
        if args.lambda2:
            lam2 = _parse_floats(args.lambda2)
        else:
            lam2 = np.ones(args.d2 ** 2)
            lam2[-1] = -1.0
        return maps.piani_map(args.d1, args.d2, lam1, lam2)
    if fam == "choi":
        return maps.choi_map()
    raise ValueError(f"unknown family {fam!r}")


def cmd_build(args) -> int:
    rng = linalg.rng_from_seed(_seed_of(args))
    m = _build_family(args, rng)
    w = maps.jamiolkowski_witness(m)
    io.write_artifact(args.out_map, io.map_to_obj(m), args.reproducible)
    io.write_artifact(args.out_witness, io.witness_to_obj(w), args.reproducible)
    spectrum, _ = linalg.hermitian_eig(w.op)
    negatives = int(np.count_nonzero(spectrum < -_tol_of(args).equality))
    print(f"family={args.family} dim={m.dim_in} witness_dim={w.shape.dim}")
    print(f"witness spectrum: min={spectrum[-1]:.6g} max={spectrum[0]:.6g} "
          f"negative_count={negatives}")
    print(f"wrote {args.out_map} and {args.out_witness}")
    return EXIT_OK


def cmd_certify(args) -> int:
    m = io.map_from_obj(io.read_artifact(args.map))
    cert = criterion.certify(m, trials=args.trials, seed=_seed_of(args),
                             tol=_tol_of(args), map_id=str(args.map))
    io.write_artifact(args.out, io.certificate_to_obj(cert), args.reproducible)
    print(f"verdict={cert.verdict.value} min_l_eigenvalue={cert.min_l_eigenvalue:.6g} "
          f"failures={cert.sampled_q_failures}/{cert.sampled_q_trials}")
    return _VERDICT_EXIT[cert.verdict]


def cmd_decompose(args) -> int:
    w = io.witness_from_obj(io.read_artifact(args.witness))
    rep = optim.decompose_witness(w, max_iter=args.max_iter, tol=args.tol)
    io.write_artifact(args.out, io.decomposition_report_to_obj(rep), args.reproducible)
    print(f"residual={rep.residual:.6g} iterations={rep.iterations} "
          f"converged={rep.converged}")
    return EXIT_OK if rep.converged else EXIT_NO_RESULT


def cmd_search(args) -> int:
    w = io.witness_from_obj(io.read_artifact(args.witness))
    rep = optim.ppt_violation_search(
        w, restarts=args.restarts, max_iter=args.max_iter, step=args.step,
        seed=_seed_of(args), dykstra_cycles=args.dykstra_cycles, tol=_tol_of(args))
    io.write_artifact(args.out, io.violation_report_to_obj(rep), args.reproducible)
    print(f"witness_value={rep.witness_value:.6g} certified={rep.certified} "
          f"min_state_eig={rep.min_state_eig:.3g} min_ppt_eig={rep.min_ppt_eig:.3g}")
    return EXIT_OK if rep.certified else EXIT_NO_RESULT


def cmd_verify_state(args) -> int:
    m = io.map_from_obj(io.read_artifact(args.map))
    rho = io.matrix_from_obj(io.read_artifact(args.state))
    shape = BipartiteShape(args.dim_a, args.dim_b)
    tol = _tol_of(args)
    value = optim.verify_detection(m, rho, shape, tol=tol)
    payload = {"min_eigenvalue": value, "detected": bool(value < -tol.equality),
               "dim_a": args.dim_a, "dim_b": args.dim_b}
    if args.out:
        io.write_artifact(args.out, payload, args.reproducible)
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_bases_gellmann(args) -> int:
    basis = maps.gellmann_basis(args.dim)
    payload = {"dim": basis.dim,
               "elements": [io.matrix_to_obj(e) for e in basis.elements]}
    io.write_artifact(args.out, payload, args.reproducible)
    print(f"wrote {len(basis.elements)} orthonormal Hermitian elements to {args.out}")
    return EXIT_OK


def cmd_unitary_antisym(args) -> int:
    rng = linalg.rng_from_seed(_seed_of(args))
    phases = _parse_floats(args.phases) if args.phases else None
    orth = linalg.random_orthogonal(args.dim, rng) if args.random_orthogonal else None
    u = maps.antisymmetric_unitary(args.dim, phases=phases, orthogonal=orth)
    io.write_artifact(args.out, io.matrix_to_obj(u), args.reproducible)
    print(f"wrote antisymmetric unitary of dimension {args.dim} to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posmaps",
        description="Positive-map families, witnesses and bound-entanglement search "
                    f"(eigensolver backend: {backend_name()})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    maps_p = sub.add_parser("maps", help="map-family commands")
    maps_sub = maps_p.add_subparsers(dest="subcommand", required=True)
    build = maps_sub.add_parser("build", help="build a map family and its witness")
    build.add_argument("--family", required=True,
                       choices=["reduction", "extended-reduction", "piani", "choi"])
    build.add_argument("--dim", type=int, default=None)
    build.add_argument("--d1", type=int, default=None)
    build.add_argument("--d2", type=int, default=None)
    build.add_argument("--phases", default=None,
                       help="comma-separated block phases for the antisymmetric unitary")
    build.add_argument("--lambda1", default=None, help="comma-separated weights, side 1")
    build.add_argument("--lambda2", default=None, help="comma-separated weights, side 2")
    build.add_argument("--random-orthogonal", action="store_true",
                       help="conjugate the block unitary by a seeded random orthogonal")
    build.add_argument("--out-map", default="map.json")
    build.add_argument("--out-witness", default="witness.json")
    _add_common(build)
    build.set_defaults(func=cmd_build)

    cert = sub.add_parser("certify", help="run the indecomposability certificate")
    cert.add_argument("--map", required=True)
    cert.add_argument("--trials", type=int, default=1000)
    cert.add_argument("--out", default="certificate.json")
    _add_common(cert)
    cert.set_defaults(func=cmd_certify)

    dec = sub.add_parser("decompose", help="split a witness into PSD + PSD^{T_B}")
    dec.add_argument("--witness", required=True)
    dec.add_argument("--max-iter", type=int, default=10000)
    dec.add_argument("--tol", type=float, default=1e-9)
    dec.add_argument("--out", default="decomposition.json")
    _add_common(dec)
    dec.set_defaults(func=cmd_decompose)

    sea = sub.add_parser("search", help="search for a PPT state violating a witness")
    sea.add_argument("--witness", required=True)
    sea.add_argument("--restarts", type=int, default=8)
    sea.add_argument("--max-iter", type=int, default=300)
    sea.add_argument("--step", type=float, default=None)
    sea.add_argument("--dykstra-cycles", type=int, default=20)
    sea.add_argument("--out", default="violation.json")
    _add_common(sea)
    sea.set_defaults(func=cmd_search)

    ver = sub.add_parser("verify-state", help="min eigenvalue of (I (x) map)(rho)")
    ver.add_argument("--map", required=True)
    ver.add_argument("--state", required=True)
    ver.add_argument("--dim-a", type=int, required=True)
    ver.add_argument("--dim-b", type=int, required=True)
    ver.add_argument("--out", default=None)
    _add_common(ver)
    ver.set_defaults(func=cmd_verify_state)

    bases = sub.add_parser("bases", help="operator-basis generators")
    bases_sub = bases.add_subparsers(dest="subcommand", required=True)
    gell = bases_sub.add_parser("gellmann", help="orthonormal Hermitian basis")
    gell.add_argument("--dim", type=int, required=True)
    gell.add_argument("--out", default="basis.json")
    _add_common(gell)
    gell.set_defaults(func=cmd_bases_gellmann)

    unit = sub.add_parser("unitary", help="special unitary factories")
    unit_sub = unit.add_subparsers(dest="subcommand", required=True)
    anti = unit_sub.add_parser("antisym", help="antisymmetric unitary (even dim only)")
    anti.add_argument("--dim", type=int, required=True)
    anti.add_argument("--phases", default=None)
    anti.add_argument("--random-orthogonal", action="store_true")
    anti.add_argument("--out", default="unitary.json")
    _add_common(anti)
    anti.set_defaults(func=cmd_unitary_antisym)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
