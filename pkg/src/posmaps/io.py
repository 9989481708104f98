"""JSON artifacts: matrices, maps, witnesses, certificates and reports.

Matrix payloads are ``{"dim": d, "entries": [[re, im], ...]}`` with the
entries flattened row-major.  Writers sort keys and use the shortest float
repr, so a fixed seed reproduces byte-identical files (the ``generated_at``
stamp is omitted in reproducible mode).
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .criterion import (Antisymmetric, FamilyTag, Generic,
                        IndecomposabilityCertificate, PianiSum, Verdict)
from .linalg import BipartiteShape
from .maps import KrausPairMap, Witness
from .optim import DecompositionReport, ViolationSearchReport


def matrix_to_obj(a) -> dict:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    flat = arr.reshape(-1)
    return {"dim": int(arr.shape[0]),
            "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ValueError("matrix payload must have 'dim' and 'entries'")
    dim = int(obj["dim"])
    entries = obj["entries"]
    if dim < 1 or len(entries) != dim * dim:
        raise ValueError(f"matrix payload has {len(entries)} entries, expected {dim * dim}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return flat.reshape(dim, dim)


def map_to_obj(m: KrausPairMap) -> dict:
    return {
        "dim_in": m.dim_in,
        "dim_out": m.dim_out,
        "transposed_input": m.transposed_input,
        "kraus_basis": [matrix_to_obj(v) for v in m.kraus_basis],
        "coeff": matrix_to_obj(m.coeff),
    }


def map_from_obj(obj) -> KrausPairMap:
    try:
        return KrausPairMap(
            dim_in=int(obj["dim_in"]),
            dim_out=int(obj["dim_out"]),
            kraus_basis=tuple(matrix_from_obj(v) for v in obj["kraus_basis"]),
            coeff=matrix_from_obj(obj["coeff"]),
            transposed_input=bool(obj["transposed_input"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed map payload: {exc}") from exc


def witness_to_obj(w: Witness) -> dict:
    return {"dim_a": w.shape.dim_a, "dim_b": w.shape.dim_b,
            "op": matrix_to_obj(w.op)}


def witness_from_obj(obj) -> Witness:
    try:
        return Witness(op=matrix_from_obj(obj["op"]),
                       shape=BipartiteShape(int(obj["dim_a"]), int(obj["dim_b"])))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed witness payload: {exc}") from exc


def family_to_obj(tag: FamilyTag) -> dict:
    if isinstance(tag, Antisymmetric):
        return {"kind": "antisymmetric", "dim": tag.dim}
    if isinstance(tag, PianiSum):
        return {"kind": "piani-sum", "dim_a": tag.dim_a, "dim_b": tag.dim_b}
    return {"kind": "generic"}


def certificate_to_obj(cert: IndecomposabilityCertificate) -> dict:
    return {
        "map_id": cert.map_id,
        "verdict": cert.verdict.value,
        "min_l_eigenvalue": cert.min_l_eigenvalue,
        "l_spectrum": list(cert.l_spectrum),
        "family": family_to_obj(cert.family),
        "support_check": cert.support_check,
        "trials": cert.sampled_q_trials,
        "failures": cert.sampled_q_failures,
        "seed": cert.seed,
    }


def decomposition_report_to_obj(rep: DecompositionReport) -> dict:
    return {
        "residual": rep.residual,
        "iterations": rep.iterations,
        "converged": rep.converged,
        "p": matrix_to_obj(rep.p),
        "q": matrix_to_obj(rep.q),
        "witness": matrix_to_obj(rep.witness),
        "dim_a": rep.shape.dim_a,
        "dim_b": rep.shape.dim_b,
        "residual_history": list(rep.residual_history),
    }


def violation_report_to_obj(rep: ViolationSearchReport) -> dict:
    return {
        "witness_value": rep.witness_value,
        "min_state_eig": rep.min_state_eig,
        "min_ppt_eig": rep.min_ppt_eig,
        "trace_err": rep.trace_err,
        "iterations": rep.iterations,
        "certified": rep.certified,
        "state": matrix_to_obj(rep.state),
        "witness": matrix_to_obj(rep.witness),
        "dim_a": rep.shape.dim_a,
        "dim_b": rep.shape.dim_b,
        "restarts": rep.restarts,
        "seed": rep.seed,
    }


def write_artifact(path, payload: dict, reproducible: bool = False) -> None:
    out = dict(payload)
    if not reproducible:
        out["generated_at"] = datetime.now(timezone.utc).isoformat()
    Path(path).write_text(json.dumps(out, sort_keys=True, indent=2) + "\n",
                          encoding="utf-8")


def read_artifact(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return obj
