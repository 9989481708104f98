import json

import numpy as np
import pytest
from conftest import max_entry

from posmaps import criterion, io, linalg, maps, optim
from posmaps.linalg import BipartiteShape


def test_matrix_round_trip():
    rng = linalg.rng_from_seed(1)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    back = io.matrix_from_obj(io.matrix_to_obj(m))
    assert max_entry(back - m) == 0.0


def test_matrix_payload_validation():
    with pytest.raises(ValueError):
        io.matrix_from_obj({"dim": 2, "entries": [[1, 0]]})
    with pytest.raises(ValueError):
        io.matrix_from_obj([1, 2, 3])
    with pytest.raises(ValueError):
        io.matrix_to_obj(np.ones(3))


def test_map_round_trip():
    m = maps.extended_reduction_map(4, maps.antisymmetric_unitary(4))
    back = io.map_from_obj(io.map_to_obj(m))
    assert back.dim_in == m.dim_in
    assert back.transposed_input == m.transposed_input
    assert max_entry(back.coeff - m.coeff) == 0.0
    rng = linalg.rng_from_seed(2)
    rho = linalg.random_hermitian(4, rng)
    assert max_entry(maps.apply(back, rho) - maps.apply(m, rho)) == 0.0


def test_witness_round_trip():
    w = maps.jamiolkowski_witness(maps.choi_map())
    back = io.witness_from_obj(io.witness_to_obj(w))
    assert back.shape == w.shape
    assert max_entry(back.op - w.op) == 0.0


def test_malformed_map_payload():
    with pytest.raises(ValueError, match="malformed"):
        io.map_from_obj({"dim_in": 2})


def test_certificate_payload_fields():
    cert = criterion.certify(maps.reduction_map(3), trials=10, seed=0)
    obj = io.certificate_to_obj(cert)
    assert obj["verdict"] == "CriterionNotSatisfied"
    assert obj["family"] == {"kind": "antisymmetric", "dim": 3}
    assert len(obj["l_spectrum"]) == 3


def test_violation_report_revalidates_from_json(tmp_path):
    w = maps.jamiolkowski_witness(
        maps.extended_reduction_map(4, maps.antisymmetric_unitary(4)))
    rep = optim.ppt_violation_search(w, restarts=2, max_iter=100, seed=11)
    path = tmp_path / "violation.json"
    io.write_artifact(path, io.violation_report_to_obj(rep), reproducible=True)
    obj = json.loads(path.read_text())
    state = io.matrix_from_obj(obj["state"])
    witness = io.matrix_from_obj(obj["witness"])
    shape = BipartiteShape(obj["dim_a"], obj["dim_b"])
    assert abs(np.trace(witness @ state).real - obj["witness_value"]) <= 1e-12
    ws, _ = linalg.hermitian_eig(state)
    wp, _ = linalg.hermitian_eig(linalg.partial_transpose(state, shape))
    assert ws[-1] >= -1e-9 and wp[-1] >= -1e-9


def test_artifact_timestamp_toggle(tmp_path):
    path = tmp_path / "a.json"
    io.write_artifact(path, {"x": 1}, reproducible=True)
    assert "generated_at" not in json.loads(path.read_text())
    io.write_artifact(path, {"x": 1}, reproducible=False)
    assert "generated_at" in json.loads(path.read_text())


def test_read_artifact_rejects_non_object(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2, 3]")
    with pytest.raises(ValueError):
        io.read_artifact(path)
