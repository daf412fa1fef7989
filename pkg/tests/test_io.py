import json

import numpy as np
import pytest

from luinv import io, linalg
from luinv.basis import gellmann_basis
from luinv.bloch import decompose
from luinv.harness import make_rng, paper_basis_qutrit, paper_fixture, paper_triple, random_state, random_unitary
from luinv.scalarfield import I, ComplexScalar, exact, sqrt


def roundtrip(data):
    return json.loads(io.dumps(data))


@pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3)])
def test_density_round_trip(d1, d2):
    rho = random_state(make_rng(4), d1, d2)
    again = io.density_from_json(roundtrip(io.density_to_json(rho)))
    assert again.is_exact and again.equals(rho)


def test_example_state_round_trip():
    rho = paper_fixture("1/2").rho
    assert io.density_from_json(roundtrip(io.density_to_json(rho))).equals(rho)


def test_float_density_round_trip():
    rho = random_state(make_rng(4), 2, 2).to_float()
    again = io.density_from_json(roundtrip(io.density_to_json(rho)))
    assert not again.is_exact
    assert np.allclose(again.entries, rho.entries)


def test_triple_round_trip():
    t = paper_triple("1/3")
    data = roundtrip(io.triple_to_json(t))
    assert data["m"] == 3 and data["n"] == 8
    assert data["v"][7] == "1/6*sqrt(3)"
    assert io.triple_from_json(data).equals(t)


def test_triple_with_numbers_is_float():
    data = io.triple_to_json(paper_triple("1/2"))
    data["u"][0] = 0.5
    t = io.triple_from_json(data)
    assert not t.is_exact


def test_unitary_round_trip():
    U = random_unitary(make_rng(8), 3)
    again = io.unitary_from_json(roundtrip(io.unitary_to_json(U)))
    assert linalg.arrays_equal(again.entries, U.entries)


def test_entry_format():
    data = io.density_to_json(paper_fixture(1).rho)
    e = data["rows"][0][0]
    assert set(e) == {"re", "im"}
    assert isinstance(e["re"], str)


def test_complex_text():
    z = ComplexScalar(exact("1/2"), -sqrt(2))
    assert io.complex_to_text(z) == "1/2 - sqrt(2)*i"
    assert io.complex_from_text("1/2 - sqrt(2)*i") == z
    assert io.complex_from_text("i") == I
    assert io.complex_from_text("3/4") == exact("3/4")
    with pytest.raises(io.FormatError):
        io.complex_from_text("i^2")


@pytest.mark.parametrize("basis", [gellmann_basis(2), paper_basis_qutrit()])
def test_basis_round_trip(basis):
    again = io.basis_from_json(roundtrip(io.basis_to_json(basis)))
    assert again.labels == basis.labels
    assert all(linalg.arrays_equal(a, b) for a, b in zip(again, basis))


def test_basis_rejects_non_orthonormal():
    data = io.basis_to_json(gellmann_basis(2))
    data["elements"][1] = data["elements"][0]
    with pytest.raises(io.FormatError):
        io.basis_from_json(data)


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"d1": 2, "d2": 2},
        {"d1": 2, "d2": 2, "rows": [[{"re": "1"}]]},
        {"d1": 0, "d2": 2, "rows": [[{"re": "1"}]]},
        {"d1": 2, "d2": 1, "rows": [[{"re": "1/2"}], [{"re": "1/2"}, {"re": "0"}]]},
        {"d1": 1, "d2": 1, "rows": [[{"re": "1/0"}]]},
        {"d1": 1, "d2": 1, "rows": [[{"re": True}]]},
        {"d1": 1, "d2": 1, "rows": [[{"re": "1", "junk": "0"}]]},
    ],
)
def test_density_format_errors(data):
    with pytest.raises(io.FormatError):
        io.density_from_json(data)


def test_triple_format_errors():
    good = io.triple_to_json(paper_triple("1/2"))
    for key, value in (("u", [0, 0]), ("W", [[0] * 8]), ("m", -1), ("v", "x")):
        bad = dict(good)
        bad[key] = value
        with pytest.raises(io.FormatError):
            io.triple_from_json(bad)
    with pytest.raises(io.FormatError):
        io.triple_from_json({"u": []})


def test_read_json_errors(tmp_path):
    with pytest.raises(io.FormatError, match="cannot read"):
        io.read_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(io.FormatError, match="malformed"):
        io.read_json(bad)


def test_load_triple_accepts_state_or_triple(tmp_path):
    f = paper_fixture("1/2")
    io.write_json(tmp_path / "rho.json", io.density_to_json(f.rho))
    io.write_json(tmp_path / "t.json", io.triple_to_json(f.triple))
    assert io.load_triple(tmp_path / "t.json").equals(f.triple)
    assert io.load_triple(tmp_path / "rho.json").equals(decompose(f.rho))


def test_dumps_is_stable():
    data = io.triple_to_json(paper_triple("1/2"))
    assert io.dumps(data) == io.dumps(roundtrip(data))
    assert io.dumps(data).endswith("}\n")
