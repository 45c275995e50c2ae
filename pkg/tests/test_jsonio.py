"""Round trips and validation of the tensor and certificate JSON formats."""

from fractions import Fraction as F

import pytest

from biquad import jsonio
from biquad.core import MonicParams, monic_to_tensor, tensors_equal, symmetrize
from biquad.classes import m_identity
from biquad.dominance import dd_sos_decompose
from biquad.monic import vertex_sos


def test_tensor_roundtrip(tmp_path):
    t = monic_to_tensor(MonicParams(3, 2, F(-1, 3), F(2, 5), F(1, 7)))
    path = tmp_path / "t.json"
    jsonio.save_tensor(t, path)
    back = jsonio.load_tensor(path)
    assert tensors_equal(symmetrize(back), t)


def test_sparse_entries_are_one_based_and_omit_zeros(tmp_path):
    t = m_identity(2, 2)
    d = jsonio.tensor_to_dict(t)
    assert d["m"] == 2 and d["n"] == 2
    assert len(d["entries"]) == 4
    assert {"i": 1, "j": 1, "k": 1, "l": 1, "v": "1"} in d["entries"]


def test_certificate_roundtrip(tmp_path):
    cert = vertex_sos(2, 3, 2)
    path = tmp_path / "c.json"
    jsonio.save_certificate(cert, path)
    back = jsonio.load_certificate(path)
    assert len(back.terms) == len(cert.terms)
    assert all(wb == wa for (wa, _), (wb, _) in zip(cert.terms, back.terms))
    from biquad.core import expand_certificate

    assert tensors_equal(expand_certificate(back), expand_certificate(cert))


def test_rational_strings():
    assert jsonio.rational_to_str(F(-1, 3)) == "-1/3"
    assert jsonio.rational_to_str(F(4)) == "4"
    assert jsonio.parse_rational("7/2") == F(7, 2)
    assert jsonio.parse_rational("-5") == F(-5)


def test_duplicate_entries_rejected():
    d = {"m": 1, "n": 1, "entries": [
        {"i": 1, "j": 1, "k": 1, "l": 1, "v": "1"},
        {"i": 1, "j": 1, "k": 1, "l": 1, "v": "2"},
    ]}
    with pytest.raises(ValueError):
        jsonio.tensor_from_dict(d)


def test_out_of_range_index_rejected():
    d = {"m": 1, "n": 1, "entries": [{"i": 2, "j": 1, "k": 1, "l": 1, "v": "1"}]}
    with pytest.raises(ValueError):
        jsonio.tensor_from_dict(d)


def test_bad_dimensions_rejected():
    with pytest.raises(ValueError):
        jsonio.tensor_from_dict({"m": 0, "n": 1, "entries": []})


def test_canonical_dump_is_stable():
    cert = dd_sos_decompose(m_identity(2, 2))
    a = jsonio.dumps_canonical(jsonio.certificate_to_dict(cert))
    b = jsonio.dumps_canonical(jsonio.certificate_to_dict(cert))
    assert a == b
    assert a.endswith("\n")
