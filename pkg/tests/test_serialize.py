import numpy as np
import pytest

from sicprob.dynamics import Generator, GkslSpec, lgen_from_gksl
from sicprob.measures import DeltaQuantReport, MarkovReport
from sicprob.serialize import (
    decode_complex_matrix,
    dump_counts,
    dump_density,
    dump_fiducial,
    dump_generator,
    dump_gksl,
    dump_kraus_channel,
    dump_markov_report,
    dump_prob_vector,
    dump_pstoch,
    dump_quant_report,
    dump_sic,
    encode_complex_matrix,
    load_counts,
    load_density,
    load_fiducial,
    load_generator,
    load_gksl,
    load_kraus_channel,
    load_prob_vector,
    load_pstoch,
)
from sicprob.sic import builtin_qubit
from sicprob.tomography import CountsRecord

from fixtures import random_density, random_kraus_channel


def test_complex_matrix_codec():
    rng = np.random.default_rng(121)
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    enc = encode_complex_matrix(m)
    assert isinstance(enc, list)
    assert np.abs(decode_complex_matrix(enc, 3, 3, "m") - m).max() == 0.0


def test_density_round_trip():
    rng = np.random.default_rng(122)
    rho = random_density(rng, 2)
    obj = dump_density(rho, 2)
    d, back = load_density(obj)
    assert d == 2
    assert np.abs(back - rho).max() < 1e-15


def test_prob_vector_round_trip():
    p = np.array([0.3, 0.3, 0.2, 0.2])
    d, back = load_prob_vector(dump_prob_vector(p, 2))
    assert d == 2
    assert np.abs(back - p).max() == 0.0


def test_kraus_round_trip():
    rng = np.random.default_rng(123)
    kraus = random_kraus_channel(rng, 2, 3)
    d_in, d_out, back = load_kraus_channel(dump_kraus_channel(kraus, 2, 2))
    assert (d_in, d_out) == (2, 2)
    assert len(back) == 3
    for a, b in zip(kraus, back):
        assert np.abs(a - b).max() < 1e-15


def test_pstoch_round_trip():
    rng = np.random.default_rng(124)
    s = rng.standard_normal((4, 4))
    d_in, d_out, back = load_pstoch(dump_pstoch(s, 2, 2))
    assert (d_in, d_out) == (2, 2)
    assert np.abs(back - s).max() == 0.0


def test_gksl_round_trip():
    h = np.array([[0.5, 0.1 - 0.2j], [0.1 + 0.2j, -0.5]])
    v = np.array([[0.0, 0.3], [0.0, 0.0]], dtype=complex)
    spec = GkslSpec(2, h, (v,))
    back = load_gksl(dump_gksl(spec))
    assert back.dim == 2
    assert np.abs(back.hamiltonian - h).max() < 1e-15
    assert len(back.noise_ops) == 1
    assert np.abs(back.noise_ops[0] - v).max() < 1e-15


def test_generator_round_trip_with_parts():
    s = builtin_qubit()
    h = np.diag([0.5, -0.5]).astype(complex)
    v = 0.3 * np.array([[0, 1], [0, 0]], dtype=complex)
    g = lgen_from_gksl(GkslSpec(2, h, (v,)), s)
    back = load_generator(dump_generator(g))
    assert np.abs(back.matrix - g.matrix).max() == 0.0
    assert np.abs(back.h_part - g.h_part).max() == 0.0
    assert np.abs(back.d_part - g.d_part).max() == 0.0


def test_generator_round_trip_without_parts():
    g = Generator(dim=2, matrix=np.eye(4))
    back = load_generator(dump_generator(g))
    assert back.h_part is None
    assert back.d_part is None


def test_counts_round_trip():
    c = CountsRecord(dim=2, shots=100, counts=np.array([[25, 25, 25, 25]] * 4))
    back = load_counts(dump_counts(c))
    assert back.dim == 2
    assert back.shots == 100
    assert np.array_equal(back.counts, c.counts)


def test_fiducial_round_trip():
    from sicprob.sic import Fiducial

    amp = np.array([0.0, 1 / np.sqrt(2), -1 / np.sqrt(2)], dtype=complex)
    obj = dump_fiducial(Fiducial(3, amp))
    fid = load_fiducial(obj)
    assert fid.dim == 3
    assert np.abs(fid.amplitudes - amp).max() == 0.0


def test_sic_export_contains_projectors():
    s = builtin_qubit()
    obj = dump_sic(s)
    assert obj["dim"] == 2
    assert len(obj["projectors"]) == 4


def test_report_dumps():
    q = dump_quant_report(
        DeltaQuantReport(value=0.5, lam=np.zeros(3), restarts_agreeing=4)
    )
    assert q["delta_quant"] == 0.5
    assert q["argmax_lambda"] == [0.0, 0.0, 0.0]
    assert q["restarts_agreeing"] == 4
    m = dump_markov_report(
        MarkovReport(delta_nmark=0.01, s_mark=np.eye(4), log_residual=1e-9)
    )
    assert m["delta_nmark"] == 0.01
    assert len(m["s_mark"]) == 4


def test_schema_errors_name_the_missing_key():
    with pytest.raises(ValueError) as exc:
        load_density({"dim": 2})
    assert "matrix" in str(exc.value)
    with pytest.raises(ValueError) as exc:
        load_prob_vector({"dim": 2})
    assert "probs" in str(exc.value)
    with pytest.raises(ValueError) as exc:
        load_counts({"dim": 2, "shots": 10})
    assert "counts" in str(exc.value)


def test_schema_errors_on_malformed_values():
    with pytest.raises(ValueError):
        load_density({"dim": 2, "matrix": [[1.0, 0.0]]})  # wrong shape
    with pytest.raises(ValueError):
        load_counts(
            {"dim": 2, "shots": -5, "counts": [[1, 1, 1, 1]] * 4}
        )  # bad shots
    with pytest.raises(ValueError):
        load_pstoch({"dim_in": 2, "dim_out": 2, "matrix": "nope"})
