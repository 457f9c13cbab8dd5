"""JSON codecs for every object that crosses the package boundary.

Complex matrices are stored as row-major flat lists of ``[re, im]`` pairs;
real matrices as nested row lists. Decoders validate shape and type and
raise ValueError with the offending key, leaving physical validation to
the constructors they feed.
"""

from __future__ import annotations

import numpy as np

from .dynamics import Generator, GkslSpec
from .measures import DeltaQuantReport, MarkovReport
from .sic import Fiducial, SicPovm
from .tomography import CountsRecord

__all__ = [
    "encode_complex_matrix",
    "decode_complex_matrix",
    "dump_fiducial",
    "load_fiducial",
    "dump_sic",
    "dump_prob_vector",
    "load_prob_vector",
    "dump_density",
    "load_density",
    "dump_kraus_channel",
    "load_kraus_channel",
    "dump_pstoch",
    "load_pstoch",
    "dump_gksl",
    "load_gksl",
    "dump_generator",
    "load_generator",
    "dump_counts",
    "load_counts",
    "dump_quant_report",
    "dump_markov_report",
]


def encode_complex_matrix(m: np.ndarray) -> list[list[float]]:
    m = np.asarray(m, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in m.reshape(-1)]


def decode_complex_matrix(data, rows: int, cols: int, key: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ValueError(f"'{key}' must be a flat list of {rows * cols} [re, im] pairs")
    try:
        flat = np.array([complex(float(p[0]), float(p[1])) for p in data])
    except (TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"'{key}' entries must be [re, im] pairs") from exc
    return flat.reshape(rows, cols)


def _real_matrix(data, rows: int, cols: int, key: str) -> np.ndarray:
    try:
        m = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"'{key}' must be a nested list of numbers") from exc
    if m.shape != (rows, cols):
        raise ValueError(f"'{key}' has shape {m.shape}, expected ({rows}, {cols})")
    return m


def _dim(obj: dict, key: str = "dim") -> int:
    d = obj.get(key)
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"'{key}' must be a positive integer")
    return d


def dump_fiducial(f: Fiducial) -> dict:
    amps = np.asarray(f.amplitudes, dtype=complex)
    return {
        "dim": int(f.dim),
        "amplitudes": [[float(z.real), float(z.imag)] for z in amps],
    }


def load_fiducial(obj: dict) -> Fiducial:
    d = _dim(obj)
    amps = obj.get("amplitudes")
    if not isinstance(amps, list) or len(amps) != d:
        raise ValueError(f"'amplitudes' must list {d} [re, im] pairs")
    vec = decode_complex_matrix(amps, d, 1, "amplitudes").reshape(d)
    return Fiducial(dim=d, amplitudes=vec)


def dump_sic(s: SicPovm) -> dict:
    return {
        "dim": int(s.dim),
        "projectors": [encode_complex_matrix(p) for p in s.projectors],
    }


def dump_prob_vector(p: np.ndarray, dim: int) -> dict:
    return {"dim": int(dim), "probs": [float(x) for x in np.asarray(p, dtype=float)]}


def load_prob_vector(obj: dict) -> tuple[int, np.ndarray]:
    d = _dim(obj)
    probs = obj.get("probs")
    if not isinstance(probs, list) or len(probs) != d * d:
        raise ValueError(f"'probs' must list {d * d} numbers")
    return d, np.array(probs, dtype=float)


def dump_density(rho: np.ndarray, dim: int) -> dict:
    return {"dim": int(dim), "matrix": encode_complex_matrix(rho)}


def load_density(obj: dict) -> tuple[int, np.ndarray]:
    d = _dim(obj)
    return d, decode_complex_matrix(obj.get("matrix"), d, d, "matrix")


def dump_kraus_channel(kraus: list[np.ndarray], dim_in: int, dim_out: int) -> dict:
    return {
        "dim_in": int(dim_in),
        "dim_out": int(dim_out),
        "kraus": [encode_complex_matrix(a) for a in kraus],
    }


def load_kraus_channel(obj: dict) -> tuple[int, int, list[np.ndarray]]:
    d_in = _dim(obj, "dim_in")
    d_out = _dim(obj, "dim_out")
    kraus = obj.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise ValueError("'kraus' must be a non-empty list of matrices")
    ops = [decode_complex_matrix(a, d_out, d_in, f"kraus[{k}]") for k, a in enumerate(kraus)]
    return d_in, d_out, ops


def dump_pstoch(s: np.ndarray, dim_in: int, dim_out: int) -> dict:
    return {
        "dim_in": int(dim_in),
        "dim_out": int(dim_out),
        "matrix": [[float(x) for x in row] for row in np.asarray(s, dtype=float)],
    }


def load_pstoch(obj: dict) -> tuple[int, int, np.ndarray]:
    d_in = _dim(obj, "dim_in")
    d_out = _dim(obj, "dim_out")
    m = _real_matrix(obj.get("matrix"), d_out * d_out, d_in * d_in, "matrix")
    return d_in, d_out, m


def dump_gksl(spec: GkslSpec) -> dict:
    return {
        "dim": int(spec.dim),
        "hamiltonian": encode_complex_matrix(spec.hamiltonian),
        "noise_ops": [encode_complex_matrix(v) for v in spec.noise_ops],
    }


def load_gksl(obj: dict) -> GkslSpec:
    d = _dim(obj)
    h = decode_complex_matrix(obj.get("hamiltonian"), d, d, "hamiltonian")
    raw_ops = obj.get("noise_ops", [])
    if not isinstance(raw_ops, list):
        raise ValueError("'noise_ops' must be a list of matrices")
    ops = tuple(
        decode_complex_matrix(v, d, d, f"noise_ops[{k}]") for k, v in enumerate(raw_ops)
    )
    return GkslSpec(dim=d, hamiltonian=h, noise_ops=ops)


def dump_generator(g: Generator) -> dict:
    out = {
        "dim": int(g.dim),
        "matrix": [[float(x) for x in row] for row in np.asarray(g.matrix, dtype=float)],
    }
    if g.h_part is not None:
        out["h_part"] = [[float(x) for x in row] for row in np.asarray(g.h_part)]
    if g.d_part is not None:
        out["d_part"] = [[float(x) for x in row] for row in np.asarray(g.d_part)]
    return out


def load_generator(obj: dict) -> Generator:
    d = _dim(obj)
    n = d * d
    matrix = _real_matrix(obj.get("matrix"), n, n, "matrix")
    h_part = obj.get("h_part")
    d_part = obj.get("d_part")
    if h_part is not None:
        h_part = _real_matrix(h_part, n, n, "h_part")
    if d_part is not None:
        d_part = _real_matrix(d_part, n, n, "d_part")
    return Generator(dim=d, matrix=matrix, h_part=h_part, d_part=d_part)


def dump_counts(c: CountsRecord) -> dict:
    return {
        "dim": int(c.dim),
        "shots": int(c.shots),
        "counts": [[int(x) for x in row] for row in np.asarray(c.counts)],
    }


def load_counts(obj: dict) -> CountsRecord:
    d = _dim(obj)
    shots = obj.get("shots")
    if not isinstance(shots, int) or shots < 1:
        raise ValueError("'shots' must be a positive integer")
    n = d * d
    raw = obj.get("counts")
    try:
        counts = np.array(raw, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ValueError("'counts' must be a nested list of integers") from exc
    if counts.shape != (n, n):
        raise ValueError(f"'counts' has shape {counts.shape}, expected ({n}, {n})")
    return CountsRecord(dim=d, shots=shots, counts=counts)


def dump_quant_report(r: DeltaQuantReport) -> dict:
    # The key holds the lambda of the frame the search certifies as the
    # extremum of the negativity over the unitary family.
    return {
        "delta_quant": float(r.value),
        "argmax_lambda": [float(x) for x in np.asarray(r.lam)],
        "restarts_agreeing": int(r.restarts_agreeing),
    }


def dump_markov_report(r: MarkovReport) -> dict:
    return {
        "delta_nmark": float(r.delta_nmark),
        "s_mark": [[float(x) for x in row] for row in np.asarray(r.s_mark)],
        "log_residual": float(r.log_residual),
    }
