"""Binary container for gridded fields (bit-exact round trips).

Layout (little-endian):
  8 bytes   magic "CYLF0001"
  3 x u32   N_r, N_theta, N_z
  u32       N_I  (number of radial panels)
  (N_I+1) x f64   panel edges (start 0, end R)
  f64       A    (half-extent in z)
  N_r*N_theta*N_z x f64   samples, r fastest, then theta, then z
"""
from __future__ import annotations

import struct

import numpy as np

from .grids import SolverConfig

__all__ = ["write_field", "read_field", "FieldFileError", "MAGIC"]

MAGIC = b"CYLF0001"


class FieldFileError(Exception):
    """Malformed or inconsistent field file."""


def write_field(path, field, config: SolverConfig) -> None:
    """Write an (N_r, N_theta, N_z) array with its grid geometry."""
    field = np.ascontiguousarray(field, dtype="<f8")
    n_r, n_theta, n_z = field.shape
    if n_r != config.n_r or n_theta != config.n_theta or n_z != config.n_z:
        raise FieldFileError("field shape does not match config")
    edges = np.asarray(config.panel_edges, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", n_r, n_theta, n_z))
        fh.write(struct.pack("<I", config.n_panels))
        fh.write(edges.tobytes())
        fh.write(struct.pack("<d", config.A))
        fh.write(field.ravel(order="F").tobytes())


def read_field(path, eta: int = 4, quad_order: int = 10):
    """Read a field file; returns (field, SolverConfig).

    Solver-only parameters (eta, quad_order) are not stored in the file and
    are supplied by the caller.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 8 + 12 + 4 or raw[:8] != MAGIC:
        raise FieldFileError(f"{path}: not a CYLF0001 field file")
    off = 8
    n_r, n_theta, n_z = struct.unpack_from("<III", raw, off)
    off += 12
    (n_panels,) = struct.unpack_from("<I", raw, off)
    off += 4
    need = (n_panels + 1) * 8
    if len(raw) < off + need + 8:
        raise FieldFileError(f"{path}: truncated header")
    edges = np.frombuffer(raw, dtype="<f8", count=n_panels + 1, offset=off)
    off += need
    (A,) = struct.unpack_from("<d", raw, off)
    off += 8
    count = n_r * n_theta * n_z
    if len(raw) != off + 8 * count:
        raise FieldFileError(f"{path}: payload length mismatch "
                             f"(expected {count} samples)")
    if n_panels == 0 or n_r % n_panels != 0:
        raise FieldFileError(f"{path}: N_r = {n_r} not divisible into "
                             f"{n_panels} panels")
    if np.any(np.diff(edges) <= 0):
        raise FieldFileError(f"{path}: panel edges not increasing")
    flat = np.frombuffer(raw, dtype="<f8", count=count, offset=off)
    field = flat.reshape((n_r, n_theta, n_z), order="F").copy()
    config = SolverConfig(R=float(edges[-1]), A=float(A), n_panels=n_panels,
                          cheb_order=n_r // n_panels, n_theta=n_theta,
                          n_z=n_z, eta=eta, quad_order=quad_order,
                          panel_edges=tuple(edges))
    return field, config
