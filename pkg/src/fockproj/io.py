"""JSON / CSV formats for operators, regions, grids and history specs.

Floats are written with ``repr`` (shortest string that round-trips), never
NaN or infinity, so identical inputs give byte-identical files.
"""

import json
import math

import numpy as np

from .dynamics import Potential
from .errors import FockError, InvalidHistoryError
from .fock import coherent_state, label, number_state
from .histories import HistorySpec, two_way_step
from .projector import Circle, Ellipse, GeneralRegion, region_projector


def fmt(x):
    x = float(x)
    if not math.isfinite(x):
        raise FockError(f"refusing to write non-finite value {x!r}")
    return repr(x)


def dumps(obj):
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def complex_pair(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


# -- operators -------------------------------------------------------------

def operator_to_json(A):
    A = np.asarray(A, dtype=complex)
    return {"dim": int(A.shape[0]), "data": [complex_pair(v) for v in A.ravel()]}


def operator_from_json(obj):
    try:
        d = int(obj["dim"])
        data = np.array(obj["data"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FockError(f"malformed operator: {exc}") from None
    if data.shape != (d * d, 2):
        raise FockError(f"operator data has shape {data.shape}, expected ({d * d}, 2)")
    return (data[:, 0] + 1j * data[:, 1]).reshape(d, d)


# -- regions ---------------------------------------------------------------

def _pair(v, what):
    try:
        a, b = v
        return float(a), float(b)
    except (TypeError, ValueError):
        raise FockError(f"{what} must be a pair of numbers, got {v!r}") from None


def _complex(v):
    if isinstance(v, (list, tuple)):
        re, im = _pair(v, "complex value")
        return complex(re, im)
    return complex(float(v))


def potential_from_json(obj):
    if obj == "harmonic" or (isinstance(obj, dict) and "harmonic" in obj):
        return Potential()
    if isinstance(obj, dict) and "polynomial" in obj:
        return Potential.polynomial(obj["polynomial"])
    if isinstance(obj, dict) and "tabulated" in obj:
        tab = obj["tabulated"]
        return Potential.tabulated(tab["grid"], tab["values"])
    raise FockError(f"unknown potential {obj!r}")


def potential_to_json(pot):
    if pot.kind == "harmonic":
        return "harmonic"
    if pot.kind == "polynomial":
        return {"polynomial": list(pot.coefficients)}
    return {"tabulated": {"grid": list(pot.grid), "values": list(pot.values)}}


def region_from_json(obj):
    """Parse ``{"circle": ...}``, ``{"ellipse": ...}`` or ``{"general": ...}``."""
    if not isinstance(obj, dict) or len(obj) != 1:
        raise FockError(f"region must be an object with one key, got {obj!r}")
    (kind, body), = obj.items()
    try:
        if kind == "circle":
            N = body.get("N")
            return Circle(float(body["R"]), _pair(body.get("center", (0, 0)), "center"),
                          None if N is None else int(N))
        if kind == "ellipse":
            return Ellipse(_pair(body.get("center", (0, 0)), "center"),
                           _complex(body.get("squeeze", 0.0)),
                           float(body.get("rotation", 0.0)), int(body["rank"]))
        if kind == "general":
            return GeneralRegion(potential_from_json(body["potential"]), int(body["levels"]))
    except KeyError as exc:
        raise FockError(f"{kind} region is missing {exc}") from None
    raise FockError(f"unknown region kind {kind!r}")


def region_to_json(region):
    if isinstance(region, Circle):
        body = {"R": region.R, "center": list(region.center)}
        if region.N is not None:
            body["N"] = region.N
        return {"circle": body}
    if isinstance(region, Ellipse):
        return {"ellipse": {"center": list(region.center),
                            "squeeze": complex_pair(region.squeeze),
                            "rotation": region.rotation, "rank": region.rank}}
    return {"general": {"potential": potential_to_json(region.potential),
                        "levels": region.levels}}


# -- phase-space grids ------------------------------------------------------

def grid_to_csv(grid):
    """Metadata as ``#`` lines, then a header row of q values and one row per p."""
    lines = [f"# {k}: {json.dumps(v, allow_nan=False)}" for k, v in grid.meta.items()]
    lines.append(",".join(["p\\q"] + [fmt(q) for q in grid.q_axis]))
    for p, row in zip(grid.p_axis, grid.values):
        lines.append(",".join([fmt(p)] + [fmt(v) for v in row]))
    return "\n".join(lines) + "\n"


def grid_to_json(grid):
    return dumps({"meta": grid.meta,
                  "p_axis": [float(v) for v in grid.p_axis],
                  "q_axis": [float(v) for v in grid.q_axis],
                  "values": [[float(v) for v in row] for row in grid.values]})


def grid_from_csv(text):
    from .phase_space import PhaseGrid

    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition(": ")
            meta[key] = json.loads(val)
        elif line.strip():
            rows.append(line.split(","))
    q_axis = [float(v) for v in rows[0][1:]]
    p_axis = [float(r[0]) for r in rows[1:]]
    values = [[float(v) for v in r[1:]] for r in rows[1:]]
    return PhaseGrid(p_axis, q_axis, values, meta)


# -- histories --------------------------------------------------------------

def _normalized_pure(psi):
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def initial_state_from_json(obj, d):
    """Density operator from a descriptor.

    ``{"coherent": [p, q]}`` (renormalized after truncation), ``{"number": n}``,
    ``{"projector_mixed": {"region": {...}}}`` for ``E / Tr E``,
    ``{"thermal": nbar}``, or ``{"matrix": <operator json>}``.
    """
    if not isinstance(obj, dict) or len(obj) != 1:
        raise FockError(f"initial state must be an object with one key, got {obj!r}")
    (kind, body), = obj.items()
    if kind == "coherent":
        return _normalized_pure(coherent_state(label(*_pair(body, "coherent")), d))
    if kind == "number":
        return _normalized_pure(number_state(int(body), d))
    if kind == "projector_mixed":
        E = region_projector(region_from_json(body["region"]), d)
        return E / np.trace(E).real
    if kind == "thermal":
        nbar = float(body)
        w = (nbar / (1.0 + nbar)) ** np.arange(d) if nbar > 0 else np.eye(1, d)[0]
        return np.diag(w / w.sum()).astype(complex)
    if kind == "matrix":
        rho = operator_from_json(body)
        if rho.shape[0] != d:
            raise FockError("matrix initial state has the wrong dimension")
        return rho
    raise FockError(f"unknown initial state kind {kind!r}")


def history_from_json(obj):
    """Parse a history file into ``(HistorySpec, tolerance)``.

    Schema: ``{"dim": d, "times": [...], "regions": [<region>, ...],
    "rho0": <initial state>, "tolerance": 1e-9}``; each region contributes the
    alternatives ``in`` (its projector) and ``out`` (the complement).
    """
    try:
        d = int(obj["dim"])
        times = [float(t) for t in obj["times"]]
        regions = [region_from_json(r) for r in obj["regions"]]
        rho_desc = obj["rho0"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidHistoryError(f"malformed history spec: {exc}") from None
    if len(times) != len(regions):
        raise InvalidHistoryError("need one region per time")
    steps = [two_way_step(t, region_projector(r, d)) for t, r in zip(times, regions)]
    tol = float(obj.get("tolerance", 1e-9))
    return HistorySpec(steps, initial_state_from_json(rho_desc, d)), tol


def report_to_json(report):
    return {
        "branches": [list(b) for b in report.branches],
        "functional": [[complex_pair(v) for v in row] for row in report.functional],
        "probabilities": [float(v) for v in report.probabilities],
        "max_offdiag": float(report.max_offdiag),
        "tolerance": float(report.tolerance),
        "decoherent": bool(report.decoherent),
        "sum": complex_pair(report.extra.get("sum", 0.0)),
    }
