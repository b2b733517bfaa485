"""JSON documents and CSV tables exchanged by the command-line tools.

Floats are written with ``repr`` (shortest string that round-trips the
double exactly), so every number carries its full precision.
"""

from __future__ import annotations

import csv
import io
import json

from . import __version__
from .core import Control, Params, Process, Trajectory, augment_mayer
from .errors import InvalidInput
from .pmp import AdjointArc, Certificate, Measure

VERSION = f"growthpmp {__version__}"


def params_to_doc(params: Params) -> dict:
    return {"kind": params.kind.value, "lambda": params.lam, "a": params.a,
            "t0": params.t0, "T": params.T, "x0": params.x0}


def params_from_doc(doc: dict, checked: bool = True) -> Params:
    try:
        fields = (doc["kind"], doc["lambda"], doc["a"], doc["t0"], doc["T"], doc["x0"])
    except KeyError as exc:
        raise InvalidInput(f"params document lacks field {exc}") from None
    return Params(*fields) if checked else Params.unchecked(*fields)


def process_to_doc(process: Process) -> dict:
    return {
        "params": params_to_doc(process.params),
        "control": {"breakpoints": process.control.breakpoints.tolist(),
                    "values": process.control.values.tolist()},
        "trajectory": {"breakpoints": process.trajectory.breakpoints.tolist(),
                       "values": process.trajectory.values.tolist()},
    }


def process_from_doc(doc: dict) -> Process:
    try:
        params = params_from_doc(doc["params"])
        control = Control(doc["control"]["breakpoints"], doc["control"]["values"])
        traj = Trajectory(doc["trajectory"]["breakpoints"], doc["trajectory"]["values"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed process document ({exc})") from None
    return Process(params, control, traj)


def synthesis_to_doc(result) -> dict:
    lm = result.landmarks
    return {
        "version": VERSION,
        "case": result.case.value,
        "rho": lm.rho,
        "tbar": lm.tbar,
        "alpha1": lm.alpha1,
        "xbar0": lm.xbar0,
        "peak": result.peak,
        "cost": result.cost,
        "switch_times": list(result.switch_times),
        "process": process_to_doc(result.process),
    }


def certificate_to_doc(cert: Certificate) -> dict:
    return {
        "gamma": cert.gamma,
        "lambda": cert.p.lam,
        "p2": cert.p.p2,
        "p1_segments": [{"t_start": s[0], "t_end": s[1], "A": s[2], "B": s[3]}
                        for s in cert.p.segments],
        "measure": {
            "atoms": [{"t": t, "w": w} for t, w in cert.mu.atoms],
            "density": [{"t_start": a, "t_end": b, "rate": r} for a, b, r in cert.mu.density],
        },
        "nu": [{"t": t, "v1": v1, "v2": v2} for t, v1, v2 in cert.nu],
        "fit_residual": cert.fit_residual,
        "fit_ok": cert.fit_ok,
    }


def certificate_from_doc(doc: dict) -> Certificate:
    try:
        arc = AdjointArc(doc["lambda"], doc["p2"],
                         tuple((s["t_start"], s["t_end"], s["A"], s["B"]) for s in doc["p1_segments"]))
        m = doc.get("measure", {})
        mu = Measure(tuple((a["t"], a["w"]) for a in m.get("atoms", ())),
                     tuple((d["t_start"], d["t_end"], d["rate"]) for d in m.get("density", ())))
        nu = tuple((n["t"], n.get("v1", 1.0), n["v2"]) for n in doc.get("nu", ()))
        return Certificate(doc["gamma"], arc, mu, nu, doc.get("fit_residual"), doc.get("fit_ok"))
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed certificate document ({exc})") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def table_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])
    return buf.getvalue()


def process_csv(process: Process) -> str:
    """Node table ``t, x1, x2, u`` (``u`` is the value on the segment starting at t)."""
    x2 = augment_mayer(process).values
    u = list(process.control.values) + [process.control.values[-1]]
    rows = zip(process.breakpoints.tolist(), process.trajectory.values.tolist(),
               x2.tolist(), [float(v) for v in u])
    return table_csv(["t", "x1", "x2", "u"], rows)


def flat_csv(doc: dict) -> str:
    scalars = {k: v for k, v in doc.items() if not isinstance(v, (dict, list))}
    return table_csv(list(scalars), [list(scalars.values())])
