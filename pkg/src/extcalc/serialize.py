"""JSON encoding of multivectors, fields, scenarios, and reports.

Formats are stable and canonical: keys are emitted sorted and floats use the
shortest round-trip representation, so identical inputs always serialize to
identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

from .algebra import Bitensor, Multivector, SpacetimeSignature
from .fields import AnalyticField, GaussianEnvelope, GridField, Mode

__all__ = [
    "ScenarioError",
    "Scenario",
    "signature_to_json",
    "signature_from_json",
    "multivector_to_json",
    "multivector_from_json",
    "field_to_json",
    "field_from_json",
    "bitensor_to_json",
    "scenario_from_json",
    "canonical_dumps",
]


class ScenarioError(ValueError):
    """Malformed scenario or field description."""


def _jsonify(value):
    import numpy as np

    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def canonical_dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_jsonify)


def signature_to_json(sig: SpacetimeSignature) -> dict:
    return {"k": sig.k, "n": sig.n}


def signature_from_json(data: Mapping) -> SpacetimeSignature:
    try:
        return SpacetimeSignature(int(data["k"]), int(data["n"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad signature object: {exc}") from exc


def multivector_to_json(mv: Multivector) -> dict:
    terms = []
    for indices in sorted(mv.terms):
        c = mv.terms[indices]
        entry = {"indices": list(indices), "re": float(c.real if isinstance(c, complex) else c)}
        if isinstance(c, complex) and c.imag != 0:
            entry["im"] = float(c.imag)
        terms.append(entry)
    return {
        "signature": signature_to_json(mv.signature),
        "grade": mv.grade,
        "terms": terms,
    }


def multivector_from_json(data: Mapping, sig: SpacetimeSignature | None = None) -> Multivector:
    try:
        if sig is None:
            sig = signature_from_json(data["signature"])
        grade = int(data["grade"])
        terms = {}
        for entry in data.get("terms", []):
            indices = tuple(int(i) for i in entry["indices"])
            re = float(entry.get("re", 0.0))
            im = float(entry.get("im", 0.0))
            terms[indices] = complex(re, im) if im else re
        return Multivector(sig, grade, terms)
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ScenarioError(f"bad multivector object: {exc}") from exc


def _envelope_to_json(env: GaussianEnvelope | None):
    if env is None:
        return None
    return {"type": "gaussian", "width": env.width, "center": list(env.center)}


def _envelope_from_json(data, dim: int) -> GaussianEnvelope | None:
    if data is None:
        return None
    if data.get("type") != "gaussian":
        raise ScenarioError(f"unknown envelope type {data.get('type')!r}")
    center = data.get("center", [0.0] * dim)
    return GaussianEnvelope(center=tuple(float(c) for c in center), width=float(data["width"]))


def field_to_json(field) -> dict:
    if isinstance(field, AnalyticField):
        modes = []
        for mode in field.modes:
            entry = {
                "xi": list(mode.xi),
                "phase": mode.phase,
                "waveform": mode.waveform,
                "envelope": _envelope_to_json(mode.envelope),
                "amplitude": multivector_to_json(mode.amplitude),
            }
            if any(mode.poly):
                entry["poly"] = list(mode.poly)
                entry["poly_center"] = list(mode.poly_center)
            modes.append(entry)
        return {"grade": field.grade, "backend": "modes", "modes": modes}
    if isinstance(field, GridField):
        return {
            "grade": field.grade,
            "backend": "grid",
            "grid": {
                "origin": list(field.origin),
                "spacing": list(field.spacing),
                "shape": list(field.values.shape[:-1]),
                "values": field.values.tolist(),
            },
        }
    raise ScenarioError(f"cannot serialize field of type {type(field).__name__}")


def field_from_json(data: Mapping, sig: SpacetimeSignature):
    try:
        grade = int(data["grade"])
        backend = data.get("backend", "modes")
        if backend == "modes":
            modes = []
            for entry in data.get("modes", []):
                amplitude = multivector_from_json(entry["amplitude"], sig)
                modes.append(Mode(
                    amplitude=amplitude,
                    xi=tuple(float(v) for v in entry.get("xi", [0.0] * sig.dim)),
                    phase=float(entry.get("phase", 0.0)),
                    waveform=entry.get("waveform", "cos"),
                    poly=tuple(int(p) for p in entry.get("poly", [])),
                    poly_center=tuple(float(c) for c in entry.get("poly_center", [])),
                    envelope=_envelope_from_json(entry.get("envelope"), sig.dim),
                ))
            return AnalyticField(sig, grade, modes)
        if backend == "grid":
            import numpy as np

            grid = data["grid"]
            values = np.asarray(grid["values"], dtype=float)
            return GridField(sig, grade, grid["origin"], grid["spacing"], values)
        raise ScenarioError(f"unknown field backend {backend!r}")
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad field object: {exc}") from exc


def bitensor_to_json(t: Bitensor) -> list:
    out = []
    for (i, j) in sorted(t.comps):
        c = t.comps[(i, j)]
        out.append([i, j, float(c.real if isinstance(c, complex) else c)])
    return out


@dataclass(frozen=True)
class Scenario:
    """A verification scenario: the system, optional potential, and run knobs."""

    signature: SpacetimeSignature
    r: int
    F: object
    J: object | None
    A: object | None
    checks: tuple[str, ...]
    sample_points: int
    seed: int
    tol: float


VALID_CHECKS = ("differential", "integral", "fourier", "gauge")


def scenario_from_json(data: Mapping) -> Scenario:
    try:
        sig = signature_from_json(data["signature"])
        r = int(data["r"])
        f_field = field_from_json(data["F"], sig)
        j_field = field_from_json(data["J"], sig) if data.get("J") is not None else None
        a_field = field_from_json(data["A"], sig) if data.get("A") is not None else None
        checks = tuple(data.get("checks", ["differential"]))
        for check in checks:
            if check not in VALID_CHECKS:
                raise ScenarioError(f"unknown check {check!r}; valid: {VALID_CHECKS}")
        return Scenario(
            signature=sig,
            r=r,
            F=f_field,
            J=j_field,
            A=a_field,
            checks=checks,
            sample_points=int(data.get("sample_points", 20)),
            seed=int(data.get("seed", 0)),
            tol=float(data.get("tol", 1e-8)),
        )
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad scenario object: {exc}") from exc
