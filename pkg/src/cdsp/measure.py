"""Finitely supported positive measures on the unit circle.

Atoms carry an optional exact rational angle (in turns) so that roots of
unity stay exact under rotation: cancellations like 1 + w + w^2 = 0 must
hold to machine precision downstream.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ParseError, ValidationError

MIN_CHORDAL_DISTANCE = 1e-9


def _unit_from_turns(t: Fraction) -> complex:
    t = t - math.floor(t)  # reduce mod 1
    # exact values for the common roots of unity used throughout
    table = {
        Fraction(0): 1 + 0j,
        Fraction(1, 2): -1 + 0j,
        Fraction(1, 4): 1j,
        Fraction(3, 4): -1j,
    }
    if t in table:
        return table[t]
    ang = 2.0 * math.pi * float(t)
    return complex(math.cos(ang), math.sin(ang))


@dataclass(frozen=True)
class CirclePoint:
    value: complex
    exact_turns: Optional[Fraction] = None

    def __post_init__(self):
        if not (math.isfinite(self.value.real) and math.isfinite(self.value.imag)):
            raise ValidationError("non-finite circle point")
        if abs(abs(self.value) - 1.0) > 1e-12:
            raise ValidationError(f"point {self.value} is off the unit circle")
        if self.exact_turns is not None:
            if abs(self.value - _unit_from_turns(self.exact_turns)) > 1e-15 * 4:
                raise ValidationError("value inconsistent with exact_turns")

    @classmethod
    def from_turns(cls, t) -> "CirclePoint":
        t = Fraction(t)
        return cls(_unit_from_turns(t), t)

    @classmethod
    def from_angle(cls, radians: float) -> "CirclePoint":
        return cls(cmath.exp(1j * radians), None)


@dataclass(frozen=True)
class Measure:
    atoms: tuple  # of (CirclePoint, float)

    def __post_init__(self):
        if len(self.atoms) < 1:
            raise ValidationError("measure needs at least one atom")
        for pt, wt in self.atoms:
            if not (wt > 0):
                raise ValidationError(f"nonpositive weight {wt}")
        pts = [pt.value for pt, _ in self.atoms]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if abs(pts[i] - pts[j]) <= MIN_CHORDAL_DISTANCE:
                    raise ValidationError(f"atoms {i} and {j} coincide")

    @property
    def k(self) -> int:
        return len(self.atoms)

    @property
    def points(self):
        return [pt.value for pt, _ in self.atoms]

    @property
    def weights(self):
        return [wt for _, wt in self.atoms]

    def to_json(self) -> str:
        out = {"atoms": []}
        for pt, wt in self.atoms:
            if pt.exact_turns is not None:
                entry = {"turns": str(pt.exact_turns), "weight": wt}
            else:
                entry = {"point": {"re": pt.value.real, "im": pt.value.imag},
                         "weight": wt}
            out["atoms"].append(entry)
        return json.dumps(out)


def _parse_turn(tok: str) -> Fraction:
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad turns value {tok!r}") from exc


def parse_measure(spec: str) -> Measure:
    """Parse either the inline "t1,t2,...:w1,w2,..." syntax (turns as
    rationals) or a JSON measure document."""
    spec = spec.strip()
    if spec.startswith("{"):
        return _parse_json(spec)
    if ":" not in spec:
        raise ParseError("inline measure must look like 'turns:weights'")
    turns_part, weights_part = spec.split(":", 1)
    turns = [_parse_turn(t) for t in turns_part.split(",") if t.strip() != ""]
    try:
        weights = [float(w) for w in weights_part.split(",") if w.strip() != ""]
    except ValueError as exc:
        raise ParseError("bad weight") from exc
    if len(turns) != len(weights) or not turns:
        raise ParseError("turns and weights must have equal nonzero length")
    atoms = tuple((CirclePoint.from_turns(t), w) for t, w in zip(turns, weights))
    return Measure(atoms)


def _parse_json(text: str) -> Measure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(doc, dict) or "atoms" not in doc:
        raise ParseError("JSON measure document needs an 'atoms' list")
    atoms = []
    for entry in doc["atoms"]:
        if "weight" not in entry:
            raise ParseError("atom without weight")
        wt = float(entry["weight"])
        if "turns" in entry:
            pt = CirclePoint.from_turns(_parse_turn(str(entry["turns"])))
        elif "angle" in entry:
            pt = CirclePoint.from_angle(float(entry["angle"]))
        elif "point" in entry:
            pc = entry["point"]
            pt = CirclePoint(complex(float(pc["re"]), float(pc["im"])))
        else:
            raise ParseError("atom needs one of turns / angle / point")
        atoms.append((pt, wt))
    return Measure(tuple(atoms))


def rotate_measure(m: Measure, phase_turns) -> Measure:
    """Multiply every atom by exp(2*pi*i*phase); weights unchanged.  Exact
    angles stay exact when the phase is rational."""
    phase_turns = Fraction(phase_turns)
    atoms = []
    for pt, wt in m.atoms:
        if pt.exact_turns is not None:
            new = CirclePoint.from_turns(pt.exact_turns + phase_turns)
        else:
            new = CirclePoint(pt.value * _unit_from_turns(phase_turns))
        atoms.append((new, wt))
    return Measure(tuple(atoms))
