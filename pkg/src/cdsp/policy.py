"""Numeric tolerance policy shared across the pipeline."""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class NumericPolicy:
    root_tol: float = 1e-12
    identity_tol: float = 1e-9
    zero_accept: float = 1e-7
    zero_reject: float = 1e-4
    psd_tol: float = 1e-8
    l_max: int = 16
    N_trunc: int = 64
    oracle_N: int = 64
    seed: int = 20240901

    def __post_init__(self):
        if not (0 < self.zero_accept < self.zero_reject):
            raise ValueError("zero_accept must be positive and below zero_reject")
        for name in ("root_tol", "identity_tol", "psd_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "NumericPolicy":
        return replace(cls(), **d)

    @classmethod
    def from_json(cls, text: str) -> "NumericPolicy":
        return cls.from_dict(json.loads(text))
