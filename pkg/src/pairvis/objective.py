"""Objectives for the pair-visibility problem."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Objective:
    """min-max / min-sum and the weighted / offset min-max variants.

    kind is one of 'minmax', 'minsum', 'wminmax', 'ominmax'.  The weighted
    variant minimizes max(lam*ds, (1-lam)*dt); the offset variant
    max(alpha+ds, beta+dt).
    """

    kind: str
    lam: float = 0.5
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("minmax", "minsum", "wminmax", "ominmax"):
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.kind == "wminmax" and not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        if self.kind == "ominmax" and (self.alpha < 0.0 or self.beta < 0.0):
            raise ValueError("offsets must be nonnegative")

    def combine(self, ds: float, dt: float) -> float:
        if self.kind == "minmax":
            return max(ds, dt)
        if self.kind == "minsum":
            return ds + dt
        if self.kind == "wminmax":
            return max(self.lam * ds, (1.0 - self.lam) * dt)
        return max(self.alpha + ds, self.beta + dt)

    @property
    def scale_bound(self) -> float:
        """Lipschitz factor of combine() in (ds, dt), for oracle bounds."""
        if self.kind == "minsum":
            return 2.0
        if self.kind == "wminmax":
            return max(self.lam, 1.0 - self.lam)
        return 1.0

    # per-side weights/offsets so optimizers can treat all kinds uniformly:
    # combine(ds, dt) = max/sum of (w_s*ds + c_s, w_t*dt + c_t)
    @property
    def weight_s(self) -> float:
        return self.lam if self.kind == "wminmax" else 1.0

    @property
    def weight_t(self) -> float:
        return (1.0 - self.lam) if self.kind == "wminmax" else 1.0

    @property
    def offset_s(self) -> float:
        return self.alpha if self.kind == "ominmax" else 0.0

    @property
    def offset_t(self) -> float:
        return self.beta if self.kind == "ominmax" else 0.0

    @property
    def is_sum(self) -> bool:
        return self.kind == "minsum"


MINMAX = Objective("minmax")
MINSUM = Objective("minsum")


def weighted_minmax(lam: float) -> Objective:
    return Objective("wminmax", lam=lam)


def offset_minmax(alpha: float, beta: float) -> Objective:
    return Objective("ominmax", alpha=alpha, beta=beta)
