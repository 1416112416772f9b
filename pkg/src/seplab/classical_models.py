"""Three macroscopic coincidence experiments with exactly enumerable tables.

Exploding rock.  A rock at rest splits into two equal fragments flying apart
with opposite momenta.  The shared hidden variable is the direction lambda of
fragment A's momentum, uniform on the circle; a station at analyzer angle
theta reports +1 when the fragment's momentum has positive component along
theta.  Fragment B carries direction lambda + pi.  The correlation has the
closed form E = 2*Delta/pi - 1 with Delta the angular distance between the
analyzer angles: the correlation exists before anyone measures, it is only
discovered, and no setting choice pushes |S| past the classical bound 2.

Rod-connected dice.  Two dice joined by a rigid rod so that reading them is
a single mechanical event.  Per setting pair the joint outcome is drawn
fresh: equal same-sign outcomes for every pair except the second-second
pair, which gives equal opposite-sign outcomes.  Marginals stay uniform, the
correlation table is [[1, 1], [1, -1]], and S = 4: the correlation is
created by the joint execution itself, and no per-side hidden variable can
reproduce the table.

Connected vessels.  Two vessels joined by a tube holding 20 L of water in
total.  Each station either consults a reference gauge (R, deterministically
+1) or siphons and reports +1 iff it collects strictly more than 10 L (S).
When both siphon, the water splits V_A = 20u (u uniform), V_B = 20 - V_A, so
exactly one side passes the threshold and E(S,S) = -1; a lone siphon drains
all 20 L and reports +1.  With settings ordered (R, S) the table is
[[1, 1], [1, -1]] and S = 4.  An exact 10/10 split has probability zero;
floating-point ties resolve to (-1, -1) since the comparison is strict.
Note the model is signalling by construction: a siphoning station's marginal
depends on whether the partner station also siphons (the tube is a real
physical channel between the stations).
"""

from __future__ import annotations

import math

import numpy as np

from .bell import CoincidenceModel, Distribution, Pair

TOTAL_VOLUME = 20.0
VOLUME_THRESHOLD = 10.0


def angular_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    d = math.fmod(abs(a - b), 2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def rock_expectation(theta_a: float, theta_b: float) -> float:
    """Closed-form fragment correlation: 2*Delta/pi - 1."""
    return 2.0 * angular_distance(theta_a, theta_b) / math.pi - 1.0


class RockModel(CoincidenceModel):
    """Exploding-rock stations at configurable analyzer angles."""

    def __init__(self, settings_a=(0.0, math.pi / 2), settings_b=(math.pi / 4, -math.pi / 4)):
        self.settings_a = tuple(float(t) for t in settings_a)
        self.settings_b = tuple(float(t) for t in settings_b)

    @staticmethod
    def responses(theta_a: float, theta_b: float, lam: float) -> Pair:
        a = 1 if math.cos(theta_a - lam) > 0.0 else -1
        b = 1 if math.cos(theta_b - (lam + math.pi)) > 0.0 else -1
        return a, b

    def sample(self, i: int, j: int, rng: np.random.Generator) -> Pair:
        lam = rng.uniform(0.0, 2.0 * math.pi)
        return self.responses(self.settings_a[i], self.settings_b[j], lam)

    def sample_many(self, i: int, j: int, n: int, rng: np.random.Generator) -> np.ndarray:
        lam = rng.uniform(0.0, 2.0 * math.pi, size=n)
        a = np.where(np.cos(self.settings_a[i] - lam) > 0.0, 1, -1)
        b = np.where(np.cos(self.settings_b[j] - (lam + math.pi)) > 0.0, 1, -1)
        return np.column_stack([a, b])

    def exact_distribution(self, i: int, j: int) -> Distribution:
        e = rock_expectation(self.settings_a[i], self.settings_b[j])
        same = (1.0 + e) / 4.0
        diff = (1.0 - e) / 4.0
        return {(+1, +1): same, (-1, -1): same, (+1, -1): diff, (-1, +1): diff}


class RodDiceModel(CoincidenceModel):
    """Rod-connected dice; settings are the two readout modes per side."""

    settings_a = ("mode-1", "mode-2")
    settings_b = ("mode-1", "mode-2")

    def _anti(self, i: int, j: int) -> bool:
        return i == 1 and j == 1

    def sample(self, i: int, j: int, rng: np.random.Generator) -> Pair:
        a = 1 if rng.random() < 0.5 else -1
        return (a, -a) if self._anti(i, j) else (a, a)

    def sample_many(self, i: int, j: int, n: int, rng: np.random.Generator) -> np.ndarray:
        a = np.where(rng.random(n) < 0.5, 1, -1)
        b = -a if self._anti(i, j) else a
        return np.column_stack([a, b])

    def exact_distribution(self, i: int, j: int) -> Distribution:
        if self._anti(i, j):
            return {(+1, -1): 0.5, (-1, +1): 0.5, (+1, +1): 0.0, (-1, -1): 0.0}
        return {(+1, +1): 0.5, (-1, -1): 0.5, (+1, -1): 0.0, (-1, +1): 0.0}


class ConnectedVesselsModel(CoincidenceModel):
    """Connected vessels; setting 0 is the reference gauge R, setting 1 the
    siphon test S (+1 iff collected volume exceeds the 10 L threshold)."""

    settings_a = ("reference", "siphon")
    settings_b = ("reference", "siphon")

    def sample(self, i: int, j: int, rng: np.random.Generator) -> Pair:
        if i == 1 and j == 1:
            va = TOTAL_VOLUME * rng.random()
            a = 1 if va > VOLUME_THRESHOLD else -1
            b = 1 if TOTAL_VOLUME - va > VOLUME_THRESHOLD else -1
            return a, b
        # any lone siphon drains the full 20 L, so every branch reports +1
        return 1, 1

    def sample_many(self, i: int, j: int, n: int, rng: np.random.Generator) -> np.ndarray:
        if i == 1 and j == 1:
            va = TOTAL_VOLUME * rng.random(n)
            a = np.where(va > VOLUME_THRESHOLD, 1, -1)
            b = np.where(TOTAL_VOLUME - va > VOLUME_THRESHOLD, 1, -1)
            return np.column_stack([a, b])
        return np.ones((n, 2), dtype=int)

    def exact_distribution(self, i: int, j: int) -> Distribution:
        if i == 1 and j == 1:
            return {(+1, -1): 0.5, (-1, +1): 0.5, (+1, +1): 0.0, (-1, -1): 0.0}
        return {(+1, +1): 1.0, (+1, -1): 0.0, (-1, +1): 0.0, (-1, -1): 0.0}


def rock_model(settings_a=(0.0, math.pi / 2), settings_b=(math.pi / 4, -math.pi / 4)) -> RockModel:
    return RockModel(settings_a, settings_b)


def rod_dice_model() -> RodDiceModel:
    return RodDiceModel()


def vessels_model() -> ConnectedVesselsModel:
    return ConnectedVesselsModel()
