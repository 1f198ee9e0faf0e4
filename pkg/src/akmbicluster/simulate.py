"""Two-block Gaussian model generator with ground-truth row and column classes.

Rows fall into class 1 or 2 with probabilities p, columns with probabilities
q, and each entry is drawn from a Gaussian whose mean and standard deviation
depend on the (row class, column class) block. Three settings are supported:
blocks can differ in means, in standard deviations, or in both.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import DataMatrix
from .seeds import rng_from

__all__ = [
    "SETTING_MEAN_SHIFT",
    "SETTING_VARIANCE_SHIFT",
    "SETTING_MEAN_AND_VARIANCE",
    "SETTINGS",
    "GENERATOR_ALGORITHM",
    "BlockModelSpec",
    "LabeledMatrix",
    "block_matrices",
    "generate",
]

SETTING_MEAN_SHIFT = "mean-shift"
SETTING_VARIANCE_SHIFT = "variance-shift"
SETTING_MEAN_AND_VARIANCE = "mean-and-variance"
SETTINGS = (SETTING_MEAN_SHIFT, SETTING_VARIANCE_SHIFT, SETTING_MEAN_AND_VARIANCE)

# numpy's default bit generator; recorded in output metadata for reproducibility.
GENERATOR_ALGORITHM = "pcg64"

_STREAM_SIM = 11
_MAX_CLASS_REDRAWS = 100

_MEAN_PATTERN = np.array([[0.36, 0.90], [-0.58, -0.06]])


def block_matrices(setting: str, b: float) -> tuple[np.ndarray, np.ndarray]:
    """The 2x2 block means M and standard deviations S for a setting at level b."""
    b = float(b)
    if b < 0:
        raise ValueError("signal level b must be nonnegative")
    ones = np.ones((2, 2))
    if setting == SETTING_MEAN_SHIFT:
        return b * _MEAN_PATTERN, ones
    if setting == SETTING_VARIANCE_SHIFT:
        return np.zeros((2, 2)), ones + b * np.eye(2)
    if setting == SETTING_MEAN_AND_VARIANCE:
        return b * _MEAN_PATTERN, ones + b * np.eye(2)
    raise ValueError(f"unknown setting {setting!r}; expected one of {SETTINGS}")


def _check_probs(name: str, probs: tuple[float, float]) -> tuple[float, float]:
    probs = (float(probs[0]), float(probs[1]))
    if len(probs) != 2 or min(probs) <= 0:
        raise ValueError(f"{name} must be two strictly positive probabilities")
    if abs(probs[0] + probs[1] - 1.0) > 1e-12:
        raise ValueError(f"{name} must sum to 1, got {probs[0] + probs[1]}")
    return probs


@dataclass(frozen=True)
class BlockModelSpec:
    n: int
    b: float
    setting: str
    a: float = 1.0
    p: tuple[float, float] = (0.3, 0.7)
    q: tuple[float, float] = (0.2, 0.8)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.a <= 0:
            raise ValueError("aspect ratio a must be positive")
        if self.b < 0:
            raise ValueError("signal level b must be nonnegative")
        if self.setting not in SETTINGS:
            raise ValueError(f"unknown setting {self.setting!r}; expected one of {SETTINGS}")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        object.__setattr__(self, "p", _check_probs("p", self.p))
        object.__setattr__(self, "q", _check_probs("q", self.q))

    @property
    def m(self) -> int:
        return int(round(self.a * self.n))


@dataclass(frozen=True)
class LabeledMatrix:
    X: DataMatrix
    row_classes: np.ndarray  # values in {1, 2}, length n
    col_classes: np.ndarray  # values in {1, 2}, length m


def generate(spec: BlockModelSpec) -> LabeledMatrix:
    """Draw one labeled matrix; deterministic given spec.seed.

    Class vectors are redrawn (up to a bounded number of attempts) whenever a
    class is missing among the rows or the columns, so the ground truth
    always contains both classes.
    """
    n, m = spec.n, spec.m
    if m < 2:
        raise ValueError(f"a={spec.a} with n={spec.n} gives m={m}; need m >= 2")
    rng = rng_from(spec.seed, _STREAM_SIM)
    for _ in range(_MAX_CLASS_REDRAWS):
        u = rng.choice((1, 2), size=n, p=spec.p)
        v = rng.choice((1, 2), size=m, p=spec.q)
        if len(np.unique(u)) == 2 and len(np.unique(v)) == 2:
            break
    else:
        raise RuntimeError(
            f"failed to draw both classes in {_MAX_CLASS_REDRAWS} attempts "
            f"(n={n}, m={m}, p={spec.p}, q={spec.q})"
        )
    M, S = block_matrices(spec.setting, spec.b)
    means = M[u - 1][:, v - 1]
    sds = S[u - 1][:, v - 1]
    X = rng.normal(means, sds)
    u.setflags(write=False)
    v.setflags(write=False)
    return LabeledMatrix(X=DataMatrix._wrap(X), row_classes=u, col_classes=v)
