# Copyright (c) 2025 The cvtag Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from cvtag.common import ConfigurationError, FloatOrArray, as_scalar


class Distribution(ABC):
    """
    A scalar probability law for a stage gain `a` or an additive term `b`.

    `pdf`, `cdf` and `sample` broadcast over array arguments and return plain
    floats for scalar ones.
    """

    @abstractmethod
    def mean(self) -> float:
        ...

    @abstractmethod
    def variance(self) -> float:
        ...

    def second_moment(self) -> float:
        return self.mean() ** 2 + self.variance()

    @property
    def is_degenerate(self) -> bool:
        return self.variance() == 0

    @abstractmethod
    def pdf(self, x: FloatOrArray) -> FloatOrArray:
        ...

    @abstractmethod
    def cdf(self, x: FloatOrArray) -> FloatOrArray:
        """P(A <= x)."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size=None) -> FloatOrArray:
        ...


def _point_mass_cdf(value, x):
    # Right-continuous step: the atom itself counts as below the threshold
    return as_scalar(np.where(np.asarray(x) < value, 0.0, 1.0))


@dataclass(frozen=True)
class Gaussian(Distribution):
    mu: float
    var: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.var)):
            raise ConfigurationError(f"Gaussian parameters must be finite, got mu={self.mu}, var={self.var}")
        if self.var < 0:
            raise ConfigurationError(f"Gaussian variance must be >= 0, got {self.var}")

    @property
    def std(self) -> float:
        return math.sqrt(self.var)

    def mean(self) -> float:
        return self.mu

    def variance(self) -> float:
        return self.var

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.var == 0:
            return as_scalar(np.zeros_like(x))
        z = (x - self.mu) / self.std
        return as_scalar(np.exp(-0.5 * z * z) / (self.std * math.sqrt(2.0 * math.pi)))

    def cdf(self, x):
        # Zero variance is the point mass at mu
        if self.var == 0:
            return _point_mass_cdf(self.mu, x)
        return as_scalar(ndtr((np.asarray(x, dtype=float) - self.mu) / self.std))

    def sample(self, rng, size=None):
        if self.var == 0:
            return self.mu if size is None else np.full(size, self.mu, dtype=float)
        return rng.normal(self.mu, self.std, size=size)


@dataclass(frozen=True)
class Uniform(Distribution):
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ConfigurationError(f"Uniform bounds must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise ConfigurationError(f"Uniform requires lo < hi, got lo={self.lo}, hi={self.hi}")

    @classmethod
    def from_moments(cls, mean: float, variance: float) -> "Uniform":
        """Uniform law with the given mean and (strictly positive) variance."""
        if variance <= 0:
            raise ConfigurationError(f"Uniform needs a positive variance, got {variance}")
        half_width = math.sqrt(3.0 * variance)
        return cls(lo=mean - half_width, hi=mean + half_width)

    def mean(self) -> float:
        return (self.lo + self.hi) / 2.0

    def variance(self) -> float:
        return (self.hi - self.lo) ** 2 / 12.0

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return as_scalar(np.where(inside, 1.0 / (self.hi - self.lo), 0.0))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return as_scalar(np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0))

    def sample(self, rng, size=None):
        return rng.uniform(self.lo, self.hi, size=size)


@dataclass(frozen=True)
class Degenerate(Distribution):
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ConfigurationError(f"Degenerate value must be finite, got {self.value}")

    def mean(self) -> float:
        return self.value

    def variance(self) -> float:
        return 0.0

    def pdf(self, x):
        # No Lebesgue density; the mass is fully carried by cdf
        return as_scalar(np.zeros_like(np.asarray(x, dtype=float)))

    def cdf(self, x):
        return _point_mass_cdf(self.value, x)

    def sample(self, rng, size=None):
        return self.value if size is None else np.full(size, self.value, dtype=float)


def fluctuating(mean: float, variance: float, law: str = "gaussian") -> Distribution:
    """
    Gain with the given mean and variance under `law` ("gaussian" or "uniform").

    A zero variance always yields a Degenerate law.
    """
    if variance < 0:
        raise ConfigurationError(f"variance must be >= 0, got {variance}")
    if variance == 0:
        return Degenerate(mean)
    if law == "gaussian":
        return Gaussian(mean, variance)
    if law == "uniform":
        return Uniform.from_moments(mean, variance)
    raise ConfigurationError(f"Unknown fluctuation law {law!r}, expected 'gaussian' or 'uniform'")
