"""Exceptions, warnings and argument checks shared by the subpackages."""

from __future__ import annotations

import math

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the physical domain of a formula."""


class ResolutionError(ValueError):
    """A numerical grid or step size is too coarse for the requested accuracy."""


class RegimeWarning(UserWarning):
    """A perturbative formula is being evaluated outside its regime of validity."""


class AdiabaticityWarning(UserWarning):
    """The drive envelope changes too quickly for the dressed states to follow it."""


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


def check_nonnegative(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


def check_probability(value: float, name: str = "probability") -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def check_finite_array(values, name: str, dtype=complex) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    return arr
