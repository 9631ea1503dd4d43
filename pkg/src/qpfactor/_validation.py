"""Input validation helpers shared across the package."""

import numpy as np

from .errors import InvalidArgumentError


def as_float_array(a, name, ndim=None):
    """Coerce to a C-contiguous float64 array and require finite entries."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise InvalidArgumentError(
            f"{name} must be {ndim}-dimensional, got shape {arr.shape}"
        )
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    return arr


def check_positive(value, name, strict=True):
    """Require a positive (or nonnegative) scalar."""
    v = float(value)
    if not np.isfinite(v):
        raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
    if strict and v <= 0:
        raise InvalidArgumentError(f"{name} must be positive, got {value!r}")
    if not strict and v < 0:
        raise InvalidArgumentError(f"{name} must be nonnegative, got {value!r}")
    return v


def check_index(value, name, size):
    """Require an integer index in [0, size)."""
    i = int(value)
    if i != value:
        raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
    if not 0 <= i < size:
        raise InvalidArgumentError(f"{name} must be in [0, {size}), got {i}")
    return i


def is_prime(q):
    q = int(q)
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def check_prime(value, name="prime"):
    """Require a prime modulus."""
    try:
        q = int(value)
        ok = q == value
    except (TypeError, ValueError):
        ok = False
        q = value
    if not ok or not is_prime(q):
        raise InvalidArgumentError(f"{name} must be a prime number, got {value!r}")
    return q
