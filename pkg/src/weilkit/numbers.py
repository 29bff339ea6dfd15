"""Exact-rational helpers shared by every module."""

from fractions import Fraction
from numbers import Rational


def to_fraction(value):
    """Coerce ints, Fractions and ``"p/q"`` strings to Fraction; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def fmt(value):
    """Render a coefficient for JSON: exact values as ``"p/q"`` strings, floats as floats."""
    if isinstance(value, float):
        return value
    value = Fraction(value)
    return str(value)


def jsonable(obj):
    """Recursively convert a payload into JSON-serializable data."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(v) for v in obj), key=repr)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, (int, float)):
        return obj
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return str(obj)
