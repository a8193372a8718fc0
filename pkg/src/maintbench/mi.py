"""Maintainability-index variants and Red/Yellow/Green banding.

Four published recalibrations of the same composite measure:

* ``coleman``        original unclamped formula, natural logarithms
* ``sei``            base-2 logarithms plus a comment-ratio bonus, unclamped
* ``visual_studio``  the original body rescaled to 0..100 and floored at 0
* ``radon``          the rescaled body including the comment bonus

Only the clamped variants (``visual_studio``, ``radon``) are banded:
[0,10) Red, [10,20) Yellow, [20,100] Green.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

RED = "Red"
YELLOW = "Yellow"
GREEN = "Green"

UNCLAMPED_VARIANTS = ("coleman", "sei")
CLAMPED_VARIANTS = ("radon", "visual_studio")
VARIANTS = UNCLAMPED_VARIANTS + CLAMPED_VARIANTS


class MiDomainError(ValueError):
    """Inputs fall outside a variant's mathematical domain."""


@dataclass(frozen=True)
class MiInputs:
    """Ingredients of the maintainability index.

    volume            Halstead volume, must be > 0 wherever a log is taken
    cyclomatic        decision-point complexity, >= 0
    loc               lines of code, must be >= 1 wherever a log is taken
    comment_fraction  fraction of commented lines in [0, 1]; only the
                      comment-bonus variants require it
    """

    volume: float
    cyclomatic: float
    loc: float
    comment_fraction: float | None = None


@dataclass(frozen=True)
class MiScore:
    value: float
    variant: str
    band: str | None = None  # only clamped variants are banded


def _check_log_domain(inputs: MiInputs) -> None:
    if not (inputs.volume > 0):
        raise MiDomainError(f"Halstead volume must be > 0, got {inputs.volume}")
    if not (inputs.loc >= 1):
        raise MiDomainError(f"lines of code must be >= 1, got {inputs.loc}")
    if inputs.cyclomatic < 0:
        raise MiDomainError(f"cyclomatic complexity must be >= 0, got {inputs.cyclomatic}")


def _comment_fraction(inputs: MiInputs) -> float:
    c = inputs.comment_fraction
    if c is None:
        raise MiDomainError("comment fraction is required by this variant but was not given")
    if not (0.0 <= c <= 1.0):
        raise MiDomainError(f"comment fraction must lie in [0, 1], got {c}")
    return c


def _body(inputs: MiInputs) -> float:
    # 171 - 5.2 ln V - 0.23 G - 16.2 ln L
    return (
        171.0
        - 5.2 * math.log(inputs.volume)
        - 0.23 * inputs.cyclomatic
        - 16.2 * math.log(inputs.loc)
    )


def mi_coleman(inputs: MiInputs) -> MiScore:
    """Original index: 171 - 5.2 ln V - 0.23 G - 16.2 ln L. May be negative."""
    _check_log_domain(inputs)
    return MiScore(value=_body(inputs), variant="coleman")


def mi_sei(inputs: MiInputs) -> MiScore:
    """SEI derivative: base-2 logs plus 50*sin(sqrt(2.4*C)). Unclamped."""
    _check_log_domain(inputs)
    c = _comment_fraction(inputs)
    value = (
        171.0
        - 5.2 * math.log2(inputs.volume)
        - 0.23 * inputs.cyclomatic
        - 16.2 * math.log2(inputs.loc)
        + 50.0 * math.sin(math.sqrt(2.4 * c))
    )
    return MiScore(value=value, variant="sei")


def mi_clamped(inputs: MiInputs, variant: str) -> MiScore:
    """Rescaled 0..100 variants, banded.

    ``visual_studio`` rescales the plain body by 100/171 and floors at 0;
    ``radon`` does the same to the body plus the 50*sin(sqrt(2.4*C))
    comment bonus. Both results are clamped to [0, 100].
    """
    if variant not in CLAMPED_VARIANTS:
        raise ValueError(f"unknown clamped variant {variant!r}; expected one of {CLAMPED_VARIANTS}")
    _check_log_domain(inputs)
    body = _body(inputs)
    if variant == "radon":
        body += 50.0 * math.sin(math.sqrt(2.4 * _comment_fraction(inputs)))
    value = min(100.0, max(0.0, body * 100.0 / 171.0))
    return MiScore(value=value, variant=variant, band=classify_band(value))


def classify_band(score: float) -> str:
    """Map a clamped score to its maintainability band.

    [0, 10) -> Red, [10, 20) -> Yellow, [20, 100] -> Green. The printed
    thresholds (0-9 / 10-19 / 20-100) leave the gaps (9,10) and (19,20)
    unassigned; half-open intervals make the classification total.
    """
    if not (0.0 <= score <= 100.0):
        raise MiDomainError(f"band is defined on [0, 100] only, got {score}")
    if score < 10.0:
        return RED
    if score < 20.0:
        return YELLOW
    return GREEN


def compute_mi(inputs: MiInputs, variant: str) -> MiScore:
    """Dispatch to the requested variant."""
    if variant == "coleman":
        return mi_coleman(inputs)
    if variant == "sei":
        return mi_sei(inputs)
    if variant in CLAMPED_VARIANTS:
        return mi_clamped(inputs, variant)
    raise ValueError(f"unknown MI variant {variant!r}; expected one of {VARIANTS}")
