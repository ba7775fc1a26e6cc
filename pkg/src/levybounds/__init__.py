"""Explicit Wasserstein and total-variation bounds between marginals of
one-dimensional Levy processes, with certified Fourier-distance lower bounds
and Monte Carlo certification."""

from .measures import (
    DensityBased,
    FiniteDiscrete,
    IntegrabilityError,
    LevyMeasure,
    LevyTriplet,
    StablePower,
    TwoPoint,
    ZeroMeasure,
)

__all__ = [
    "DensityBased",
    "FiniteDiscrete",
    "IntegrabilityError",
    "LevyMeasure",
    "LevyTriplet",
    "StablePower",
    "TwoPoint",
    "ZeroMeasure",
]

__version__ = "0.1.0"
