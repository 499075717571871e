"""Quantum geometry and Cramer-Rao bound toolkit for parametrised quantum states."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError, Degenerate, DimMismatch, GapClosing, InvalidCount, InvalidDensity,
    InvalidSpin, NonHermitianInput, QGBoundError, WrongArity, WrongDimension,
)
from .geometry import GeometricTensor, build_generators, qgt_fd, qgt_perturbative  # noqa: E402
from .models import BlochModel, TIParams, ti_model, two_band_model  # noqa: E402
