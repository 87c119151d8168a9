"""Modular objects of cyclic separating vectors on finite-dimensional factor models."""

from .errors import ModularError
from .finite_factor import AntilinearMap, FactorContext
from .modular_engine import ModularObjects, modular_objects, tomita_oracle
from .spectral_classifier import DeltaSpectrum, FactorType, GeometricTail, SpectralData

__all__ = [
    "AntilinearMap",
    "DeltaSpectrum",
    "FactorContext",
    "FactorType",
    "GeometricTail",
    "ModularError",
    "ModularObjects",
    "SpectralData",
    "modular_objects",
    "tomita_oracle",
]
