"""Exact parity functional equations for multiple polylogarithms."""

__version__ = "0.1.0"

from .engine import ENGINE, Engine, PliResult, pli, reglim_z1
from .roots import (
    CzvCombination,
    RootOfUnity,
    ber_at_root,
    reduce_mzv_depth2,
    reduce_mzv_depth3,
    specialize,
)
from .terms import ConsProd, Generator, LiFactor, LinComb

__all__ = [
    "ENGINE",
    "Engine",
    "PliResult",
    "pli",
    "reglim_z1",
    "CzvCombination",
    "RootOfUnity",
    "ber_at_root",
    "reduce_mzv_depth2",
    "reduce_mzv_depth3",
    "specialize",
    "ConsProd",
    "Generator",
    "LiFactor",
    "LinComb",
    "__version__",
]
