"""Parameter models and Hamiltonian builders."""

from jcm_berry.models.hamiltonians import (
    Harmonic,
    OperatorFamily,
    build_jcm_dissipative,
    build_jcm_frame,
    build_jcm_lab,
    build_jcm_phi,
    build_raman_effective,
    build_raman_full,
    jcm_loop_family,
    multiphoton_coupling,
)
from jcm_berry.models.params import (
    BerryMethod,
    Branch,
    GammaMode,
    GammaUnits,
    JcmParams,
    RamanParams,
    StarkConvention,
    gamma_from_khz,
    khz_to_angular,
)

__all__ = [
    "BerryMethod",
    "Branch",
    "GammaMode",
    "GammaUnits",
    "Harmonic",
    "JcmParams",
    "OperatorFamily",
    "RamanParams",
    "StarkConvention",
    "build_jcm_dissipative",
    "build_jcm_frame",
    "build_jcm_lab",
    "build_jcm_phi",
    "build_raman_effective",
    "build_raman_full",
    "gamma_from_khz",
    "jcm_loop_family",
    "khz_to_angular",
    "multiphoton_coupling",
]
