"""Named parameter sets for the microwave-cavity scenario, all in rad/s."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

from jcm_berry.errors import InvalidParameterError
from jcm_berry.models.params import (
    GammaUnits,
    JcmParams,
    RamanParams,
    StarkConvention,
    gamma_from_khz,
    khz_to_angular,
)

CAVITY_G_KHZ = 50.0
CAVITY_OMEGA0_KHZ = 173.0  # Omega_1 = pi condition with the g^2 Stark term neglected
CAVITY_DECAY_KHZ = 1.0  # cavity decay time of about 1 ms


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    jcm: JcmParams
    raman: RamanParams | None = None


def _raman_preset(name: str, description: str, omega0: float, units: GammaUnits) -> Preset:
    raman = RamanParams(omega0=omega0, g=khz_to_angular(CAVITY_G_KHZ), delta=3.0 * omega0)
    jcm = raman.to_jcm_params(StarkConvention.ELIMINATED).updated(
        gamma_decay=gamma_from_khz(CAVITY_DECAY_KHZ, units)
    )
    return Preset(
        name=name,
        description=f"{description}, Gamma = 1 kHz ({units.value})",
        jcm=jcm,
        raman=raman,
    )


def _cavity(units: GammaUnits) -> Preset:
    return _raman_preset(
        "paper-cavity",
        "g/2pi = 50 kHz, Omega0/2pi = 173 kHz, delta = 3 Omega0",
        khz_to_angular(CAVITY_OMEGA0_KHZ),
        units,
    )


def _cavity_exact(units: GammaUnits) -> Preset:
    g = khz_to_angular(CAVITY_G_KHZ)
    return _raman_preset(
        "paper-cavity-exact",
        "Omega0 = (2 + sqrt 3) g, the exact root of Delta_1 = 2 sqrt 3 lambda_1",
        (2.0 + math.sqrt(3.0)) * g,
        units,
    )


def _fringe_preset(units: GammaUnits) -> Preset:
    coupling = khz_to_angular(CAVITY_G_KHZ) / 3.0
    jcm = JcmParams.from_detuning(
        delta_m=2.0 * math.sqrt(3.0) * coupling,
        lambda_m=coupling,
        gamma_decay=gamma_from_khz(CAVITY_DECAY_KHZ, units),
    )
    return Preset(
        name="paper-fig4",
        description=(
            f"lambda_1 = g/3, Delta_1 = 2 sqrt 3 lambda_1 (theta_01 = pi/6), "
            f"Gamma = 1 kHz ({units.value})"
        ),
        jcm=jcm,
    )


PRESETS: dict[str, Callable[[GammaUnits], Preset]] = {
    "paper-cavity": _cavity,
    "paper-cavity-exact": _cavity_exact,
    "paper-fig4": _fringe_preset,
}

# short names kept from earlier releases
PRESET_ALIASES: dict[str, str] = {
    "cavity": "paper-cavity",
    "cavity-exact": "paper-cavity-exact",
    "fringes": "paper-fig4",
}

RAMAN_PRESETS = ("paper-cavity", "paper-cavity-exact")


def preset_names() -> list[str]:
    """Canonical names followed by their aliases, as accepted on the command line."""
    return [*sorted(PRESETS), *sorted(PRESET_ALIASES)]


def get_preset(name: str, gamma_units: GammaUnits = GammaUnits.ORDINARY) -> Preset:
    """Look up a preset by name or alias; `gamma_units` sets how Gamma = 1 kHz is read."""
    try:
        factory = PRESETS[PRESET_ALIASES.get(name, name)]
    except KeyError:
        known = ", ".join(preset_names())
        raise InvalidParameterError(f"Unknown preset {name!r}; choose one of: {known}") from None
    return factory(gamma_units)
