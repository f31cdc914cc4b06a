"""Parameter models and enums shared by every layer."""

from __future__ import annotations

import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class Branch(str, Enum):
    """Dressed-state branch."""

    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1

    @classmethod
    def parse(cls, value: str | int | Branch) -> Branch:
        if isinstance(value, Branch):
            return value
        text = str(value).strip().lower()
        if text in {"+", "+1", "1", "plus"}:
            return cls.PLUS
        if text in {"-", "-1", "minus"}:
            return cls.MINUS
        raise ValueError(f"Unknown branch {value!r}: use '+' or '-'")


class BerryMethod(str, Enum):
    """How a Berry phase was obtained."""

    ANALYTIC = "analytic"
    WILSON = "wilson"
    ADIABATIC = "adiabatic"
    DISSIPATIVE_ANALYTIC = "dissipative-analytic"


class GammaMode(str, Enum):
    """Source of the geometric phase fed into the Ramsey protocol."""

    IDEAL = "ideal"  # vacuum phase of the closed system
    DISSIPATIVE = "dissipative"  # non-Hermitian closed form
    EXACT_PASSAGE = "exact-passage"  # simulated phi-loop


class GammaUnits(str, Enum):
    """Interpretation of a decay rate quoted in kHz."""

    ORDINARY = "ordinary"  # Gamma = 2 pi * f
    ANGULAR = "angular"  # Gamma = f, already rad/s


class StarkConvention(str, Enum):
    """Which form of the Raman effective Hamiltonian to build."""

    ANTINORMAL = "antinormal"  # g^2 a a^dagger s11, coupling e^{+i phi}
    ELIMINATED = "eliminated"  # second-order elimination: g^2 a^dag a s11, coupling e^{-i phi}


def khz_to_angular(value_khz: float) -> float:
    """Ordinary frequency in kHz -> angular frequency in rad/s."""
    return 2.0 * math.pi * value_khz * 1e3


def gamma_from_khz(value_khz: float, units: GammaUnits = GammaUnits.ORDINARY) -> float:
    """Decay rate in rad/s from a kHz figure under the chosen interpretation."""
    if units is GammaUnits.ORDINARY:
        return khz_to_angular(value_khz)
    return value_khz * 1e3


class JcmParams(BaseModel):
    """Everything parameterizing the frame, phi-dependent and dissipative JCM Hamiltonians.

    All rates are angular frequencies. `lambda_m = 0` is accepted for decoupled
    limits; operations that need a mixing angle reject lambda = Delta = 0.
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(default=1, ge=1)  # photon multiplicity
    nu: float = 0.0  # cavity frequency
    omega: float = 0.0  # atomic transition frequency
    lambda_m: float = Field(default=1.0, ge=0.0)
    phi: float = 0.0  # drive phase
    gamma_decay: float = Field(default=0.0, ge=0.0)  # cavity decay rate

    @model_validator(mode="after")
    def _finite(self) -> JcmParams:
        for name in ("nu", "omega", "lambda_m", "phi", "gamma_decay"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def delta_m(self) -> float:
        """Detuning omega - m nu."""
        return self.omega - self.m * self.nu

    @classmethod
    def from_detuning(
        cls,
        delta_m: float,
        lambda_m: float = 1.0,
        m: int = 1,
        phi: float = 0.0,
        gamma_decay: float = 0.0,
        nu: float = 0.0,
    ) -> JcmParams:
        """Build from the detuning directly (omega = delta_m + m nu)."""
        return cls(
            m=m,
            nu=nu,
            omega=delta_m + m * nu,
            lambda_m=lambda_m,
            phi=phi,
            gamma_decay=gamma_decay,
        )

    def updated(self, **changes: Any) -> JcmParams:
        """Validated copy with some fields replaced.

        `delta_m` may be passed and is converted to omega at the current nu and m.
        """
        data = self.model_dump(exclude={"delta_m"})
        delta = changes.pop("delta_m", None)
        data.update(changes)
        if delta is not None:
            data["omega"] = delta + data["m"] * data["nu"]
        return JcmParams.model_validate(data)


class RamanParams(BaseModel):
    """Three-level Raman configuration, angular frequencies."""

    model_config = ConfigDict(frozen=True)

    omega0: float = Field(ge=0.0)  # classical Rabi amplitude
    g: float = Field(ge=0.0)  # quantized-mode coupling
    delta: float = Field(gt=0.0)  # one-photon detuning
    phi: float = 0.0  # laser phase

    @computed_field  # type: ignore[prop-decorator]
    @property
    def lambda1(self) -> float:
        return self.omega0 * self.g / self.delta

    @computed_field  # type: ignore[prop-decorator]
    @property
    def delta1(self) -> float:
        """Effective detuning of the n=0 sector, (omega0^2 - g^2) / delta."""
        return (self.omega0**2 - self.g**2) / self.delta

    @computed_field  # type: ignore[prop-decorator]
    @property
    def detuning_ratio(self) -> float:
        """delta / max(g, omega0); validity of the reduction needs this well above 1."""
        scale = max(self.g, self.omega0)
        return math.inf if scale == 0.0 else self.delta / scale

    def to_jcm_params(
        self, convention: StarkConvention = StarkConvention.ELIMINATED
    ) -> JcmParams:
        """Project the n=0 sector of the effective model onto a one-photon JCM.

        The sector-mean Stark shift is dropped. ANTINORMAL keeps the a a^dagger
        ordering, which puts (omega0^2 - 2 g^2)/delta on the n=0 sector.
        """
        if convention is StarkConvention.ANTINORMAL:
            detuning = (self.omega0**2 - 2.0 * self.g**2) / self.delta
            phase = self.phi
        else:
            detuning = self.delta1
            phase = -self.phi
        return JcmParams.from_detuning(delta_m=detuning, lambda_m=self.lambda1, m=1, phi=phase)

    def scaled(self, factor: float) -> RamanParams:
        """Rescale delta by factor^2 and omega0, g by factor; lambda1 and delta1 are unchanged."""
        return RamanParams(
            omega0=self.omega0 * factor,
            g=self.g * factor,
            delta=self.delta * factor**2,
            phi=self.phi,
        )
