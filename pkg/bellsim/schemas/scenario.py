import cmath
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from bellsim.config import settings
from bellsim.core.teleport import InputReading, ManipulationLabel


class ScenarioBase(BaseModel):
    manipulation: ManipulationLabel
    n: int = Field(..., ge=1, le=2)
    alpha: Optional[float] = None # модуль когерентной амплитуды (ножницы, обращение)
    alpha_phase: float = 0.0
    lam: Optional[float] = Field(None, ge=0.0, lt=1.0)
    lam_prime: Optional[float] = Field(None, ge=0.0, lt=1.0) # сжатие ресурса GB, λ′ = rλ
    swapped: bool = False
    reading: InputReading = InputReading.FULL

    @model_validator(mode="after")
    def check_parameters(self):
        label = self.manipulation
        if label == ManipulationLabel.CUSTOM:
            raise ValueError("custom manipulations are built in code, not from scenario files")
        if label in (ManipulationLabel.SCISSORS, ManipulationLabel.REVERSAL) and self.alpha is None:
            raise ValueError(f"{label.value} needs 'alpha'")
        if label in (ManipulationLabel.GENERALIZED_BELL_PREP, ManipulationLabel.MSV_PREP):
            if self.lam is None or self.lam == 0:
                raise ValueError(f"{label.value} needs a positive 'lam'")
        if label == ManipulationLabel.GENERALIZED_BELL_PREP and self.lam_prime is None:
            raise ValueError("generalized_bell_prep needs 'lam_prime'")
        return self

    @property
    def alpha_complex(self) -> complex:
        return cmath.rect(self.alpha or 0.0, self.alpha_phase)


class ScenarioCreate(ScenarioBase):
    order: str = settings.DEFAULT_ORDER
    eta: List[float] = [1.0, 0.9, 0.8, 0.7]
    nu: List[float] = [0.0, 1e-4, 0.05, 0.1]
    success_probability: bool = True # столбец вероятности успеха в кривой

    @model_validator(mode="after")
    def check_grid(self):
        if any(not 0.0 <= e <= 1.0 for e in self.eta):
            raise ValueError("every eta must lie in [0, 1]")
        if any(v < 0.0 for v in self.nu):
            raise ValueError("every nu must be nonnegative")
        return self
