from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class InterferometerFile(BaseModel):
    M: int = Field(..., ge=2)
    U_re: List[List[float]]
    U_im: List[List[float]]

    @model_validator(mode="after")
    def check_shape(self):
        for name in ("U_re", "U_im"):
            rows = getattr(self, name)
            if len(rows) != self.M or any(len(r) != self.M for r in rows):
                raise ValueError(f"{name} must be an {self.M}x{self.M} matrix")
        return self

    def matrix(self) -> np.ndarray:
        return np.array(self.U_re, dtype=float) + 1j * np.array(self.U_im, dtype=float)

    @classmethod
    def from_matrix(cls, U: np.ndarray) -> "InterferometerFile":
        U = np.asarray(U, dtype=complex)
        return cls(M=U.shape[0], U_re=U.real.tolist(), U_im=U.imag.tolist())


class BeamSplitterResponse(BaseModel):
    m: int
    n: int
    theta: float
    phi: float
    transmissivity: float

    model_config = ConfigDict(from_attributes=True)


class DecompositionResponse(BaseModel):
    M: int
    rotations: List[BeamSplitterResponse] = []
    phases_re: List[float]
    phases_im: List[float]
    reconstruction_error: float
