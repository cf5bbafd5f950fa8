"""
Detector configuration schema.

Symbols follow the detection literature: M is the QRD-MLD breadth, X the
threshold factor of the improved QRD-MLD, L the list bound of the bounded
Dijkstra search and N the number of candidates to output.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field


class Algorithm(str, Enum):
    """Enumeration for detection algorithms"""
    BRUTE_FORCE_ML = "bruteforce_ml"
    QRD_MLD = "qrd_mld"
    QRD_MLD_IMPROVED = "qrd_mld_improved"
    DIJKSTRA_BOUNDED = "dijkstra_bounded"
    DIJKSTRA_UNBOUNDED = "dijkstra_unbounded"
    BEST_FIRST_ML = "best_first_ml"
    GREEDY = "greedy"


class DetectorConfig(BaseModel):
    """Schema for one detector in an experiment"""
    algorithm: Algorithm
    M: int = Field(16, ge=1)
    X: float = Field(2.0, ge=0.0)
    L: int = Field(16, ge=1)
    N: int = Field(1, ge=1)
    # phi^2 of the current SNR point; the sweep fills it in per point
    noise_variance: Optional[float] = Field(None, gt=0.0)

    class Config:
        allow_mutation = False
        use_enum_values = False

    @property
    def label(self) -> str:
        """Stable, CSV-safe name used in result tables"""
        names = {
            Algorithm.BRUTE_FORCE_ML: "ml-bruteforce",
            Algorithm.DIJKSTRA_UNBOUNDED: "ml-dijkstra",
            Algorithm.BEST_FIRST_ML: "ml-best-first",
            Algorithm.QRD_MLD: f"qrd-mld-M{self.M}",
            Algorithm.QRD_MLD_IMPROVED: f"qrd-mld-improved-M{self.M}-X{self.X:g}",
            Algorithm.DIJKSTRA_BOUNDED: f"dijkstra-L{self.L}",
            Algorithm.GREEDY: "greedy",
        }
        label = names[self.algorithm]
        if self.N > 1:
            label += f"-N{self.N}"
        return label

    def with_noise_variance(self, noise_variance: float) -> "DetectorConfig":
        return DetectorConfig(**{**self.dict(), "noise_variance": float(noise_variance)})
