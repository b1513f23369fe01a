"""Problem data: Hamiltonian, integrand family, projection interval, options."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import BiPoly, RatFunc, SurdValue
from ..algebra.surd import Infinity


@dataclass(frozen=True)
class HamiltonianSpec:
    """H = A(x) + B(x) y^(2m) (quadratic mode) or Phi(x) + Psi(y) (separated mode, B None)."""

    A: RatFunc
    B: RatFunc | None = None
    m: int = 1
    Psi: RatFunc | None = None
    h_max: SurdValue | None = None

    @property
    def mode(self) -> str:
        return "quadratic" if self.B is not None else "separated"


@dataclass(frozen=True)
class IntegrandFamily:
    """f_0..f_{n-1} paired with g(y) = y^(2s-1) (quadratic mode) or an explicit g."""

    f: tuple[RatFunc, ...]
    s: int | None = None
    g: RatFunc | None = None

    @property
    def n(self) -> int:
        return len(self.f)


@dataclass(frozen=True)
class ProjectionInterval:
    x_left: SurdValue
    x_right: SurdValue | Infinity
    y_right: SurdValue | Infinity | None = None
    y_left: SurdValue | None = None


@dataclass(frozen=True)
class CertifyOptions:
    preprocess: str = "auto"  # "auto" or "none"
    numeric_branch_filter: bool = True
    q_hint: BiPoly | None = None
    resultant_strategy: str = "bareiss"
    refine_shared_factor: bool = True
    isolate_width: float = 1e-6
    slope: str = "level"  # "level": A'(x)/A'(z); "curve": -q_x/q_z


@dataclass(frozen=True)
class Problem:
    """A fully parsed problem file."""

    name: str
    hamiltonian: HamiltonianSpec
    family: IntegrandFamily
    interval: ProjectionInterval
    options: CertifyOptions = field(default_factory=CertifyOptions)

    @property
    def mode(self) -> str:
        return self.hamiltonian.mode
