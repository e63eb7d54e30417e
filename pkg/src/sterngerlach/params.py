"""Model constants, spin labels and the sampled-slice containers.

Every formula downstream is evaluated in canonical units where the packet
width, the friction rate and the mass are all one (``sigma = gamma = m = 1``).
Lengths are then measured in ``sigma``, wavenumbers in ``1/sigma`` and time
by the scaled time ``tau = gamma * t``.  The five dimensionless groups in
:class:`DimensionlessGroups` carry everything else; the conversion from
dimensional inputs happens once, in :func:`to_dimensionless`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .errors import InvalidValue, NonFiniteParameter, NonPositiveParameter, UnnormalizedSpinState


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional model constants in one consistent unit system.

    ``D`` is the momentum diffusion coefficient, ``epsilon`` the force
    (field gradient times magnetic moment), ``lam`` the spin splitting
    energy and ``pbar`` the mean wavenumber of the initial packet
    ``exp(i pbar x - x**2 / 2 sigma**2)``.
    """

    m: float
    gamma: float
    D: float
    epsilon: float
    lam: float
    hbar: float
    sigma: float
    pbar: float

    def __post_init__(self):
        for name in ("m", "gamma", "D", "epsilon", "lam", "hbar", "sigma", "pbar"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonFiniteParameter(name)
        for name in ("m", "gamma", "hbar", "sigma"):
            if getattr(self, name) <= 0:
                raise NonPositiveParameter(name)
        if self.D < 0:
            raise NonPositiveParameter("D")


@dataclass(frozen=True)
class DimensionlessGroups:
    """The control ratios of the model in canonical units.

    eps_t = epsilon / (m gamma^2 sigma), d_t = D / (m^2 gamma^3 sigma^2),
    h_t = hbar / (m gamma sigma^2), p_t = pbar * sigma, lam_t = lam / (hbar gamma).
    """

    eps_t: float
    d_t: float
    h_t: float
    p_t: float
    lam_t: float = 0.0

    def __post_init__(self):
        for name in ("eps_t", "d_t", "h_t", "p_t", "lam_t"):
            if not math.isfinite(getattr(self, name)):
                raise NonFiniteParameter(name)
        if self.h_t <= 0:
            raise NonPositiveParameter("h_t")
        if self.d_t < 0:
            raise NonPositiveParameter("d_t")

    def replace(self, **changes) -> "DimensionlessGroups":
        values = {k: getattr(self, k) for k in ("eps_t", "d_t", "h_t", "p_t", "lam_t")}
        values.update(changes)
        return DimensionlessGroups(**values)


# Figure 1 caption: eps/(m gamma^2) = 2 sigma, D/(m^2 gamma^3) = sigma^2,
# m gamma / hbar = 0.5 / sigma^2, pbar = 0.2 / sigma.
FIG1_GROUPS = DimensionlessGroups(eps_t=2.0, d_t=1.0, h_t=2.0, p_t=0.2, lam_t=0.0)

Params = Union[PhysicalParams, DimensionlessGroups]


def make_params(m, gamma, D, epsilon, lam, hbar, sigma, pbar) -> PhysicalParams:
    return PhysicalParams(
        m=float(m), gamma=float(gamma), D=float(D), epsilon=float(epsilon),
        lam=float(lam), hbar=float(hbar), sigma=float(sigma), pbar=float(pbar),
    )


def params_from_temperature(m, gamma, kT, epsilon, lam, hbar, sigma, pbar) -> PhysicalParams:
    """Build parameters for an oscillator bath at temperature ``kT``: D = 2 gamma m kT."""
    if not math.isfinite(kT):
        raise NonFiniteParameter("kT")
    if kT < 0:
        raise NonPositiveParameter("kT")
    return make_params(m, gamma, 2.0 * gamma * m * kT, epsilon, lam, hbar, sigma, pbar)


def to_dimensionless(p: PhysicalParams) -> DimensionlessGroups:
    return DimensionlessGroups(
        eps_t=p.epsilon / (p.m * p.gamma**2 * p.sigma),
        d_t=p.D / (p.m**2 * p.gamma**3 * p.sigma**2),
        h_t=p.hbar / (p.m * p.gamma * p.sigma**2),
        p_t=p.pbar * p.sigma,
        lam_t=p.lam / (p.hbar * p.gamma),
    )


def from_dimensionless(g: DimensionlessGroups, sigma: float, gamma: float, m: float) -> PhysicalParams:
    """Inverse of :func:`to_dimensionless` once the three unit scales are fixed."""
    hbar = g.h_t * m * gamma * sigma**2
    return make_params(
        m=m,
        gamma=gamma,
        D=g.d_t * m**2 * gamma**3 * sigma**2,
        epsilon=g.eps_t * m * gamma**2 * sigma,
        lam=g.lam_t * hbar * gamma,
        hbar=hbar,
        sigma=sigma,
        pbar=g.p_t / sigma,
    )


def as_groups(params: Params) -> DimensionlessGroups:
    if isinstance(params, DimensionlessGroups):
        return params
    if isinstance(params, PhysicalParams):
        return to_dimensionless(params)
    raise TypeError(f"expected PhysicalParams or DimensionlessGroups, got {type(params).__name__}")


class Spin(enum.IntEnum):
    UP = 1
    DOWN = -1

    @property
    def label(self) -> str:
        return self.name.lower()


class SpinPair(NamedTuple):
    """Row and column spin of a density-matrix block."""

    s: Spin
    s_prime: Spin

    @property
    def diagonal(self) -> bool:
        return self.s == self.s_prime

    @property
    def sign(self) -> int:
        """+1 for up-up and up-down, -1 for down-down and down-up."""
        return int(self.s)

    @property
    def label(self) -> str:
        return f"{self.s.label}-{self.s_prime.label}"

    @classmethod
    def from_label(cls, label: str) -> "SpinPair":
        try:
            a, b = label.split("-")
            return cls(Spin[a.upper()], Spin[b.upper()])
        except (ValueError, KeyError):
            raise InvalidValue("block", label) from None


UP_UP = SpinPair(Spin.UP, Spin.UP)
DOWN_DOWN = SpinPair(Spin.DOWN, Spin.DOWN)
UP_DOWN = SpinPair(Spin.UP, Spin.DOWN)
DOWN_UP = SpinPair(Spin.DOWN, Spin.UP)
ALL_PAIRS = (UP_UP, DOWN_DOWN, UP_DOWN, DOWN_UP)


@dataclass(frozen=True)
class SpinState:
    """Amplitudes of ``a|up> + b|down>``."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if not abs(norm - 1.0) <= 1e-12:
            raise UnnormalizedSpinState(f"|a|^2 + |b|^2 = {norm!r}, expected 1")

    @property
    def p_up(self) -> float:
        return abs(self.a) ** 2

    @property
    def p_down(self) -> float:
        return abs(self.b) ** 2

    def weight(self, pair: SpinPair) -> complex:
        """Coefficient multiplying the unit-trace block ``pair`` in the composite state."""
        amp = {Spin.UP: self.a, Spin.DOWN: self.b}
        return amp[pair.s] * amp[pair.s_prime].conjugate()


class Representation(str, enum.Enum):
    QR = "qr"
    MOMENTUM = "momentum"
    POSITION = "position"


AXIS_LABELS = {
    Representation.QR: ("Q", "r"),
    Representation.MOMENTUM: ("Q", "q"),
    Representation.POSITION: ("R", "r"),
}


class Axis(NamedTuple):
    min: float
    max: float
    count: int

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.min])
        return np.linspace(self.min, self.max, self.count)

    @property
    def step(self) -> float:
        return (self.max - self.min) / (self.count - 1)


@dataclass(frozen=True)
class GridSpec:
    axis1: Axis
    axis2: Axis
    labels: tuple[str, str] = ("Q", "r")

    def __post_init__(self):
        object.__setattr__(self, "axis1", Axis(float(self.axis1[0]), float(self.axis1[1]), int(self.axis1[2])))
        object.__setattr__(self, "axis2", Axis(float(self.axis2[0]), float(self.axis2[1]), int(self.axis2[2])))
        object.__setattr__(self, "labels", tuple(self.labels))
        for name, ax in (("axis1", self.axis1), ("axis2", self.axis2)):
            if ax.count == 1 and ax.min == ax.max:
                continue  # a single line cut, e.g. one Q column
            if ax.count < 2:
                raise InvalidValue(name, "count must be >= 2")
            if not ax.min < ax.max:
                raise InvalidValue(name, "min must be < max")

    @classmethod
    def for_rep(cls, rep: Representation, axis1, axis2) -> "GridSpec":
        return cls(axis1, axis2, AXIS_LABELS[Representation(rep)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.axis1.count, self.axis2.count)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis1.values(), self.axis2.values(), indexing="ij")


PROVENANCES = ("analytic", "char-oracle", "pde-oracle")


@dataclass(frozen=True, eq=False)
class DensitySlice:
    """A sampled density-matrix block; ``values[i, j]`` sits at (axis1[i], axis2[j])."""

    representation: Representation
    block: str
    tau: float
    grid: GridSpec
    values: np.ndarray
    provenance: str = "analytic"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "representation", Representation(self.representation))
        values = np.asarray(self.values, dtype=complex)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.shape != self.grid.shape:
            raise InvalidValue("values", f"shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidValue("values", "non-finite entries")
        if self.provenance not in PROVENANCES:
            raise InvalidValue("provenance", self.provenance)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return self.grid.axis1.values(), self.grid.axis2.values()

    def same_as(self, other: "DensitySlice") -> bool:
        return (
            self.representation == other.representation
            and self.block == other.block
            and self.tau == other.tau
            and self.grid == other.grid
            and self.provenance == other.provenance
            and np.array_equal(self.values, other.values)
        )
