"""Two-qubit states distributed by a single network source."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import qmath

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class Singlet:
    is_pure = True

    def ket(self) -> np.ndarray:
        return SINGLET.copy()

    def label(self) -> str:
        return "singlet"


@dataclass(frozen=True, eq=False)
class Product:
    u: np.ndarray
    v: np.ndarray
    is_pure = True

    def __post_init__(self):
        for name in ("u", "v"):
            x = np.asarray(getattr(self, name), dtype=complex)
            if x.shape != (2,):
                raise ValueError(f"product factor {name} must be a single qubit")
            if abs(np.linalg.norm(x) - 1) > qmath.TOL.equality:
                raise ValueError(f"product factor {name} is not normalized")
            object.__setattr__(self, name, x)

    def __eq__(self, other):
        return (
            isinstance(other, Product)
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
        )

    def __hash__(self):
        return hash((tuple(self.u), tuple(self.v)))

    def ket(self) -> np.ndarray:
        return np.kron(self.u, self.v)

    def label(self) -> str:
        def fmt(z: complex) -> str:
            return f"{z.real:.17g}{z.imag:+.17g}i"

        return "product:" + ";".join(",".join(fmt(z) for z in f) for f in (self.u, self.v))


@dataclass(frozen=True)
class Partial:
    """alpha|01> + phase * sqrt(1 - alpha^2)|10>.

    ``phase=-1`` (default) makes ``Partial(1/sqrt2)`` the singlet; ``phase=+1``
    is the literal ``alpha|01> + beta|10>`` family.
    """

    alpha: float
    phase: int = -1
    is_pure = True

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha={self.alpha} outside [0, 1]")
        if self.phase not in (1, -1):
            raise ValueError("phase must be +1 or -1")

    def ket(self) -> np.ndarray:
        beta = np.sqrt(max(0.0, 1.0 - self.alpha**2))
        return np.array([0, self.alpha, self.phase * beta, 0], dtype=complex)

    def label(self) -> str:
        prefix = "partial" if self.phase == -1 else "partial+"
        return f"{prefix}:{self.alpha:.17g}"


@dataclass(frozen=True)
class Werner:
    """V |psi-><psi-| + (1 - V) I/4, anchored on the singlet."""

    v: float
    is_pure = False

    def __post_init__(self):
        if not 0.0 <= self.v <= 1.0:
            raise ValueError(f"visibility V={self.v} outside [0, 1]")

    def label(self) -> str:
        return f"werner:{self.v:.17g}"


SourceSpec = Union[Singlet, Product, Partial, Werner]


def realize(spec: SourceSpec) -> np.ndarray:
    """Density matrix of the distributed state."""
    if isinstance(spec, Werner):
        return spec.v * qmath.dm(SINGLET) + (1 - spec.v) * np.eye(4) / 4
    if isinstance(spec, (Singlet, Product, Partial)):
        return qmath.dm(spec.ket())
    raise TypeError(f"unknown source spec {spec!r}")


def reference_product() -> Product:
    """(|0> - |1>)/sqrt2 (x) |1>, the normalized (|01> - |11>)/sqrt2."""
    return Product(np.array([1, -1], dtype=complex) / np.sqrt(2), np.array([0, 1], dtype=complex))


PATTERN_RE = re.compile(r"^[sp]+$")


def _parse_complex(text: str) -> complex:
    text = text.strip().replace(" ", "")
    if text.endswith("i"):
        text = text[:-1] + "j"
    return complex(text)


def parse_source(text: str) -> SourceSpec:
    """Parse one source literal.

    Accepted forms: ``singlet``, ``product``, ``partial:A``, ``partial+:A``,
    ``werner:V`` and ``product:u0,u1;v0,v1`` (complex literals such as
    ``0.5+0.5i``; factors are normalized).
    """
    text = text.strip()
    kind, _, arg = text.partition(":")
    kind = kind.lower()
    try:
        if kind == "singlet" and not arg:
            return Singlet()
        if kind == "product" and not arg:
            return reference_product()
        if kind == "product":
            u_text, v_text = arg.split(";")
            u = qmath.normalize([_parse_complex(z) for z in u_text.split(",")])
            v = qmath.normalize([_parse_complex(z) for z in v_text.split(",")])
            return Product(u, v)
        if kind == "partial":
            return Partial(float(arg))
        if kind == "partial+":
            return Partial(float(arg), phase=1)
        if kind == "werner":
            return Werner(float(arg))
    except ValueError as exc:
        raise ValueError(f"bad source literal {text!r}: {exc}") from exc
    raise ValueError(f"unknown source literal {text!r}")


def parse_sources(text: str) -> tuple[SourceSpec, ...]:
    """Either a pattern like ``ssp`` (s=singlet, p=reference product) or a
    whitespace-separated list of source literals."""
    text = text.strip()
    if PATTERN_RE.match(text):
        return tuple(Singlet() if c == "s" else reference_product() for c in text)
    items = text.split()
    if not items:
        raise ValueError("empty source list")
    return tuple(parse_source(item) for item in items)
