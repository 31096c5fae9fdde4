"""Exact coefficient rings: the integers, the rationals, and prime fields.

Scalars are plain Python objects: ``int`` for Z and F_p (normalized to
0..p-1), ``fractions.Fraction`` for Q.  A :class:`RingSpec` bundles the
arithmetic so matrices can stay ring-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class UnsupportedRing(Exception):
    """Raised when an operation needs a ring it does not support."""


class BadParameter(ValueError):
    """Raised on invalid constructor parameters."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of Z, Q, or F_p (p prime).

    kind is "Z", "Q" or "F"; p is set only for prime fields.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise BadParameter(f"unknown ring kind {self.kind!r}")
        if self.kind == "F":
            if self.p is None or not _is_prime(self.p):
                raise BadParameter(f"{self.p} is not prime")
        elif self.p is not None:
            raise BadParameter("p is only meaningful for prime fields")

    # -- predicates ---------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def char(self) -> int:
        return self.p if self.kind == "F" else 0

    # -- arithmetic ---------------------------------------------------

    def normalize(self, x):
        if self.kind == "F":
            return int(x) % self.p
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise BadParameter(f"{x} is not an integer")
            return int(x)
        return int(x)

    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "F" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "F" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "F" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "F" else -a

    def inv(self, a):
        if self.kind == "F":
            return pow(a, self.p - 2, self.p)
        if self.kind == "Q":
            return 1 / Fraction(a)
        if a in (1, -1):
            return a
        raise UnsupportedRing(f"{a} is not invertible over Z")

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, n: int):
        return self.normalize(n)

    # -- text ----------------------------------------------------------

    def format_scalar(self, x) -> str:
        return str(x)

    def parse_scalar(self, s: str):
        s = s.strip()
        if "/" in s:
            if self.kind != "Q":
                raise BadParameter(f"fraction {s!r} not valid over {self}")
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return self.normalize(int(s))

    def __str__(self) -> str:
        return f"F{self.p}" if self.kind == "F" else self.kind


ZZ = RingSpec("Z")
QQ = RingSpec("Q")


def GF(p: int) -> RingSpec:
    return RingSpec("F", p)


def ring_from_name(name: str) -> RingSpec:
    name = name.strip()
    if name in ("Z", "ZZ", "int"):
        return ZZ
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    if name.startswith("GF(") and name.endswith(")"):
        return GF(int(name[3:-1]))
    raise BadParameter(f"unknown ring {name!r}")
