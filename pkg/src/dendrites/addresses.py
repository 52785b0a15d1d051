"""Addresses: digit streams over {0,1,2,3}, the index map, shifts, and PCF status.

An address is a finite prefix followed by an infinite tail.  Tails come in two
flavours:

* periodic tails, giving the eventually periodic words that make up almost all
  of the artifact's inputs (text notation ``pre(period)``, e.g. ``12(23)``);
* programmatic tails backed by a digit generator.  The Thue-Morse stream
  (``tmXY``, digits X and Y) carries a built-in aperiodicity certificate; a
  fixed finite stream answers queries only up to its horizon and is honest
  about knowing nothing beyond it.

Digits index from 0 internally.  A bare digit string denotes a multiindex,
not an address.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from .geometry import Point2, similarity_apply

if TYPE_CHECKING:  # pragma: no cover
    from .construction import SystemParams, SystemS

ALPHABET = (0, 1, 2, 3)

CENTROID_BARY = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


class HorizonExceeded(ValueError):
    """A digit query or operation reached past a programmatic tail's horizon."""


class AddressSyntaxError(ValueError):
    """Malformed address or multiindex text."""


def _check_digits(digits: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in digits)
    for d in out:
        if d not in ALPHABET:
            raise AddressSyntaxError(f"digit outside alphabet {{0,1,2,3}}: {d}")
    return out


@dataclass(frozen=True)
class PeriodicTail:
    period: tuple[int, ...]

    def digit(self, i: int) -> int:
        return self.period[i % len(self.period)]

    @property
    def horizon(self) -> int | None:
        return None

    @property
    def certified_aperiodic(self) -> bool:
        return False

    def shifted(self, k: int) -> "PeriodicTail":
        n = len(self.period)
        k %= n
        return PeriodicTail(self.period[k:] + self.period[:k])

    def alphabet(self) -> frozenset[int]:
        return frozenset(self.period)

    def text(self) -> str:
        return "(" + "".join(str(d) for d in self.period) + ")"


@dataclass(frozen=True)
class ThueMorseTail:
    """Thue-Morse stream over two digits, known to be aperiodic."""

    low: int
    high: int
    offset: int = 0
    horizon_value: int = 1 << 20

    def digit(self, i: int) -> int:
        j = i + self.offset
        if i >= self.horizon_value:
            raise HorizonExceeded(f"Thue-Morse tail queried at {i} beyond horizon {self.horizon_value}")
        return self.high if bin(j).count("1") % 2 else self.low

    @property
    def horizon(self) -> int | None:
        return self.horizon_value

    @property
    def certified_aperiodic(self) -> bool:
        return True

    def shifted(self, k: int) -> "ThueMorseTail":
        return ThueMorseTail(self.low, self.high, self.offset + k, self.horizon_value - k)

    def alphabet(self) -> frozenset[int]:
        return frozenset((self.low, self.high))

    def text(self) -> str:
        base = f"tm{self.low}{self.high}"
        return base if self.offset == 0 else f"{base}+{self.offset}"


@dataclass(frozen=True)
class FixedStreamTail:
    """Finite digit stream with an explicit unknown beyond its horizon."""

    digits: tuple[int, ...]

    def digit(self, i: int) -> int:
        if i >= len(self.digits):
            raise HorizonExceeded(f"fixed stream of length {len(self.digits)} queried at {i}")
        return self.digits[i]

    @property
    def horizon(self) -> int | None:
        return len(self.digits)

    @property
    def certified_aperiodic(self) -> bool:
        return False

    def shifted(self, k: int) -> "FixedStreamTail":
        if k > len(self.digits):
            raise HorizonExceeded(f"cannot shift fixed stream of length {len(self.digits)} by {k}")
        return FixedStreamTail(self.digits[k:])

    def alphabet(self) -> frozenset[int]:
        return frozenset(self.digits)

    def text(self) -> str:
        return "".join(str(d) for d in self.digits) + "?"


Tail = PeriodicTail | ThueMorseTail | FixedStreamTail


@dataclass(frozen=True)
class Address:
    """Infinite digit stream: finite prefix plus a tail."""

    prefix: tuple[int, ...]
    tail: Tail

    def __post_init__(self) -> None:
        _check_digits(self.prefix)
        if isinstance(self.tail, PeriodicTail):
            if not self.tail.period:
                raise AddressSyntaxError("period must be nonempty")
            _check_digits(self.tail.period)
        else:
            _check_digits(
                self.tail.alphabet() if isinstance(self.tail, ThueMorseTail) else self.tail.digits
            )

    def digit(self, i: int) -> int:
        """Digit at 0-based position ``i``."""

        if i < len(self.prefix):
            return self.prefix[i]
        return self.tail.digit(i - len(self.prefix))

    def digits(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(n))

    @property
    def horizon(self) -> int | None:
        h = self.tail.horizon
        return None if h is None else len(self.prefix) + h

    @property
    def is_eventually_periodic(self) -> bool:
        return isinstance(self.tail, PeriodicTail)

    @property
    def certified_aperiodic(self) -> bool:
        return self.tail.certified_aperiodic

    def alphabet(self) -> frozenset[int]:
        return frozenset(self.prefix) | self.tail.alphabet()

    def canonical(self) -> "Address":
        """Normal form: minimal period, shortest prefix.  Identity for generators."""

        if not isinstance(self.tail, PeriodicTail):
            return self
        period = list(self.tail.period)
        for q in range(1, len(period) + 1):
            if len(period) % q == 0 and period == period[:q] * (len(period) // q):
                period = period[:q]
                break
        prefix = list(self.prefix)
        while prefix and prefix[-1] == period[-1]:
            prefix.pop()
            period = [period[-1]] + period[:-1]
        return Address(tuple(prefix), PeriodicTail(tuple(period)))

    def text(self) -> str:
        return "".join(str(d) for d in self.prefix) + self.tail.text()

    def __str__(self) -> str:  # pragma: no cover
        return self.text()


def periodic(prefix: Iterable[int] | str, period: Iterable[int] | str) -> Address:
    """Convenience constructor for eventually periodic addresses."""

    pre = tuple(int(c) for c in prefix) if isinstance(prefix, str) else tuple(prefix)
    per = tuple(int(c) for c in period) if isinstance(period, str) else tuple(period)
    return Address(pre, PeriodicTail(per))


_ADDRESS_RE = re.compile(r"^([0-3]*)(?:\(([0-3]+)\)|tm([0-3])([0-3])|([0-3]+)\?)$")


def parse_address(text: str) -> Address:
    """Parse address notation: ``pre(period)``, ``pre`` + ``tmXY``, or ``digits?``."""

    m = _ADDRESS_RE.match(text.strip())
    if m is None:
        if re.match(r"^[0-3]+$", text.strip()):
            raise AddressSyntaxError(
                f"{text!r} is a finite multiindex; an address needs a (period) or generator tail"
            )
        raise AddressSyntaxError(f"cannot parse address {text!r}")
    prefix = tuple(int(c) for c in m.group(1))
    if m.group(2) is not None:
        return Address(prefix, PeriodicTail(tuple(int(c) for c in m.group(2))))
    if m.group(3) is not None:
        return Address(prefix, ThueMorseTail(int(m.group(3)), int(m.group(4))))
    return Address(prefix, FixedStreamTail(tuple(int(c) for c in m.group(5))))


def parse_multiindex(text: str) -> str:
    if text == "":
        return ""
    if not re.match(r"^[0-3]+$", text):
        raise AddressSyntaxError(f"cannot parse multiindex {text!r}")
    return text


def shift_address(addr: Address, k: int) -> Address:
    """Drop the first ``k`` digits."""

    if k < 0:
        raise ValueError("shift must be nonnegative")
    if k <= len(addr.prefix):
        return Address(addr.prefix[k:], addr.tail)
    return Address((), addr.tail.shifted(k - len(addr.prefix)))


def apply_digit_map(addr: Address, mapping: dict[int, int]) -> Address:
    """Relabel every digit through ``mapping`` (used for the cyclic families)."""

    prefix = tuple(mapping[d] for d in addr.prefix)
    tail = addr.tail
    if isinstance(tail, PeriodicTail):
        return Address(prefix, PeriodicTail(tuple(mapping[d] for d in tail.period)))
    if isinstance(tail, ThueMorseTail):
        return Address(prefix, ThueMorseTail(mapping[tail.low], mapping[tail.high], tail.offset, tail.horizon_value))
    return Address(prefix, FixedStreamTail(tuple(mapping[d] for d in tail.digits)))


def point_from_address(addr: Address, system: "SystemS", depth: int) -> tuple[Point2, float]:
    """Evaluate the index map by truncation.

    Returns ``S_{a_1...a_depth}(centroid)`` together with the rigorous error
    bound ``(max ratio)^depth * diam`` for the distance to the true limit
    point.  The bound shrinks geometrically in ``depth``.
    """

    if depth < 1:
        raise ValueError("depth must be positive")
    horizon = addr.horizon
    if horizon is not None and depth > horizon:
        raise HorizonExceeded(f"depth {depth} exceeds address horizon {horizon}")
    p = system.centroid
    for i in range(depth - 1, -1, -1):
        p = similarity_apply(system.maps[addr.digit(i)], p)
    max_ratio = max(s.ratio for s in system.maps.values())
    return p, max_ratio**depth * system.triangle.diameter


@dataclass(frozen=True)
class PcfReport:
    """Outcome of the postcritical finiteness analysis.

    ``status`` is ``PCF``, ``NotPCF`` or ``UnknownBeyondHorizon``.  For PCF
    systems ``postcritical_addresses`` holds the whole (finite) set of shift
    tails of the critical addresses; for non-PCF systems ``witness`` names a
    critical address certified aperiodic.
    """

    status: str
    critical_addresses: tuple[Address, ...]
    postcritical_addresses: tuple[Address, ...] = ()
    witness: Address | None = None


def _periodic_tails(addr: Address) -> list[Address]:
    addr = addr.canonical()
    assert isinstance(addr.tail, PeriodicTail)
    span = len(addr.prefix) + len(addr.tail.period)
    return [shift_address(addr, k).canonical() for k in range(1, span + 1)]


def critical_addresses(params: "SystemParams") -> tuple[Address, ...]:
    """Both addresses of each contact point.

    Each contact point B_i is S_0(A_i), giving the address ``0`` followed by
    the constant address of the vertex A_i, and simultaneously a point of the
    three-map Cantor set with the configured address ``addrB_i``.
    """

    out: list[Address] = []
    for i, addr in ((1, params.addrB1), (2, params.addrB2), (3, params.addrB3)):
        out.append(Address((0,), PeriodicTail((i,))))
        out.append(addr)
    return tuple(out)


def pcf_status(params: "SystemParams", horizon: int = 4096) -> PcfReport:
    """Classify the system as PCF / not PCF / undecided at this horizon.

    The critical set consists of the three contact points, each carrying two
    addresses.  The system is postcritically finite exactly when every one of
    those addresses is eventually periodic, in which case the full tail orbit
    is returned.  A certified aperiodic tail (Thue-Morse) witnesses non-PCF;
    an uncertified generator leaves the question open beyond its horizon.
    """

    crits = critical_addresses(params)
    for addr in crits:
        if addr.certified_aperiodic:
            return PcfReport("NotPCF", crits, witness=addr)
    if all(a.is_eventually_periodic for a in crits):
        tails: dict[str, Address] = {}
        for addr in crits:
            for t in _periodic_tails(addr):
                tails[t.text()] = t
        ordered = tuple(tails[k] for k in sorted(tails))
        return PcfReport("PCF", crits, postcritical_addresses=ordered)
    return PcfReport("UnknownBeyondHorizon", crits)


def thue_morse_address(prefix: Iterable[int] | str, low: int, high: int, horizon: int = 1 << 20) -> Address:
    pre = tuple(int(c) for c in prefix) if isinstance(prefix, str) else tuple(prefix)
    return Address(pre, ThueMorseTail(low, high, 0, horizon))
