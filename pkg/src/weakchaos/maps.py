"""Interval maps: the piecewise-linear slow-escape family and reference maps.

The central object is PLMannevilleMap, a piecewise-linear map of [0, 1]
with countably many affine branches accumulating at an indifferent fixed
point at 0.  Breakpoints are xi_k = a * (k+1)^(-1/(z-1)), with xi_-1 := 1.
Branch k (k >= 1) is affine from cell A_k = (xi_k, xi_{k-1}] onto
A_{k-1} = (xi_{k-1}, xi_{k-2}], and branch 0 maps A_0 = (a, 1] onto
(0, 1].  Cells are half-open on the left throughout: a point equal to
xi_k belongs to A_{k+1}.

Branch steps use the interpolation form (1-t)*lo + t*hi, which is exact
in floating point at both endpoints (t = 0 and t = 1), so chains of
breakpoints iterate exactly: xi_3 -> xi_2 -> xi_1 -> xi_0 bit for bit.
Interior images are clamped into the open-closed target cell, which
keeps the cell index decreasing by exactly one per step even when
rounding would otherwise land an image on an excluded endpoint.

Reference maps (identity, circle rotation, doubling, smooth slow-escape
x + x^z mod 1, and user-supplied piecewise-linear interpolants) share a
small MapSpec wrapper with a text grammar for CLI use:

    identity
    doubling
    rotation:t=0.4142135623730951
    manneville:z=3
    plmanneville:z=3,a=0.5
    custom:0:0;0.5:0.8;1:1

The rotation is measured with the circle metric min(|u-v|, 1-|u-v|);
every other map uses the interval metric |u-v|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, NumericsError
from .rng import raw_u64


@dataclass(frozen=True)
class PLMannevilleMap:
    """Piecewise-linear map with branch cells accumulating at 0.

    Args:
        z: branch-scaling exponent, z > 1.  The tail of the cell masses
            decays like k^(-1/(z-1)).
        a: location of the first breakpoint, 0 < a < 1.
    """

    z: float
    a: float

    def __post_init__(self) -> None:
        if not (self.z > 1.0):
            raise ConfigError(f"z must exceed 1, got {self.z}")
        if not (0.0 < self.a < 1.0):
            raise ConfigError(f"a must lie in (0,1), got {self.a}")

    def xi(self, k: int) -> float:
        """Breakpoint xi_k = a*(k+1)^(-1/(z-1)); xi_-1 is defined as 1."""
        if k == -1:
            return 1.0
        if k < -1:
            raise ValueError(f"breakpoint index must be >= -1, got {k}")
        return self.a * (k + 1.0) ** (-1.0 / (self.z - 1.0))

    def branch_index(self, x: float) -> int:
        """Index k of the cell A_k = (xi_k, xi_{k-1}] containing x.

        Closed form k = ceil((a/x)^(z-1)) - 1 seeds a doubling search
        plus bisection for the first k whose breakpoint falls below x,
        so the result is consistent with xi() as evaluated in floating
        point even when pow() rounds.  The search stays logarithmic on
        the plateaus where many deep breakpoints collapse onto a single
        float, which a one-step correction walk would cross in O(k*eps)
        iterations.
        """
        if not (0.0 < x <= 1.0):
            raise DomainError(f"cell index needs x in (0,1], got {x}")
        if x > self.a:
            return 0
        seed = int(math.ceil((self.a / x) ** (self.z - 1.0))) - 1
        if seed < 1:
            seed = 1
        # Bracket the boundary so xi(lo) >= x > xi(hi); xi(0) = a >= x here.
        stride = 1
        if self.xi(seed) >= x:
            lo, hi = seed, seed + 1
            while self.xi(hi) >= x:
                lo, stride = hi, stride * 2
                hi = lo + stride
        else:
            lo, hi = max(seed - 1, 0), seed
            while lo > 0 and self.xi(lo) < x:
                hi, stride = lo, stride * 2
                lo = max(seed - stride, 0)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.xi(mid) >= x:
                lo = mid
            else:
                hi = mid
        return hi

    def branch_interval(self, k: int) -> tuple[float, float]:
        """(lo, hi] endpoints of cell A_k."""
        if k < 0:
            raise ValueError(f"cell index must be >= 0, got {k}")
        return self.xi(k), self.xi(k - 1)

    def cell_mass(self, k: int) -> float:
        """Length of A_k: 1 - a for k = 0, else xi_{k-1} - xi_k."""
        if k == 0:
            return 1.0 - self.a
        return self.xi(k - 1) - self.xi(k)

    def step(self, x: float) -> float:
        """One application of the map; 0 and 1 are fixed."""
        if not (0.0 <= x <= 1.0):
            raise DomainError(f"map is defined on [0,1], got {x}")
        if x == 0.0:
            return 0.0
        if x > self.a:
            return (x - self.a) / (1.0 - self.a)
        k = self.branch_index(x)
        lo = self.xi(k)
        hi = self.xi(k - 1)
        dst_lo = hi
        dst_hi = self.xi(k - 2)
        den = hi - lo
        if den <= 0.0:
            raise NumericsError(
                f"cell A_{k} collapsed at float64 resolution; orbit too deep"
            )
        t = (x - lo) / den
        y = (1.0 - t) * dst_lo + t * dst_hi
        # Clamp into the open-closed image cell so the cell index drops by
        # exactly one per step even when the sum rounds onto an endpoint.
        if y <= dst_lo:
            y = math.nextafter(dst_lo, dst_hi)
        elif y > dst_hi:
            y = dst_hi
        return y


def branch_indices(pl: PLMannevilleMap, xs: np.ndarray, cap: int) -> np.ndarray:
    """Vectorized cell indices for points in (0, 1], saturated at ``cap``.

    Entries at the cap are exempt from the +-1 membership correction, so
    callers must treat capped values as "at least cap".
    """
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size and (xs.min() <= 0.0 or xs.max() > 1.0):
        raise DomainError("cell indices need points in (0,1]")
    beta = pl.z - 1.0
    with np.errstate(over="ignore"):
        raw = np.ceil((pl.a / xs) ** beta) - 1.0
    raw = np.where(np.isfinite(raw), raw, float(cap))
    raw = np.clip(raw, 1.0, float(cap))
    k = raw.astype(np.int64)
    k[xs > pl.a] = 0
    inv = -1.0 / beta
    for _ in range(2):
        live = (k >= 1) & (k < cap)
        xi_k = pl.a * (k + 1.0) ** inv
        up = live & (xi_k >= xs)
        if not up.any():
            break
        k[up] += 1
    for _ in range(2):
        live = (k >= 1) & (k < cap)
        xi_prev = pl.a * np.maximum(k, 1) ** inv
        down = live & (k > 1) & (xi_prev < xs)
        if not down.any():
            break
        k[down] -= 1
    return k


@dataclass(frozen=True)
class MapSpec:
    """A named interval map plus the metric its tubes are measured in."""

    kind: str
    t: float = 0.0
    z: float = 0.0
    a: float = 0.0
    knots: tuple[tuple[float, float], ...] = ()
    pl: PLMannevilleMap | None = field(default=None, compare=False)
    label: str = ""
    metric: str = "interval"

    def distance(self, u: float, v: float) -> float:
        d = abs(u - v)
        if self.metric == "circle":
            return min(d, 1.0 - d)
        return d


def identity_map() -> MapSpec:
    return MapSpec(kind="identity", label="identity")


def doubling_map() -> MapSpec:
    return MapSpec(kind="doubling", label="doubling")


def rotation_map(t: float) -> MapSpec:
    if not (0.0 < t < 1.0):
        raise ConfigError(f"rotation angle must lie in (0,1), got {t}")
    return MapSpec(kind="rotation", t=t, label=f"rotation:t={t!r}", metric="circle")


def smooth_manneville_map(z: float) -> MapSpec:
    if not (z > 1.0):
        raise ConfigError(f"z must exceed 1, got {z}")
    return MapSpec(kind="manneville", z=z, label=f"manneville:z={z!r}")


def pl_manneville_map(z: float, a: float) -> MapSpec:
    pl = PLMannevilleMap(z, a)
    return MapSpec(
        kind="plmanneville", z=z, a=a, pl=pl, label=f"plmanneville:z={z!r},a={a!r}"
    )


def custom_map(knots: list[tuple[float, float]]) -> MapSpec:
    if len(knots) < 2:
        raise ConfigError("custom map needs at least two knots")
    xs = [p[0] for p in knots]
    ys = [p[1] for p in knots]
    if xs[0] != 0.0 or xs[-1] != 1.0:
        raise ConfigError("custom knots must start at x=0 and end at x=1")
    if any(x2 <= x1 for x1, x2 in zip(xs, xs[1:])):
        raise ConfigError("custom knot x-coordinates must be strictly increasing")
    if any(not (0.0 <= y <= 1.0) for y in ys):
        raise ConfigError("custom knot y-coordinates must lie in [0,1]")
    label = "custom:" + ";".join(f"{x!r}:{y!r}" for x, y in knots)
    return MapSpec(kind="custom", knots=tuple((x, y) for x, y in knots), label=label)


def _parse_kv(body: str, spec: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for part in body.split(","):
        if "=" not in part:
            raise ConfigError(f"bad parameter {part!r} in map spec {spec!r}")
        key, _, val = part.partition("=")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise ConfigError(f"non-numeric value {val!r} in map spec {spec!r}")
    return out


def parse_map(spec: str) -> MapSpec:
    """Parse the CLI map grammar into a MapSpec."""
    s = spec.strip()
    head, sep, body = s.partition(":")
    head = head.strip()
    if head == "identity" and not sep:
        return identity_map()
    if head == "doubling" and not sep:
        return doubling_map()
    if head == "rotation":
        kv = _parse_kv(body, s)
        if set(kv) != {"t"}:
            raise ConfigError(f"rotation takes exactly t=<real>, got {spec!r}")
        return rotation_map(kv["t"])
    if head == "manneville":
        kv = _parse_kv(body, s)
        if set(kv) != {"z"}:
            raise ConfigError(f"manneville takes exactly z=<real>, got {spec!r}")
        return smooth_manneville_map(kv["z"])
    if head == "plmanneville":
        kv = _parse_kv(body, s)
        if set(kv) != {"z", "a"}:
            raise ConfigError(f"plmanneville takes z=<real>,a=<real>, got {spec!r}")
        return pl_manneville_map(kv["z"], kv["a"])
    if head == "custom":
        knots = []
        for part in body.split(";"):
            bits = part.split(":")
            if len(bits) != 2:
                raise ConfigError(f"bad knot {part!r} in map spec {spec!r}")
            try:
                knots.append((float(bits[0]), float(bits[1])))
            except ValueError:
                raise ConfigError(f"non-numeric knot {part!r} in map spec {spec!r}")
        return custom_map(knots)
    raise ConfigError(f"unknown map spec {spec!r}")


@dataclass(frozen=True)
class Orbit:
    """A finite orbit: points[0] = x0 and points[i+1] = step(points[i])."""

    x0: float
    points: np.ndarray

    def __len__(self) -> int:
        return len(self.points)


def step(spec: MapSpec, x: float) -> float:
    """One application of the map described by ``spec``."""
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"map is defined on [0,1], got {x}")
    if spec.kind == "identity":
        return x
    if spec.kind == "doubling":
        return (2.0 * x) % 1.0
    if spec.kind == "rotation":
        return (x + spec.t) % 1.0
    if spec.kind == "manneville":
        return (x + x**spec.z) % 1.0
    if spec.kind == "plmanneville":
        assert spec.pl is not None
        return spec.pl.step(x)
    if spec.kind == "custom":
        xs = spec.knots
        lo_i, hi_i = 0, len(xs) - 1
        while hi_i - lo_i > 1:
            mid = (lo_i + hi_i) // 2
            if xs[mid][0] <= x:
                lo_i = mid
            else:
                hi_i = mid
        (x1, y1), (x2, y2) = xs[lo_i], xs[hi_i]
        t = (x - x1) / (x2 - x1)
        return (1.0 - t) * y1 + t * y2
    raise ConfigError(f"unknown map kind {spec.kind!r}")


def branch_index(spec: MapSpec, x: float) -> int:
    """Cell index for maps with a branch partition (plmanneville only)."""
    if spec.kind != "plmanneville" or spec.pl is None:
        raise ConfigError(f"map kind {spec.kind!r} has no branch partition")
    return spec.pl.branch_index(x)


def iterate(spec: MapSpec, x0: float, n: int) -> Orbit:
    """Orbit of length n+1 under repeated application of step()."""
    if n < 0:
        raise ValueError(f"orbit length must be >= 0, got {n}")
    points = np.empty(n + 1, dtype=np.float64)
    x = float(x0)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"map is defined on [0,1], got {x}")
    points[0] = x
    if spec.kind == "plmanneville":
        assert spec.pl is not None
        pl_step = spec.pl.step
        for i in range(1, n + 1):
            x = pl_step(x)
            points[i] = x
    else:
        for i in range(1, n + 1):
            x = step(spec, x)
            points[i] = x
    return Orbit(x0=float(x0), points=points)


_WINDOW_BITS = 48
_WINDOW_MASK = (1 << _WINDOW_BITS) - 1


def binary_orbit_extension(
    x0: float, n: int, seed: int, stream: int = 0
) -> np.ndarray:
    """Long doubling-map orbit of a generic real consistent with ``x0``.

    A float64 initial condition is a dyadic rational, so its doubling
    orbit reaches 0 exactly within ~1100 steps and is useless for long
    runs.  This generator treats x0's 52 mantissa bits as the start of
    the binary expansion of a real number, extends the expansion with
    seeded pseudo-random bits, and returns the orbit points of that real
    under the shift, each quantized to 48 bits.  Deterministic in
    (x0, seed, stream).
    """
    if not (0.0 <= x0 < 1.0):
        raise DomainError(f"extension needs x0 in [0,1), got {x0}")
    if n < 0:
        raise ValueError(f"orbit length must be >= 0, got {n}")
    bits: list[int] = []
    v = x0
    for _ in range(52):
        v *= 2.0
        b = int(v)
        bits.append(b)
        v -= b
    needed = n + _WINDOW_BITS
    word_i = 0
    while len(bits) < needed:
        word = raw_u64(seed, stream, word_i)
        word_i += 1
        for shift in range(63, -1, -1):
            bits.append((word >> shift) & 1)
    window = 0
    for b in bits[:_WINDOW_BITS]:
        window = (window << 1) | b
    scale = 2.0**-_WINDOW_BITS
    points = np.empty(n + 1, dtype=np.float64)
    points[0] = window * scale
    for i in range(1, n + 1):
        window = ((window << 1) & _WINDOW_MASK) | bits[_WINDOW_BITS + i - 1]
        points[i] = window * scale
    return points
