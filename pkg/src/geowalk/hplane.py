"""The upper half-plane model of H^2, acted on by unit-determinant real matrices.

Points are Python complex numbers with positive imaginary part.  Boundary
points are floats, with ``math.inf`` standing for the point at infinity.

Groups generated by integer matrices also get an exact mode: products stay
integer matrices, orbit points are ``QPoint``s with rational coordinates, and
distances are evaluated from exact rational invariants.  Long walks push
orbit points within 1e-100 of the boundary, far past what floats resolve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .walks import ResourceError

__all__ = [
    "hpoint",
    "MoebiusMap",
    "MoebiusGroup",
    "HGeodesic",
    "BoundaryEstimate",
    "apply",
    "hyp_distance",
    "geodesic_through",
    "dist_to_geodesic",
    "dist_to_segment",
    "boundary_estimate",
    "pencil_line",
    "parse_point",
    "format_point",
    "DELTA_H2",
    "QPoint",
    "ExactLine",
    "q_apply",
    "q_distance",
    "SANOV_GENERATORS",
]

DET_TOLERANCE = 1e-12
# Safe thinness constant for H^2 (the optimal one is log(1 + sqrt 2)).
DELTA_H2 = 2 * math.asinh(1.0)


def hpoint(re: float, im: float) -> complex:
    if not im > 0:
        raise ValueError(f"point must lie in the upper half-plane, got im={im}")
    return complex(re, im)


def parse_point(text: str) -> complex:
    """``"re+im i"`` literals such as ``"0.5+2i"`` or ``"1i"``."""
    z = complex(text.replace(" ", "").replace("i", "j"))
    return hpoint(z.real, z.imag)


def format_point(z: complex) -> str:
    return f"{z.real!r}+{z.imag!r}i"


@dataclass(frozen=True)
class MoebiusMap:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if all(type(x) is int for x in (self.a, self.b, self.c, self.d)):
            if det != 1:
                raise ValueError(f"determinant {det} is not 1")
            return
        scale = max(1.0, abs(self.a * self.d), abs(self.b * self.c))
        if not math.isfinite(det) or abs(det - 1.0) > DET_TOLERANCE * scale:
            raise ValueError(f"determinant {det!r} is not 1")

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @property
    def integral(self) -> bool:
        return all(type(x) is int for x in (self.a, self.b, self.c, self.d))

    def __call__(self, z: complex) -> complex:
        return apply(self, z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def boundary_image(self, x: float) -> float:
        """Action on the boundary R u {inf}."""
        if math.isinf(x):
            return math.inf if self.c == 0 else self.a / self.c
        den = self.c * x + self.d
        if den == 0:
            return math.inf
        return (self.a * x + self.b) / den

    @property
    def size(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))


def apply(m: MoebiusMap, z: complex) -> complex:
    """(az + b)/(cz + d), with the imaginary part formed as im z / |cz + d|^2."""
    x, y = z.real, z.imag
    den_re = m.c * x + m.d
    den_im = m.c * y
    q = den_re * den_re + den_im * den_im
    re = (m.a * m.c * (x * x + y * y) + (m.a * m.d + m.b * m.c) * x + m.b * m.d) / q
    return complex(re, y / q)


def hyp_distance(z: complex, w: complex) -> float:
    """arccosh(1 + |z - w|^2 / (2 im z im w)), in the cancellation-free asinh form."""
    return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


def _frame(forward: float, backward: float) -> MoebiusMap:
    """A map sending infinity to ``forward`` and 0 to ``backward``."""
    if math.isinf(forward):
        return MoebiusMap(1.0, backward, 0.0, 1.0)
    if math.isinf(backward):
        return MoebiusMap(forward, -1.0, 1.0, 0.0)
    t = 1.0 if forward > backward else -1.0
    s = math.sqrt(abs(forward - backward))
    return MoebiusMap(forward / s, backward * t / s, 1.0 / s, t / s)


@dataclass(frozen=True)
class HGeodesic:
    """Unit-speed geodesic t -> frame(i * scale * e^t), running from ``backward`` to ``forward``."""

    forward: float
    backward: float
    scale: float = 1.0

    def __post_init__(self):
        if self.forward == self.backward:
            raise ValueError("endpoints coincide")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @classmethod
    def anchored(cls, forward: float, backward: float, anchor: complex) -> "HGeodesic":
        w = _frame(forward, backward).inverse()(anchor)
        if abs(w.real) > 1e-9 * abs(w):
            raise ValueError("anchor does not lie on the geodesic")
        return cls(forward, backward, abs(w))

    @property
    def frame(self) -> MoebiusMap:
        return _frame(self.forward, self.backward)

    @property
    def vertical(self) -> bool:
        return math.isinf(self.forward) or math.isinf(self.backward)

    @property
    def foot(self) -> float:
        """Real coordinate of a vertical geodesic."""
        if not self.vertical:
            raise ValueError("not a vertical geodesic")
        return self.backward if math.isinf(self.forward) else self.forward

    @property
    def center(self) -> float:
        if self.vertical:
            raise ValueError("vertical geodesic has no center")
        return (self.forward + self.backward) / 2

    @property
    def radius(self) -> float:
        if self.vertical:
            raise ValueError("vertical geodesic has no radius")
        return abs(self.forward - self.backward) / 2

    @property
    def orientation(self) -> int:
        """+1 when parameters increase toward the larger real endpoint (or upward)."""
        if math.isinf(self.forward):
            return 1
        if math.isinf(self.backward):
            return -1
        return 1 if self.forward > self.backward else -1

    def point(self, t: float) -> complex:
        return apply(self.frame, complex(0.0, self.scale * math.exp(t)))

    @property
    def anchor(self) -> complex:
        return self.point(0.0)

    def parameter_of_projection(self, z: complex) -> float:
        w = self.frame.inverse()(z)
        return math.log(abs(w) / self.scale)

    def distance(self, z: complex) -> float:
        w = self.frame.inverse()(z)
        return math.asinh(abs(w.real) / w.imag)

    def distance_at(self, z: complex, t: float) -> float:
        return hyp_distance(z, self.point(t))

    def translate(self, m: MoebiusMap) -> "HGeodesic":
        forward, backward = m.boundary_image(self.forward), m.boundary_image(self.backward)
        anchor = m(self.anchor)
        # Same cutoff as geodesic_through: an endpoint this far out is infinity to double precision.
        if math.isfinite(forward) and math.isfinite(backward):
            if abs(forward) > 1e12 * (abs(anchor) + abs(backward)):
                forward = math.inf
            elif abs(backward) > 1e12 * (abs(anchor) + abs(forward)):
                backward = math.inf
        return HGeodesic.anchored(forward, backward, anchor)


def geodesic_through(z: complex, w: complex) -> HGeodesic:
    """The geodesic through z and w, anchored at z and oriented toward w."""
    if z == w:
        raise ValueError("degenerate input: z == w")
    c = math.inf
    if z.real != w.real:
        c = (abs(z) ** 2 - abs(w) ** 2) / (2 * (z.real - w.real))
    # Circles this large are vertical lines to double precision over [z, w].
    if not abs(c) <= 1e12 * (abs(z) + abs(w)):
        foot = z.real
        forward, backward = (math.inf, foot) if w.imag > z.imag else (foot, math.inf)
        return HGeodesic.anchored(forward, backward, z)
    x, y = z.real, z.imag
    r = math.hypot(x - c, y)
    # The far endpoint directly, the near one from the product of the two
    # (c^2 - r^2), which avoids cancelling c - r on nearly vertical circles.
    far = c + math.copysign(r, c)
    near = (2 * x * c - x * x - y * y) / far
    lo, hi = min(far, near), max(far, near)
    forward, backward = (hi, lo) if w.real > z.real else (lo, hi)
    return HGeodesic.anchored(forward, backward, z)


def dist_to_geodesic(p: complex, g: HGeodesic) -> float:
    return g.distance(p)


def dist_to_segment(p: complex, z: complex, w: complex) -> float:
    """Distance from p to the geodesic segment [z, w]."""
    if z == w:
        return hyp_distance(p, z)
    g = geodesic_through(z, w)
    t_end = hyp_distance(z, w)
    t = g.parameter_of_projection(p)
    if t <= 0:
        return hyp_distance(p, z)
    if t >= t_end:
        return hyp_distance(p, w)
    return g.distance(p)


def pencil_line(xi: float, eta: float) -> HGeodesic:
    """Geodesic from eta to xi; parameter 0 at the apex (at height 1 over the foot when vertical)."""
    if xi == eta:
        raise ValueError("endpoints coincide")
    if math.isinf(xi) or math.isinf(eta):
        foot = eta if math.isinf(xi) else xi
        return HGeodesic.anchored(xi, eta, complex(foot, 1.0))
    c, r = (xi + eta) / 2, abs(xi - eta) / 2
    return HGeodesic.anchored(xi, eta, complex(c, r))


class QPoint:
    """A point of H^2 with exact rational coordinates."""

    __slots__ = ("real", "imag")

    def __init__(self, re, im):
        re, im = Fraction(re), Fraction(im)
        if im <= 0:
            raise ValueError("point must lie in the upper half-plane")
        self.real = re
        self.imag = im

    @classmethod
    def from_complex(cls, z: complex) -> "QPoint":
        return cls(Fraction(z.real), Fraction(z.imag))

    def __complex__(self) -> complex:
        return complex(float(self.real), float(self.imag))

    def __eq__(self, other) -> bool:
        return isinstance(other, QPoint) and self.real == other.real and self.imag == other.imag

    def __hash__(self) -> int:
        return hash((self.real, self.imag))

    def __repr__(self) -> str:
        return f"QPoint({format_point(complex(self))})"


def _as_qpoint(z) -> QPoint:
    return z if isinstance(z, QPoint) else QPoint.from_complex(complex(z))


def q_apply(m: MoebiusMap, z: QPoint) -> QPoint:
    """Exact action of a rational matrix on a rational point."""
    a, b, c, d = (Fraction(v) for v in (m.a, m.b, m.c, m.d))
    x, y = z.real, z.imag
    den = (c * x + d) ** 2 + (c * y) ** 2
    re = (a * c * (x * x + y * y) + (a * d + b * c) * x + b * d) / den
    return QPoint(re, (a * d - b * c) * y / den)


def _log(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def _asinh_sqrt(r: Fraction) -> float:
    """asinh(sqrt(r)) for a nonnegative rational of any size."""
    if r < 10**200:
        return math.asinh(math.sqrt(float(r)))
    return math.log(2.0) + 0.5 * _log(r)


def _asinh(s: Fraction) -> float:
    if s < 10**200:
        return math.asinh(float(s))
    return math.log(2.0) + _log(s)


def q_distance(z: QPoint, w: QPoint) -> float:
    """2 asinh(|z - w| / (2 sqrt(im z im w))), with the ratio formed exactly."""
    r = ((z.real - w.real) ** 2 + (z.imag - w.imag) ** 2) / (4 * z.imag * w.imag)
    return 2.0 * _asinh_sqrt(r)


def _pythagoras(a: float, b: float) -> float:
    """Hypotenuse of a right hyperbolic triangle with legs a, b >= 0."""
    if a + b > 40.0:
        return a + b - math.log(2.0) + math.log1p(math.exp(-2 * a)) + math.log1p(math.exp(-2 * b))
    s = math.sinh(a / 2) ** 2 * math.cosh(b) + math.sinh(b / 2) ** 2
    return 2.0 * math.asinh(math.sqrt(s))


class ExactLine:
    """Geodesic between rational boundary points (``math.inf`` allowed), for exact orbit points.

    Unit-speed parameter 0 sits at the apex (height 1 over the foot when
    vertical); parameters grow toward ``forward``.
    """

    extent = (-math.inf, math.inf)

    def __init__(self, forward, backward):
        fin = [x for x in (forward, backward) if not (isinstance(x, float) and math.isinf(x))]
        if len(fin) == 0:
            raise ValueError("endpoints coincide")
        self.forward = math.inf if isinstance(forward, float) and math.isinf(forward) else Fraction(forward)
        self.backward = math.inf if isinstance(backward, float) and math.isinf(backward) else Fraction(backward)
        if self.forward == self.backward:
            raise ValueError("endpoints coincide")

    def __repr__(self) -> str:
        return f"ExactLine({float(self.forward)!r}, {float(self.backward)!r})"

    def as_geodesic(self) -> HGeodesic:
        return pencil_line(float(self.forward), float(self.backward))

    def _sinh_distance(self, z: QPoint) -> Fraction:
        x, y = z.real, z.imag
        if self.forward is math.inf or self.backward is math.inf:
            foot = self.backward if self.forward is math.inf else self.forward
            return abs(x - foot) / y
        c = (self.forward + self.backward) / 2
        r = abs(self.forward - self.backward) / 2
        return abs((x - c) ** 2 + y * y - r * r) / (2 * r * y)

    def distance(self, z) -> float:
        return _asinh(self._sinh_distance(_as_qpoint(z)))

    def parameter_of_projection(self, z) -> float:
        z = _as_qpoint(z)
        x, y = z.real, z.imag

        def sq(p):
            return (x - p) ** 2 + y * y

        if self.forward is math.inf:
            return 0.5 * _log(sq(self.backward))
        if self.backward is math.inf:
            return -0.5 * _log(sq(self.forward))
        return 0.5 * (_log(sq(self.backward)) - _log(sq(self.forward)))

    def distance_at(self, z, t: float) -> float:
        z = _as_qpoint(z)
        return _pythagoras(self.distance(z), abs(t - self.parameter_of_projection(z)))

    def point(self, t: float) -> complex:
        return self.as_geodesic().point(t)


@dataclass(frozen=True)
class BoundaryEstimate:
    value: float
    stable: bool


def _abs2(z):
    return z.real * z.real + z.imag * z.imag


def boundary_estimate(images, window: float = 0.25) -> BoundaryEstimate:
    """Finite-time estimate of the boundary point a sequence of points tends to.

    Declared heuristic over the final ``window`` fraction, split into halves:
    convergence to a real point when the upper envelope of im shrinks from the
    first half to the second and the real parts of the second half agree to
    within 10x that envelope; convergence to infinity when |z| in the second
    half dominates the first half and im stays bounded below by the window's
    first point.  Anything else is reported unstable.
    """
    images = list(images)
    if len(images) < 2:
        raise ValueError("need at least 2 points")
    size = max(4, math.ceil(window * len(images)))
    win = images[-size:]
    half = len(win) // 2
    first, second = win[:half], win[half:]
    last = win[-1]
    top_first = max(z.imag for z in first)
    top_second = max(z.imag for z in second)
    res = [z.real for z in second]
    if top_second < top_first and max(res) - min(res) <= 10 * top_second:
        return BoundaryEstimate(last.real, True)
    if min(map(_abs2, second)) > max(map(_abs2, first)) and min(z.imag for z in win) >= min(win[0].imag, 1):
        return BoundaryEstimate(math.inf, True)
    return BoundaryEstimate(last.real, False)


# (1, 2; 0, 1) and (1, 0; 2, 1) generate a free subgroup (Sanov).
SANOV_GENERATORS = (MoebiusMap(1, 2, 0, 1), MoebiusMap(1, 0, 2, 1))


class MoebiusGroup:
    """The subgroup of PSL(2, R) generated by a finite list of matrices, acting on H^2.

    With integer generators the group runs in exact mode (``QPoint`` orbit
    points); otherwise points are floats and matrix growth is capped at
    ``FLOAT_MAX_ENTRY``, beyond which orbit points lose ~9 significant digits.
    """

    snapshot_stride = 1
    acts_on_itself = False
    FLOAT_MAX_ENTRY = 2.0**20
    EXACT_MAX_BITS = 1 << 14

    def __init__(self, matrices=SANOV_GENERATORS, basepoint: complex = 1j, exact: bool | None = None):
        self.matrices = tuple(_integral_if_possible(m) for m in matrices)
        if not self.matrices:
            raise ValueError("need at least one generator")
        integral = all(m.integral for m in self.matrices)
        if exact is None:
            exact = integral
        if exact and not integral:
            raise ValueError("exact mode needs integer generators")
        self.exact = exact
        self.identity = MoebiusMap.identity() if exact else MoebiusMap(1.0, 0.0, 0.0, 1.0)
        if exact:
            self.basepoint = _as_qpoint(basepoint)
        else:
            self.matrices = tuple(MoebiusMap(*(float(x) for x in (m.a, m.b, m.c, m.d))) for m in self.matrices)
            self.basepoint = complex(basepoint)

    def __repr__(self) -> str:
        return f"MoebiusGroup({list(self.matrices)!r}, exact={self.exact})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MoebiusGroup)
            and other.matrices == self.matrices
            and other.basepoint == self.basepoint
            and other.exact == self.exact
        )

    def __hash__(self) -> int:
        return hash(("MoebiusGroup", self.matrices, self.exact))

    def generators(self) -> list[MoebiusMap]:
        out = []
        for m in self.matrices:
            out.append(m)
            out.append(m.inverse())
        return out

    def mul(self, g: MoebiusMap, h: MoebiusMap) -> MoebiusMap:
        return g @ h

    def inv(self, g: MoebiusMap) -> MoebiusMap:
        return g.inverse()

    def act(self, g: MoebiusMap, z):
        if self.exact:
            return q_apply(g, _as_qpoint(z))
        return apply(g, complex(z))

    def dist(self, z, w) -> float:
        if self.exact:
            return q_distance(_as_qpoint(z), _as_qpoint(w))
        return hyp_distance(complex(z), complex(w))

    def check_representable(self, g: MoebiusMap, index: int) -> None:
        if self.exact:
            bits = max(abs(int(x)).bit_length() for x in (g.a, g.b, g.c, g.d))
            if bits > self.EXACT_MAX_BITS:
                raise ResourceError(f"matrix entries exceed {self.EXACT_MAX_BITS} bits", index)
        elif not g.size <= self.FLOAT_MAX_ENTRY:
            raise ResourceError(f"matrix entries exceed {self.FLOAT_MAX_ENTRY:g}", index)

    def key(self, g: MoebiusMap) -> tuple:
        """Projective identity key: +-M collapse (rounded to 9 digits in float mode)."""
        entries = (g.a, g.b, g.c, g.d)
        lead = next(x for x in entries if abs(x) > 1e-12)
        sign = 1 if lead > 0 else -1
        if self.exact:
            return tuple(sign * x for x in entries)
        return tuple(round(sign * x, 9) + 0.0 for x in entries)

    def parse(self, text: str) -> MoebiusMap:
        parts = text.replace(",", " ").split()
        if len(parts) != 4:
            raise ValueError(f"matrix literal needs 4 entries, got {text!r}")
        m = _integral_if_possible(MoebiusMap(*(float(p) for p in parts)))
        if not self.exact:
            m = MoebiusMap(*(float(x) for x in (m.a, m.b, m.c, m.d)))
        return m

    def format(self, g: MoebiusMap) -> str:
        return f"{g.a!r} {g.b!r} {g.c!r} {g.d!r}"

    def pencil(self, forward, backward):
        """Geodesic between two boundary points, in the representation this group's points need."""
        if self.exact:
            return ExactLine(forward, backward)
        return pencil_line(float(forward), float(backward))

    def segment_distance(self, u, v, x=None) -> float:
        p = self.basepoint if x is None else x
        return dist_to_segment(complex(p), complex(u), complex(v))


def _integral_if_possible(m: MoebiusMap) -> MoebiusMap:
    entries = (m.a, m.b, m.c, m.d)
    if all(float(x).is_integer() and abs(x) < 2**53 for x in entries):
        ints = tuple(int(x) for x in entries)
        if ints[0] * ints[3] - ints[1] * ints[2] == 1:
            return MoebiusMap(*ints)
    return m
