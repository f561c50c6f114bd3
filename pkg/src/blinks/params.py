"""Exact boundary parameters: rationals, quadratic extensions, infinity and Moebius maps."""

from fractions import Fraction
import re

# generator symbol -> (s, t) with w**2 = s*w + t
FIELDS = {"w": (-1, -1), "i": (0, -1)}


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class QuadExt:
    """Element ``a + b*w`` of Q(w) where w is a root of ``x**2 - s*x - t``."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field):
        if field not in FIELDS:
            raise ValueError(f"unknown field generator {field!r}")
        self.a, self.b, self.field = Fraction(a), Fraction(b), field

    @staticmethod
    def make(a, b, field):
        """Collapse to a Fraction when the irrational part vanishes."""
        if b == 0:
            return Fraction(a)
        return QuadExt(a, b, field)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.field != self.field:
                raise ValueError(f"cannot mix Q({self.field}) and Q({other.field})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt.make(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.field)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        s, t = FIELDS[self.field]
        bd = self.b * o.b
        return QuadExt.make(self.a * o.a + bd * t, self.a * o.b + self.b * o.a + bd * s, self.field)

    __rmul__ = __mul__

    def norm(self):
        s, t = FIELDS[self.field]
        return self.a * self.a + self.a * self.b * s - self.b * self.b * t

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        s, _ = FIELDS[self.field]
        return QuadExt.make((self.a + self.b * s) / n, -self.b / n, self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.field) == (other.a, other.b, other.field)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.field))

    def __repr__(self):
        return f"QuadExt({format_param(self)!r})"


def _is_zero(x):
    return x == 0


def field_of(x):
    """Generator symbol of the field containing ``x``, or None for Q and infinity."""
    return x.field if isinstance(x, QuadExt) else None


_TERM = re.compile(r"\s*([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*(\*?\s*([a-z]))?\s*")


def parse_param(text, field=None):
    """Parse ``"3/2"``, ``"inf"``, ``"-1-w"`` or ``"1/2+3/4*i"``; the symbol must match ``field``."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, QuadExt) or text is INF:
        if field_of(text) not in (None, field):
            raise ValueError(f"parameter {text!r} is not in Q({field})")
        return text
    if not isinstance(text, str):
        raise ValueError(f"cannot parse parameter {text!r}")
    s = text.strip().lower()
    if s in ("inf", "infinity", "oo", "∞"):
        return INF
    if not s:
        raise ValueError("empty parameter")
    a, b, pos = Fraction(0), Fraction(0), 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(4)):
            raise ValueError(f"cannot parse parameter {text!r}")
        if pos > 0 and not m.group(1):
            raise ValueError(f"cannot parse parameter {text!r}")
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            coeff = -coeff
        if m.group(4):
            if m.group(4) != field:
                raise ValueError(f"symbol {m.group(4)!r} not available in Q({field or ''})")
            b += coeff
        else:
            if m.group(3):
                raise ValueError(f"cannot parse parameter {text!r}")
            a += coeff
        pos = m.end()
    return QuadExt.make(a, b, field) if field else a


def _fmt_fraction(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_param(x):
    if x is INF:
        return "inf"
    if isinstance(x, QuadExt):
        b = "" if x.b == 1 else "-" if x.b == -1 else _fmt_fraction(x.b) + "*"
        if x.a == 0:
            return f"{b}{x.field}"
        sign = "" if b.startswith("-") else "+"
        return f"{_fmt_fraction(x.a)}{sign}{b}{x.field}"
    return _fmt_fraction(Fraction(x))


class Mobius:
    """Projective map ``t -> (a*t + b) / (c*t + d)`` on P^1 with exact entries."""

    __slots__ = ("m",)

    def __init__(self, a, b, c, d):
        m = tuple(x if isinstance(x, QuadExt) else Fraction(x) for x in (a, b, c, d))
        if m[0] * m[3] - m[1] * m[2] == 0:
            raise ValueError("singular Moebius matrix")
        pivot = next(x for x in m if not _is_zero(x))
        self.m = tuple(_simplify(x / pivot) for x in m)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def __call__(self, t):
        a, b, c, d = self.m
        if t is INF:
            return INF if _is_zero(c) else _simplify(a / c)
        den = c * t + d
        if _is_zero(den):
            return INF
        return _simplify((a * t + b) / den)

    def __matmul__(self, other):
        """Composition: ``(self @ other)(t) == self(other(t))``."""
        a, b, c, d = self.m
        e, f, g, h = other.m
        return Mobius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self):
        a, b, c, d = self.m
        return Mobius(d, -b, -c, a)

    def is_identity(self):
        a, b, c, d = self.m
        return _is_zero(b) and _is_zero(c) and a == d

    def __eq__(self, other):
        return isinstance(other, Mobius) and self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __repr__(self):
        return "Mobius(" + ", ".join(format_param(x) for x in self.m) + ")"

    def to_json(self):
        a, b, c, d = (format_param(x) for x in self.m)
        return [[a, b], [c, d]]

    @classmethod
    def from_json(cls, data, field=None):
        try:
            (a, b), (c, d) = data
        except (TypeError, ValueError):
            raise ValueError(f"a Moebius map is a 2x2 matrix, got {data!r}") from None
        entries = [parse_param(x, field) for x in (a, b, c, d)]
        if any(x is INF for x in entries):
            raise ValueError("matrix entries must be finite")
        return cls(*entries)


def _simplify(x):
    if isinstance(x, QuadExt):
        return QuadExt.make(x.a, x.b, x.field)
    return Fraction(x)
