"""Exact arithmetic in the order O = Z[l] and its fraction field Q(l).

Here l denotes (-1 + sqrt(-7))/2, so that l + lbar = -1, l*lbar = 2, and
l^2 = -l - 2.  We write theta for l - lbar = sqrt(-7).

Q(l) has two embeddings into Q_2.  We fix the one sending lbar to a 2-adic
unit and l to twice a unit; every 2-adic valuation and residue in this
package refers to that choice.  Because 2 splits as l*lbar, the valuation
of an element of O can be computed exactly by counting how often l divides
it, so no statement here depends on a floating precision.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, inf

__all__ = [
    "QuadInt",
    "QuadRat",
    "PadicApprox",
    "LAM",
    "LBAR",
    "THETA",
    "ZERO",
    "ONE",
    "val2",
    "embed_2adic",
    "hensel_lambda_root",
    "render_quadrat",
    "parse_quadrat",
]


@dataclass(frozen=True, slots=True)
class QuadInt:
    """The algebraic integer a + b*l, reduced by l^2 = -l - 2."""

    a: int = 0
    b: int = 0

    def __add__(self, other):
        other = _as_quadint(other)
        if other is None:
            return NotImplemented
        return QuadInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_quadint(other)
        if other is None:
            return NotImplemented
        return QuadInt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        other = _as_quadint(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return QuadInt(-self.a, -self.b)

    def __mul__(self, other):
        other = _as_quadint(other)
        if other is None:
            return NotImplemented
        return QuadInt(
            self.a * other.a - 2 * self.b * other.b,
            self.a * other.b + self.b * other.a - self.b * other.b,
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("QuadInt powers must be nonnegative")
        out = QuadInt(1, 0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.a or self.b)

    def conj(self) -> "QuadInt":
        """The image under l -> lbar = -1 - l."""
        return QuadInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        """x * conj(x), a nonnegative rational integer."""
        return self.a * self.a - self.a * self.b + 2 * self.b * self.b

    def divides(self, x: "QuadInt") -> "QuadInt | None":
        """Return x / self when the quotient lies in O, else None."""
        if not self:
            raise ZeroDivisionError("division by zero in O")
        n = self.norm()
        y = x * self.conj()
        if y.a % n or y.b % n:
            return None
        return QuadInt(y.a // n, y.b // n)

    def val2(self):
        """Valuation at the prime (l) above 2; inf for zero."""
        if not self:
            return inf
        a, b, v = self.a, self.b, 0
        # l | a + b*l  iff  a is even; quotient is (b - a/2) - (a/2) l.
        while a % 2 == 0:
            a, b = b - a // 2, -a // 2
            v += 1
        return v


def _as_quadint(x):
    if isinstance(x, QuadInt):
        return x
    if isinstance(x, int):
        return QuadInt(x, 0)
    return None


class QuadRat:
    """Element of Q(l) stored as a QuadInt numerator over one positive
    integer denominator, always reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        if isinstance(num, QuadRat):
            num, den = num.num, den * num.den
        if isinstance(num, Fraction):
            num, den = QuadInt(num.numerator, 0), den * num.denominator
        if isinstance(num, int):
            num = QuadInt(num, 0)
        if not isinstance(num, QuadInt) or not isinstance(den, int):
            raise TypeError(f"cannot build QuadRat from {num!r}/{den!r}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(gcd(abs(num.a), abs(num.b)), den)
        if g > 1:
            num = QuadInt(num.a // g, num.b // g)
            den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *args):
        raise AttributeError("QuadRat is immutable")

    # -- ring/field operations -------------------------------------------

    def __add__(self, other):
        other = _as_quadrat(other)
        if other is None:
            return NotImplemented
        return QuadRat(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_quadrat(other)
        if other is None:
            return NotImplemented
        return QuadRat(self.num * other.den - other.num * self.den,
                       self.den * other.den)

    def __rsub__(self, other):
        other = _as_quadrat(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return QuadRat(-self.num, self.den)

    def __mul__(self, other):
        other = _as_quadrat(other)
        if other is None:
            return NotImplemented
        return QuadRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_quadrat(other)
        if other is None:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by zero in Q(l)")
        n = other.num.norm()
        return QuadRat(self.num * other.num.conj() * other.den, self.den * n)

    def __rtruediv__(self, other):
        other = _as_quadrat(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return QuadRat(1) / self ** (-k)
        out = QuadRat(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = _as_quadrat(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.num.b == 0:
            return hash(Fraction(self.num.a, self.den))
        return hash((self.num.a, self.num.b, self.den))

    def __repr__(self):
        return render_quadrat(self)

    # -- structure --------------------------------------------------------

    def conj(self) -> "QuadRat":
        return QuadRat(self.num.conj(), self.den)

    def norm(self) -> Fraction:
        """Field norm to Q, as an exact fraction."""
        return Fraction(self.num.norm(), self.den * self.den)

    def val2(self):
        """2-adic valuation under the fixed embedding; inf for zero."""
        if not self.num:
            return inf
        return self.num.val2() - _int_val2(self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def quadint(self) -> QuadInt:
        if self.den != 1:
            raise ValueError(f"{self!r} is not in O")
        return self.num

    def is_rational(self) -> bool:
        return self.num.b == 0

    def rational(self) -> Fraction:
        if self.num.b != 0:
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num.a, self.den)


def _as_quadrat(x):
    if isinstance(x, QuadRat):
        return x
    if isinstance(x, (int, QuadInt, Fraction)):
        return QuadRat(x)
    return None


def _int_val2(n: int) -> int:
    return (n & -n).bit_length() - 1


LAM = QuadRat(QuadInt(0, 1))
LBAR = QuadRat(QuadInt(-1, -1))
THETA = QuadRat(QuadInt(1, 2))
ZERO = QuadRat(0)
ONE = QuadRat(1)


def val2(x):
    """2-adic valuation of x (int, Fraction, QuadInt or QuadRat)."""
    x = _as_quadrat(x)
    if x is None:
        raise TypeError("val2 wants a Q(l) element")
    return x.val2()


# -- the fixed embedding into Q_2 ------------------------------------------


@lru_cache(maxsize=None)
def hensel_lambda_root(precision: int) -> int:
    """The root of t^2 + t + 2 in Z_2 that is congruent to 0 mod 2,
    returned modulo 2**precision.  This is the image of l."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    t, prec = 0, 1
    while prec < precision:
        prec = min(2 * prec, precision)
        mod = 1 << prec
        fp_inv = pow(2 * t + 1, -1, mod)
        t = (t - (t * t + t + 2) * fp_inv) % mod
    assert (t * t + t + 2) % (1 << precision) == 0 and t % 2 == 0
    return t


@dataclass(frozen=True, slots=True)
class PadicApprox:
    """A 2-adic number known to finitely many digits: the exact valuation
    plus the unit part modulo 2**precision.  Zero is stored with infinite
    valuation and unit 0."""

    valuation: object  # int, or inf for zero
    unit_residue: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.valuation is not inf:
            if self.unit_residue % 2 == 0:
                raise ValueError("unit part must be odd")
            object.__setattr__(self, "unit_residue",
                               self.unit_residue % (1 << self.precision))

    @classmethod
    def zero(cls, precision: int) -> "PadicApprox":
        return cls(inf, 0, precision)

    def is_zero(self) -> bool:
        return self.valuation is inf

    def __mul__(self, other: "PadicApprox") -> "PadicApprox":
        n = min(self.precision, other.precision)
        if self.is_zero() or other.is_zero():
            return PadicApprox.zero(n)
        return PadicApprox(self.valuation + other.valuation,
                           (self.unit_residue * other.unit_residue) % (1 << n),
                           n)

    def agrees_with(self, other: "PadicApprox") -> bool:
        """True when the two approximations coincide on their shared digits."""
        n = min(self.precision, other.precision)
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self.valuation != other.valuation:
            return False
        return (self.unit_residue - other.unit_residue) % (1 << n) == 0

    def residue(self, modulus_exp: int) -> int:
        """The value mod 2**modulus_exp (valuation must be >= 0)."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise ValueError("negative valuation has no integer residue")
        if self.valuation + self.precision < modulus_exp:
            raise ValueError("not enough digits for requested residue")
        return (self.unit_residue << self.valuation) % (1 << modulus_exp)

    def __repr__(self):
        if self.is_zero():
            return f"O(2^inf; N={self.precision})"
        return f"2^{self.valuation} * {self.unit_residue} (mod 2^{self.precision})"


def embed_2adic(x, precision: int) -> PadicApprox:
    """Image of x in Q_2 under the fixed embedding, with exact valuation and
    the unit part to `precision` 2-adic digits."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    x = _as_quadrat(x)
    if x is None:
        raise TypeError("embed_2adic wants a Q(l) element")
    if not x:
        return PadicApprox.zero(precision)
    vnum = x.num.val2()
    vden = _int_val2(x.den)
    # a + b*t needs t to vnum + precision digits to pin the unit part.
    t = hensel_lambda_root(vnum + precision)
    mod = 1 << (vnum + precision)
    n = (x.num.a + x.num.b * t) % mod
    unit = (n >> vnum) % (1 << precision)
    den_odd = x.den >> vden
    unit = (unit * pow(den_odd, -1, 1 << precision)) % (1 << precision)
    return PadicApprox(vnum - vden, unit, precision)


def residue_mod_2pow(x, exp: int) -> int:
    """x mod 2**exp as an integer in [0, 2**exp); requires val2(x) >= 0."""
    x = _as_quadrat(x)
    if exp <= 0:
        return 0
    if not x:
        return 0
    v = x.val2()
    if v < 0:
        raise ValueError(f"{x!r} is not 2-adically integral")
    if v >= exp:
        return 0
    return embed_2adic(x, exp).residue(exp)


# -- text form --------------------------------------------------------------

_TERM_RE = re.compile(
    r"^(?:"
    r"(?P<rat>\d+(?:/\d+)?)"
    r"|(?:\(?(?P<coef>\d+(?:/\d+)?)\)?\*)?(?P<lam>l)"
    r")$"
)


def render_quadrat(x: QuadRat) -> str:
    """Canonical text form 'a/d + (b/d)*l' with zero terms omitted."""
    x = _as_quadrat(x)
    a, b, d = x.num.a, x.num.b, x.den

    def frac(n):
        return str(n) if d == 1 else f"{n}/{d}"

    parts = []
    if a:
        parts.append(("-" if a < 0 else "+", frac(abs(a))))
    if b:
        mag = abs(b)
        if mag == 1 and d == 1:
            body = "l"
        elif d == 1:
            body = f"{mag}*l"
        else:
            body = f"({mag}/{d})*l"
        parts.append(("-" if b < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_quadrat(text: str) -> QuadRat:
    """Parse the grammar produced by render_quadrat."""
    s = text.strip()
    if s == "0":
        return ZERO
    s = s.replace(" ", "")
    tokens = re.findall(r"[+-]|[^+-]+", s)
    total = ZERO
    sign = 1
    have_sign = False
    seen_term = False
    for tok in tokens:
        if tok in "+-":
            if have_sign:
                raise ValueError(f"consecutive signs in {text!r}")
            have_sign = True
            sign = -1 if tok == "-" else 1
            continue
        m = _TERM_RE.match(tok)
        if not m:
            raise ValueError(f"cannot parse {text!r} near {tok!r}")
        if m.group("lam"):
            coef = m.group("coef") or "1"
        else:
            coef = m.group("rat")
        if "/" in coef:
            p, q = coef.split("/")
            value = QuadRat(int(p), int(q))
        else:
            value = QuadRat(int(coef))
        if m.group("lam"):
            value = value * LAM
        total = total + (value if sign > 0 else -value)
        sign = 1
        have_sign = False
        seen_term = True
    if have_sign or not seen_term:
        raise ValueError(f"incomplete expression {text!r}")
    return total
