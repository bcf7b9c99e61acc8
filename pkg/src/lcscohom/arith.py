"""Polynomial arithmetic behind the Mostow-condition arguments.

Univariate polynomials over Q (exact), reductions over small prime
fields with factorization patterns, Sturm chains, the power-basis
recurrence for cubic units, van der Waerden's S_n construction and the
quartic resolvent.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .linalg import ONE, ZERO, Matrix, fmt, scalar


class NotSquarefree(ValueError):
    pass


class DeterminantNotOne(ValueError):
    pass


class WrongRootPattern(ValueError):
    pass


class LeadingCoefficientVanishes(ValueError):
    pass


class SearchExhausted(RuntimeError):
    pass


class CertificateNotApplicable(ValueError):
    pass


# ----------------------------------------------------------------------------------
# polynomials over Q


class Poly:
    """Dense univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [scalar(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, v) -> "Poly":
        return cls([v])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = cls([1])
        for r in roots:
            out = out * cls([-scalar(r), 1])
        return out

    @classmethod
    def parse(cls, text: str) -> "Poly":
        return parse_poly(text)

    @property
    def degree(self) -> int:
        """Degree, with −1 for the zero polynomial."""
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else ZERO

    def coeff(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else ZERO

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.c)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError(f"{self} has non-integer coefficients")
        return [int(x) for x in self.c]

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, type(ZERO))):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        n = max(len(self.c), len(other.c))
        return Poly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-x for x in self.c)

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        if not self.c or not other.c:
            return Poly()
        out = [ZERO] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        out, base = Poly([1]), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = _as_poly(other)
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return Poly(), self
        q = [ZERO] * (dq + 1)
        inv = ONE / other.lc
        for i in range(dq, -1, -1):
            t = r[i + len(other.c) - 1] * inv
            q[i] = t
            if t:
                for j, b in enumerate(other.c):
                    r[i + j] -= t * b
        return Poly(q), Poly(r[:len(other.c) - 1])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x):
        """Horner evaluation at a rational (or any ring element supporting * and +)."""
        out = ZERO
        for a in reversed(self.c):
            out = out * x + a
        return out

    def derivative(self) -> "Poly":
        return Poly(i * a for i, a in enumerate(self.c) if i)

    def monic(self) -> "Poly":
        if not self.c:
            return self
        inv = ONE / self.lc
        return Poly(a * inv for a in self.c)

    def primitive(self) -> "Poly":
        """Integer polynomial with coprime coefficients and positive leading term."""
        if not self.c:
            return self
        den = 1
        for a in self.c:
            den = den * a.denominator // math.gcd(den, int(a.denominator))
        ints = [int(a * den) for a in self.c]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        sgn = -1 if ints[-1] < 0 else 1
        return Poly(v // g * sgn for v in ints)

    def compose(self, other: "Poly") -> "Poly":
        out = Poly()
        for a in reversed(self.c):
            out = out * other + Poly([a])
        return out

    def is_squarefree(self) -> bool:
        return gcd(self, self.derivative()).degree <= 0

    def squarefree_part(self) -> "Poly":
        if self.degree <= 0:
            return self
        return (self // gcd(self, self.derivative())).monic()

    def rational_roots(self) -> list:
        """Distinct rational roots, ascending."""
        if not self.c:
            raise ValueError("the zero polynomial has every root")
        p = self.squarefree_part().primitive() if self.degree > 0 else self
        roots = []
        ints = p.int_coeffs() if p.c else []
        while ints and ints[0] == 0:
            roots.append(mpq(0))
            ints = ints[1:]
        if len(ints) <= 1:
            return sorted(roots)
        a0, an = abs(ints[0]), abs(ints[-1])
        q = Poly(ints)
        for num in _divisors(a0):
            for den in _divisors(an):
                if math.gcd(num, den) != 1:
                    continue
                for r in (mpq(num, den), mpq(-num, den)):
                    if q(r) == 0:
                        roots.append(r)
        return sorted(set(roots))

    def __str__(self) -> str:
        return self.format("x")

    def format(self, var: str = "x") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            mag = abs(a)
            if i == 0:
                body = fmt(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{fmt(mag)}*{mono}"
            parts.append(("-" if a < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sg, b in parts[1:]:
            s += sg + b
        return s

    def __repr__(self) -> str:
        return f"Poly({self})"


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


_PTERM = re.compile(r"([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([a-zA-Z](?:\s*\^\s*(\d+))?)?")


def parse_poly(text: str) -> Poly:
    """Parse expressions like ``"x^4-x-1"``, ``"X^3 + 4X + 1"`` or ``"1/2*x^2-3"``."""
    s = text.replace(" ", "").replace("**", "^").replace("−", "-")
    if not s:
        raise ValueError("empty polynomial")
    var = None
    out = Poly()
    pos = 0
    while pos < len(s):
        mt = _PTERM.match(s, pos)
        if not mt or mt.end() == pos or (mt.group(2) is None and mt.group(3) is None):
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        if pos > 0 and mt.group(1) is None:
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        sign, num, mono, exp = mt.groups()
        c = scalar(num) if num else ONE
        if sign == "-":
            c = -c
        e = 0
        if mono:
            v = mono[0]
            if var is None:
                var = v
            elif v != var:
                raise ValueError(f"more than one variable in {text!r}")
            e = int(exp) if exp else 1
        out = out + Poly([0] * e + [c])
        pos = mt.end()
    return out


# ----------------------------------------------------------------------------------
# Sturm chains


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if not r:
            break
        chain.append(-r)
    return chain


def _variations(chain: Sequence[Poly], x) -> int:
    if x == math.inf or x == -math.inf:
        signs = [_sign(q.lc) * (1 if x > 0 or q.degree % 2 == 0 else -1) for q in chain]
    else:
        signs = [_sign(q(x)) for q in chain]
    signs = [t for t in signs if t]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Poly, lo=-math.inf, hi=math.inf) -> int:
    """Number of distinct real roots of a squarefree p in (lo, hi]."""
    if isinstance(p, str):
        p = parse_poly(p)
    if p.degree < 1:
        return 0
    if not p.is_squarefree():
        raise NotSquarefree(f"{p} is not squarefree")
    lo = lo if lo in (math.inf, -math.inf) or lo is None else scalar(lo)
    hi = hi if hi in (math.inf, -math.inf) or hi is None else scalar(hi)
    lo = -math.inf if lo is None else lo
    hi = math.inf if hi is None else hi
    chain = sturm_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)


def isolate_real_roots(p: Poly, width=mpq(1, 2 ** 40)) -> list[tuple]:
    """Disjoint rational intervals (a, b], each containing exactly one real root."""
    if not p.is_squarefree():
        raise NotSquarefree(f"{p} is not squarefree")
    bound = 1 + max((abs(a / p.lc) for a in p.c[:-1]), default=ZERO)
    chain = sturm_chain(p)
    out = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = _variations(chain, a) - _variations(chain, b)
        if n == 0:
            continue
        if n == 1 and b - a <= width:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack += [(mid, b), (a, mid)]
    return sorted(out)


# ----------------------------------------------------------------------------------
# cubics and the power-basis recurrence


def char_poly_3(A) -> Poly:
    """x³ − a x² + b x − 1 for A ∈ SL(3, Z): a = trace, b = sum of principal 2-minors."""
    M = A if isinstance(A, Matrix) else Matrix(A)
    if M.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    if any(v.denominator != 1 for r in M.rows for v in r):
        raise ValueError("expected an integer matrix")
    det = M.det()
    if det != 1:
        raise DeterminantNotOne(f"det A = {fmt(det)}")
    a = M[0, 0] + M[1, 1] + M[2, 2]
    b = sum(M[i, i] * M[j, j] - M[i, j] * M[j, i] for i, j in ((0, 1), (0, 2), (1, 2)))
    return Poly([-1, b, -a, 1])


def discriminant_cubic(p: Poly) -> object:
    """Δ = 18abc − 4a³c + a²b² − 4b³ − 27c² for monic x³ + ax² + bx + c."""
    if isinstance(p, str):
        p = parse_poly(p)
    if p.degree != 3 or p.lc != 1:
        raise ValueError("expected a monic cubic")
    c, b, a = p.c[0], p.c[1], p.c[2]
    return 18 * a * b * c - 4 * a ** 3 * c + a * a * b * b - 4 * b ** 3 - 27 * c * c


@dataclass(frozen=True)
class CubicRoots:
    pattern: str  # "three_real" or "one_real_pair_complex"
    discriminant: object
    real_root_gt_one: bool
    real_root_interval: tuple | None = None


def classify_cubic_roots(p: Poly) -> CubicRoots:
    if isinstance(p, str):
        p = parse_poly(p)
    if p.degree != 3:
        raise ValueError("expected a cubic")
    if not p.is_squarefree():
        raise NotSquarefree(f"{p} has a repeated root")
    disc = discriminant_cubic(p.monic())
    nreal = sturm_count(p)
    if (disc > 0) != (nreal == 3):
        raise ArithmeticError("discriminant sign and Sturm count disagree")
    if nreal == 3:
        return CubicRoots("three_real", disc, sturm_count(p, 1) > 0)
    iv = isolate_real_roots(p)[0]
    return CubicRoots("one_real_pair_complex", disc, sturm_count(p, 1) == 1, iv)


@dataclass(frozen=True)
class PowerBasis:
    """β^m = x β² + y β + z for a root β of x³ − a x² + b x − 1."""

    m: int
    x: int
    y: int
    z: int


def power_basis_recurrence(a: int, b: int, upto: int) -> Iterator[PowerBasis]:
    """Yield (x_m, y_m, z_m) for m = 1..upto; x₃ = a, y₃ = −b, z₃ = 1."""
    x, y, z = 0, 1, 0
    for m in range(1, upto + 1):
        yield PowerBasis(m, x, y, z)
        x, y, z = a * x + y, z - b * x, x


def _s0_cubic(a: int, b: int) -> Poly:
    return Poly([-1, b, -a, 1])


def _check_s0_pattern(a: int, b: int) -> CubicRoots:
    cls = classify_cubic_roots(_s0_cubic(a, b))
    if cls.pattern != "one_real_pair_complex" or not cls.real_root_gt_one:
        raise WrongRootPattern(f"x^3-({a})x^2+({b})x-1 needs one real root > 1 and a complex pair")
    return cls


def inoue_reality_test(a: int, b: int, N: int, check: bool = True) -> int | None:
    """First m ≤ N with x_m = y_m = 0, i.e. β^m real; None if there is none.

    With the root pattern enforced, β + β̄ = a − α is irrational, so
    β^m = β̄^m forces x_m = y_m = 0 over the integers.
    """
    if check:
        _check_s0_pattern(a, b)
    for t in power_basis_recurrence(a, b, N):
        if t.x == 0 and t.y == 0:
            return t.m
    return None


@dataclass
class GorbatsevichReport:
    verdict: str  # "MostowHolds_UpToBound" or "RationalAngleFound"
    bound: int
    m: int | None
    a: int
    b: int
    eigenvalues: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "bound": self.bound, "m": self.m, "a": self.a, "b": self.b,
                "eigenvalues": self.eigenvalues}


def _eigen_data(p: Poly, a: int) -> dict:
    """Numerical eigenvalue summary: α, lg α and the argument s of β (diagnostic only)."""
    iv = isolate_real_roots(p, mpq(1, 2 ** 200))[0]
    ctx = gmpy2.get_context().copy()
    with gmpy2.context(ctx, precision=200):
        alpha = gmpy2.mpfr(iv[1])
        re_b = (a - alpha) / 2
        im_b = gmpy2.sqrt(1 / alpha - re_b * re_b)
        s = gmpy2.atan2(im_b, re_b)
        lg = gmpy2.log(alpha)
        return {"alpha": f"{alpha:.30f}", "log_alpha": f"{lg:.30f}",
                "Z_eigenvalues": [f"{lg:.20f}", f"{-lg / 2:.20f} +/- {s:.20f}i"],
                "beta_argument": f"{s:.30f}"}


def gorbatsevich_s0_check(A, N: int, validate: bool = True) -> GorbatsevichReport:
    p = char_poly_3(A)
    a, b = int(-p.c[2]), int(p.c[1])
    if validate:
        _check_s0_pattern(a, b)
    m = inoue_reality_test(a, b, N, check=False)
    eig = _eigen_data(p, a) if validate else {}
    if m is None:
        return GorbatsevichReport("MostowHolds_UpToBound", N, None, a, b, eig)
    return GorbatsevichReport("RationalAngleFound", N, m, a, b, eig)


def generalized_reality_test(f: Poly, N: int) -> int | None:
    """First m ≤ N with X^m ≡ constant (mod f), i.e. β^m rational for every root.

    For an irreducible f whose field has no totally real intermediate
    subfield this is equivalent to β^m being real for a non-real root β.
    """
    if f.degree < 1:
        raise ValueError("expected a non-constant polynomial")
    f = f.monic()
    r = Poly([1])
    X = Poly.x()
    for m in range(1, N + 1):
        r = (r * X) % f
        if r.degree <= 0:
            return m
    return None


# ----------------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, lowest first, entries in 0..p-1)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def reduce_mod(f: Poly | Sequence[int], p: int) -> list[int]:
    coeffs = f.int_coeffs() if isinstance(f, Poly) else list(f)
    return _trim([c % p for c in coeffs])


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([v % p for v in out])


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("division by zero polynomial mod p")
    r = list(a)
    if len(r) < len(b):
        return [], _trim(r)
    inv = pow(b[-1], -1, p)
    q = [0] * (len(r) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        t = r[i + len(b) - 1] * inv % p
        q[i] = t
        if t:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] - t * y) % p
    return _trim(q), _trim(r[:len(b) - 1])


def _pmonic(a: list[int], p: int) -> list[int]:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [v * inv % p for v in a]


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return _pmonic(a, p)


def _pderiv(a: list[int], p: int) -> list[int]:
    return _trim([i * v % p for i, v in enumerate(a)][1:])


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    out = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            out = _pdivmod(_pmul(out, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return out


def _squarefree_decomposition(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Monic f = Π g_i^{e_i} with each g_i squarefree (Yun's algorithm with p-th roots)."""
    out: list[tuple[list[int], int]] = []

    def rec(f: list[int], mult: int) -> None:
        if len(f) <= 1:
            return
        c = _pgcd(f, _pderiv(f, p), p)
        w = _pdivmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = _pgcd(w, c, p)
            z = _pdivmod(w, y, p)[0]
            if len(z) > 1:
                out.append((_pmonic(z, p), i * mult))
            i += 1
            w = y
            c = _pdivmod(c, y, p)[0]
        if len(c) > 1:
            # c is a p-th power: c(x) = d(x^p)
            rec([c[i] for i in range(0, len(c), p)], mult * p)

    rec(_pmonic(f, p), 1)
    return out


def _distinct_degree(f: list[int], p: int) -> list[tuple[int, int]]:
    """(degree, count) of irreducible factors of a squarefree monic f."""
    out = []
    h = [0, 1]
    d = 0
    x = [0, 1]
    while 2 * (d + 1) <= len(f) - 1:
        d += 1
        h = _ppowmod(h, p, f, p)
        g = _pgcd(f, _psub(h, x, p), p)
        if len(g) > 1:
            out.append((d, (len(g) - 1) // d))
            f = _pdivmod(f, g, p)[0]
            h = _pdivmod(h, f, p)[1] if len(f) > 1 else h
    if len(f) > 1:
        out.append((len(f) - 1, 1))
    return out


@dataclass(frozen=True)
class FactorPattern:
    prime: int
    degrees: tuple[int, ...]
    squarefree: bool

    @property
    def irreducible(self) -> bool:
        return len(self.degrees) == 1

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.degrees)) + "}"


def factor_pattern(f: Poly | str, prime: int) -> FactorPattern:
    """Degrees (with multiplicity) of the irreducible factors of f mod p."""
    if isinstance(f, str):
        f = parse_poly(f)
    if not gmpy2.is_prime(prime):
        raise ValueError(f"{prime} is not prime")
    g = reduce_mod(f, prime)
    if len(g) - 1 != f.degree:
        raise LeadingCoefficientVanishes(f"leading coefficient of {f} vanishes mod {prime}")
    degrees: list[int] = []
    parts = _squarefree_decomposition(g, prime)
    for part, mult in parts:
        for d, cnt in _distinct_degree(part, prime):
            degrees += [d] * (cnt * mult)
    return FactorPattern(prime, tuple(sorted(degrees)), all(m == 1 for _, m in parts))


def is_irreducible_mod(f: Poly, p: int) -> bool:
    try:
        pat = factor_pattern(f, p)
    except LeadingCoefficientVanishes:
        return False
    return pat.degrees == (f.degree,)


def _monic_polys_mod(p: int, n: int) -> Iterator[list[int]]:
    for tail in product(range(p), repeat=n):
        yield list(tail) + [1]


def first_irreducible_mod(p: int, n: int, exclude: Iterable[Sequence[int]] = ()) -> list[int]:
    ex = {tuple(e) for e in exclude}
    for cand in _monic_polys_mod(p, n):
        if tuple(cand) in ex:
            continue
        if n == 1 or factor_pattern(Poly(cand), p).degrees == (n,):
            return cand
    raise SearchExhausted(f"no irreducible polynomial of degree {n} mod {p}")


# ----------------------------------------------------------------------------------
# van der Waerden construction


@dataclass
class VdwResult:
    f: Poly
    f1: Poly
    f2: Poly
    f3: Poly
    base: Poly
    g: Poly
    certificate: dict

    def as_dict(self) -> dict:
        return {"f": str(self.f), "f1": str(self.f1), "f2": str(self.f2), "f3": str(self.f3),
                "g": str(self.g), "certificate": self.certificate}


def _pattern_ok_mod5(degrees: tuple[int, ...], n: int) -> bool:
    if n % 2:
        return degrees == tuple(sorted((2, n - 2)))
    if len(degrees) != 3 or 2 not in degrees:
        return False
    rest = list(degrees)
    rest.remove(2)
    return all(d % 2 for d in rest)


def vdw_patterns_ok(f: Poly) -> dict:
    """Check the three reduction patterns that force Galois group S_n."""
    n = f.degree
    p2, p3, p5 = (factor_pattern(f, p) for p in (2, 3, 5))
    return {
        "mod2": {"pattern": list(p2.degrees), "ok": p2.degrees == (n,)},
        "mod3": {"pattern": list(p3.degrees), "ok": p3.squarefree and p3.degrees == tuple(sorted((1, n - 1)))},
        "mod5": {"pattern": list(p5.degrees), "ok": p5.squarefree and _pattern_ok_mod5(p5.degrees, n)},
    }


def vdw_polynomial(n: int, s: int, seed: int | None = None, box: int = 3, max_box: int = 6) -> VdwResult:
    """Monic integer f of degree n with Galois group S_n and exactly s real roots.

    f₁, f₂, f₃ realize the patterns {n} mod 2, {1, n−1} mod 3 and a quadratic
    times odd-degree factors mod 5; f = −15f₁ + 10f₂ + 6f₃ inherits all three,
    and so does every f + 30g.  g is searched in a box around the rounding
    of (h − f)/30, h having s well separated real roots and one complex pair.
    """
    if n < 3 or s != n - 2:
        raise ValueError("need n = s + 2 >= 3")
    f1 = Poly(first_irreducible_mod(2, n))
    lin3 = [0, 1]
    f2 = Poly(_pmul(lin3, first_irreducible_mod(3, n - 1, exclude=[lin3] if n - 1 == 1 else []), 3))
    quad = first_irreducible_mod(5, 2)
    if n % 2:
        f3 = Poly(_pmul(quad, first_irreducible_mod(5, n - 2), 5))
    else:
        lin5 = [0, 1]
        other = first_irreducible_mod(5, n - 3, exclude=[lin5])
        f3 = Poly(_pmul(_pmul(quad, lin5, 5), other, 5))
    base = -15 * f1 + 10 * f2 + 6 * f3
    assert base.lc == 1

    offsets = list(range(-box, box + 1))
    offsets.sort(key=lambda v: (abs(v), v))
    if seed is not None:
        random.Random(seed).shuffle(offsets)
    tried = []
    for spacing in (4, 10, 30, 100):
        roots = [spacing * (i - (s - 1) / 2) for i in range(s)]
        h = Poly.from_roots(scalar(str(int(2 * r))) / 2 for r in roots) * Poly([1, 0, 1])
        center = [_round_half_away((h.coeff(i) - base.coeff(i)) / 30) for i in range(n)]
        tried.append({"spacing": spacing, "center": center, "box": box})
        for off in product(offsets, repeat=n):
            g = Poly(c + o for c, o in zip(center, off))
            f = base + 30 * g
            if f.is_squarefree() and sturm_count(f) == s:
                cert = _vdw_certificate(f, f1, f2, f3, s)
                if cert["ok"]:
                    return VdwResult(f, f1, f2, f3, base, g, cert)
    if box < max_box:
        return vdw_polynomial(n, s, seed, box + 1, max_box)
    raise SearchExhausted(f"no g found; tried {tried}")


def _round_half_away(x) -> int:
    x = scalar(x)
    q = int(gmpy2.f_div(x.numerator * 2 + x.denominator, 2 * x.denominator))
    return q


def _vdw_certificate(f: Poly, f1: Poly, f2: Poly, f3: Poly, s: int) -> dict:
    pats = vdw_patterns_ok(f)
    congr = {
        "f=f1 mod 2": reduce_mod(f, 2) == reduce_mod(f1, 2),
        "f=f2 mod 3": reduce_mod(f, 3) == reduce_mod(f2, 3),
        "f=f3 mod 5": reduce_mod(f, 5) == reduce_mod(f3, 5),
    }
    real = sturm_count(f)
    ok = all(v["ok"] for v in pats.values()) and all(congr.values()) and real == s
    return {"patterns": pats, "congruences": congr, "real_roots": real,
            "complex_pairs": (f.degree - real) // 2, "ok": ok}


# ----------------------------------------------------------------------------------
# quartics


def depress_quartic(q: Poly) -> Poly:
    """Substitute x ↦ x − a₃/4 in a monic quartic."""
    if q.degree != 4 or q.lc != 1:
        raise ValueError("expected a monic quartic")
    return q.compose(Poly([-q.coeff(3) / 4, 1]))


def resolvent_cubic(q: Poly | str) -> Poly:
    """y³ − 2py² + (p² − 4r)y + q² for x⁴ + px² + qx + r."""
    if isinstance(q, str):
        q = parse_poly(q)
    d = depress_quartic(q)
    P, Qc, R = d.coeff(2), d.coeff(1), d.coeff(0)
    return Poly([Qc * Qc, P * P - 4 * R, -2 * P, 1])


def _is_square_rational(x) -> bool:
    x = scalar(x)
    return x >= 0 and gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)


def _primes(limit: int) -> Iterator[int]:
    p = 2
    while p <= limit:
        yield p
        p = int(gmpy2.next_prime(p))


def galois_s4_certificate(q: Poly | str, prime_limit: int = 200) -> dict:
    """Certify Gal(q) ≅ S₄ from three legs; raises if any leg fails."""
    if isinstance(q, str):
        q = parse_poly(q)
    if q.degree != 4 or q.lc != 1 or not q.is_integral():
        raise ValueError("expected a monic integer quartic")
    failures = []
    irr_prime = next((p for p in _primes(prime_limit)
                      if reduce_mod(q, p) and factor_pattern(q, p).degrees == (4,)), None)
    if irr_prime is None:
        failures.append(f"no prime <= {prime_limit} with q irreducible mod p")
    res = resolvent_cubic(q)
    res_int = res.primitive() if not res.is_integral() else res
    roots = res.rational_roots()
    res_prime = None
    if roots:
        failures.append(f"resolvent {res} has rational roots {[fmt(r) for r in roots]}")
    else:
        res_prime = next((p for p in _primes(prime_limit)
                          if res_int.lc % p and factor_pattern(res_int, p).degrees == (3,)), None)
        if res_prime is None:
            failures.append(f"no prime <= {prime_limit} with the resolvent irreducible mod p")
    disc = discriminant_cubic(res)
    if _is_square_rational(disc):
        failures.append(f"discriminant {fmt(disc)} is a rational square")
    if failures:
        raise CertificateNotApplicable("; ".join(failures))
    return {"galois": "S4", "quartic": str(q), "irreducible_mod": irr_prime,
            "resolvent": str(res), "resolvent_rational_roots": [], "resolvent_irreducible_mod": res_prime,
            "discriminant": int(disc) if disc.denominator == 1 else fmt(disc), "discriminant_is_square": False}
