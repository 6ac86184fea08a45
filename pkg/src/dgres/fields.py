"""Exact arithmetic in towers k0 < k1 < ... < kn of simple algebraic extensions.

The base k0 is either the rationals or a prime field.  Elements are kept in a
raw canonical form so that equality is plain ``==``:

* rationals: :class:`fractions.Fraction`
* prime field F_p: ``int`` in ``[0, p)``
* level n > 0: a tuple of ``deg(f_n)`` elements of level n-1, the coefficients
  of the representative polynomial in the level-n generator, reduced modulo
  the monic minimal polynomial ``f_n``.

Every :class:`FieldTower` exposes the arithmetic of its top level as plain
methods (``add``, ``mul``, ``inv``, ...).  Hot loops in the rest of the package
work on raw elements through these methods; :class:`Scalar` is the checked,
operator-overloaded wrapper for user-facing code.
"""
from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction

from .errors import (
    DegreeBoundExceeded,
    DivisionByZero,
    NonMonic,
    ReduciblePolynomial,
    ScalarSyntaxError,
    TowerMismatch,
)

DEFAULT_DEGREE_BOUND = 6


def _is_prime(p):
    if p < 2:
        return False
    for q in range(2, math.isqrt(p) + 1):
        if p % q == 0:
            return False
    return True


class FieldTower:
    """One level of a tower; ``parent`` is the level below (None at the base)."""

    def __init__(self, characteristic=0, steps=()):
        if characteristic and not _is_prime(characteristic):
            raise ValueError(f"{characteristic} is not prime")
        self.characteristic = characteristic
        self.steps = tuple((name, tuple(coeffs)) for name, coeffs in steps)
        self.height = len(self.steps)
        if self.height:
            self.parent = FieldTower(characteristic, self.steps[:-1])
            name, minpoly = self.steps[-1]
            self.generator_name = name
            self.minpoly = minpoly
            self.step_degree = len(minpoly) - 1
            self.degree = self.parent.degree * self.step_degree
            self._setup_extension()
        else:
            self.parent = None
            self.generator_name = None
            self.minpoly = None
            self.step_degree = 1
            self.degree = 1
            if characteristic:
                self._setup_prime()
            else:
                self._setup_rationals()
        self._key = (self.characteristic, self.steps)
        self._hash = hash(self._key)

    # -- construction -----------------------------------------------------
    def _setup_rationals(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)
        self.add = lambda a, b: a + b
        self.sub = lambda a, b: a - b
        self.neg = lambda a: -a
        self.mul = lambda a, b: a * b

        def inv(a):
            if not a:
                raise DivisionByZero("inverse of zero")
            return 1 / a

        self.inv = inv
        self.is_zero = lambda a: not a
        self.from_int = Fraction
        self.order = None

    def _setup_prime(self):
        p = self.characteristic
        self.zero = 0
        self.one = 1 % p
        self.add = lambda a, b: (a + b) % p
        self.sub = lambda a, b: (a - b) % p
        self.neg = lambda a: (-a) % p
        self.mul = lambda a, b: (a * b) % p

        def inv(a):
            if a % p == 0:
                raise DivisionByZero("inverse of zero")
            return pow(a, p - 2, p)

        self.inv = inv
        self.is_zero = lambda a: a == 0
        self.from_int = lambda n: n % p
        self.order = p

    def _setup_extension(self):
        P = self.parent
        d = self.step_degree
        m = self.minpoly
        self.zero = (P.zero,) * d
        self.one = (P.one,) + (P.zero,) * (d - 1)
        zero = self.zero
        self.order = P.order ** d if P.order else None

        def add(a, b):
            return tuple(P.add(x, y) for x, y in zip(a, b))

        def sub(a, b):
            return tuple(P.sub(x, y) for x, y in zip(a, b))

        def neg(a):
            return tuple(P.neg(x) for x in a)

        pz, padd, pmul, psub = P.is_zero, P.add, P.mul, P.sub

        def mul(a, b):
            if a == zero or b == zero:
                return zero
            prod = [P.zero] * (2 * d - 1)
            for i, ai in enumerate(a):
                if pz(ai):
                    continue
                for j, bj in enumerate(b):
                    if pz(bj):
                        continue
                    prod[i + j] = padd(prod[i + j], pmul(ai, bj))
            for k in range(2 * d - 2, d - 1, -1):
                c = prod[k]
                if pz(c):
                    continue
                for i in range(d):
                    if not pz(m[i]):
                        prod[k - d + i] = psub(prod[k - d + i], pmul(c, m[i]))
            return tuple(prod[:d])

        def inv(a):
            if a == zero:
                raise DivisionByZero("inverse of zero")
            s, _, g = poly_xgcd(P, list(a), list(m))
            # g is a nonzero constant since minpoly is irreducible
            c = P.inv(g[0])
            s = [P.mul(c, x) for x in s] + [P.zero] * d
            return tuple(s[:d])

        self.add, self.sub, self.neg, self.mul, self.inv = add, sub, neg, mul, inv
        self.is_zero = lambda a: a == zero
        self.from_int = lambda n: (P.from_int(n),) + (P.zero,) * (d - 1)

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        base = "QQ" if not self.characteristic else f"GF({self.characteristic})"
        for name, coeffs in self.steps:
            base += f"[{name}]"
        return f"FieldTower({base}, degree={self.degree})"

    # -- structure --------------------------------------------------------
    @property
    def base(self):
        lv = self
        while lv.parent is not None:
            lv = lv.parent
        return lv

    def level(self, i):
        """The sub-tower consisting of the first ``i`` steps."""
        lv = self
        while lv.height > i:
            lv = lv.parent
        if lv.height != i:
            raise TowerMismatch(f"no level {i} in {self}")
        return lv

    @property
    def generator_names(self):
        return [name for name, _ in self.steps]

    def is_prefix_of(self, other):
        return (
            self.characteristic == other.characteristic
            and other.steps[: self.height] == self.steps
        )

    def degree_over(self, sub):
        if not sub.is_prefix_of(self):
            raise TowerMismatch(f"{sub} is not a sub-tower of {self}")
        return self.degree // sub.degree

    def generator(self):
        if not self.height:
            raise TowerMismatch("base field has no generator")
        P = self.parent
        return (P.zero, P.one) + (P.zero,) * (self.step_degree - 2)

    # -- conversions ------------------------------------------------------
    def coerce(self, x):
        """Accept ints, Fractions, literal strings, Scalars or raw elements."""
        if isinstance(x, Scalar):
            return x.embed(self).value
        if isinstance(x, str):
            return parse_scalar(self, x).value
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            if self.height:
                return self.embed(self.base.coerce(x), self.base)
            if self.characteristic:
                p = self.characteristic
                if x.denominator % p == 0:
                    raise DivisionByZero(f"{x} has no image in GF({p})")
                return (x.numerator * pow(x.denominator, p - 2, p)) % p
            return x
        if isinstance(x, tuple) and self.height and len(x) == self.step_degree:
            return tuple(self.parent.coerce(c) for c in x)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def embed(self, x, source):
        """Lift raw element ``x`` of sub-tower ``source`` into this level."""
        if source.height > self.height or not source.is_prefix_of(self):
            raise TowerMismatch(f"{source} is not a sub-tower of {self}")
        lv = self
        chain = []
        while lv.height > source.height:
            chain.append(lv)
            lv = lv.parent
        for lv in reversed(chain):
            x = (x,) + (lv.parent.zero,) * (lv.step_degree - 1)
        return x

    def coords(self, x, over=None):
        """Flatten ``x`` to its coordinate list over the sub-tower ``over``."""
        over = over if over is not None else self.base
        if self.height == over.height:
            return [x]
        out = []
        for c in x:
            out.extend(self.parent.coords(c, over))
        return out

    def from_coords(self, coords, over=None):
        over = over if over is not None else self.base
        if self.height == over.height:
            (x,) = coords
            return x
        n = self.parent.degree_over(over)
        return tuple(
            self.parent.from_coords(coords[i * n:(i + 1) * n], over)
            for i in range(self.step_degree)
        )

    def basis_over(self, over=None):
        """Monomial basis of this level as a vector space over ``over``."""
        over = over if over is not None else self.base
        n = self.degree_over(over)
        out = []
        for i in range(n):
            c = [over.zero] * n
            c[i] = over.one
            out.append(self.from_coords(c, over))
        return out

    def elements(self):
        """Enumerate all elements (finite fields only)."""
        if not self.order:
            raise TypeError("infinite field")
        if not self.height:
            return list(range(self.characteristic))
        sub = self.parent.elements()
        return [tuple(t) for t in itertools.product(sub, repeat=self.step_degree)]

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def random_element(self, rng, spread=3):
        """Small random element; rationals drawn as a/b with |a|,b <= spread."""
        if not self.height:
            if self.characteristic:
                return rng.randrange(self.characteristic)
            return Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
        return tuple(self.parent.random_element(rng, spread) for _ in range(self.step_degree))

    def scalar(self, x):
        return Scalar(self, self.coerce(x))


def rationals():
    return FieldTower(0)


def prime_field(p):
    return FieldTower(p)


# ---------------------------------------------------------------------------
# polynomials over a tower level: coefficient lists, lowest degree first
# ---------------------------------------------------------------------------

def poly_trim(F, f):
    f = list(f)
    while f and F.is_zero(f[-1]):
        f.pop()
    return f


def poly_add(F, f, g):
    n = max(len(f), len(g))
    f = list(f) + [F.zero] * (n - len(f))
    g = list(g) + [F.zero] * (n - len(g))
    return poly_trim(F, [F.add(a, b) for a, b in zip(f, g)])


def poly_sub(F, f, g):
    return poly_add(F, f, [F.neg(c) for c in g])


def poly_mul(F, f, g):
    if not f or not g:
        return []
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return poly_trim(F, out)


def poly_divmod(F, f, g):
    f = poly_trim(F, f)
    g = poly_trim(F, g)
    if not g:
        raise DivisionByZero("polynomial division by zero")
    lead_inv = F.inv(g[-1])
    q = [F.zero] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g):
        c = F.mul(r[-1], lead_inv)
        shift = len(r) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = F.sub(r[shift + i], F.mul(c, b))
        r = poly_trim(F, r)
    return poly_trim(F, q), r


def poly_monic(F, f):
    f = poly_trim(F, f)
    if not f:
        return f
    c = F.inv(f[-1])
    return [F.mul(c, a) for a in f]


def poly_gcd(F, f, g):
    f, g = poly_trim(F, f), poly_trim(F, g)
    while g:
        f, g = g, poly_divmod(F, f, g)[1]
    return poly_monic(F, f)


def poly_xgcd(F, f, g):
    """Return (s, t, r) with s*f + t*g = r = gcd (not normalised)."""
    r0, r1 = poly_trim(F, f), poly_trim(F, g)
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(F, s0, poly_mul(F, q, s1))
        t0, t1 = t1, poly_sub(F, t0, poly_mul(F, q, t1))
    return s0, t0, r0


def poly_powmod(F, f, n, modulus):
    result = [F.one]
    base = poly_divmod(F, f, modulus)[1]
    while n:
        if n & 1:
            result = poly_divmod(F, poly_mul(F, result, base), modulus)[1]
        base = poly_divmod(F, poly_mul(F, base, base), modulus)[1]
        n >>= 1
    return result


def poly_eval(F, f, x):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------

def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _sqrt(K, D):
    """A square root of ``D`` in level ``K`` or None (char 0, height <= 1)."""
    if K.height == 0:
        return _rational_sqrt(D)
    Q = K.parent
    c0, c1, _ = K.minpoly
    # gamma = beta + c1/2 satisfies gamma^2 = dd
    half_c1 = c1 / 2
    dd = half_c1 * half_c1 - c0
    a, b = D[0] - D[1] * half_c1, D[1]  # D = a + b*gamma
    candidates = []
    if b == 0:
        s = _rational_sqrt(a)
        if s is not None:
            candidates.append((s, Fraction(0)))
        s = _rational_sqrt(a / dd)
        if s is not None:
            candidates.append((Fraction(0), s))
    else:
        s = _rational_sqrt(a * a - dd * b * b)
        if s is not None:
            for sign in (1, -1):
                u = _rational_sqrt((a + sign * s) / 2)
                if u:
                    candidates.append((u, b / (2 * u)))
    for u, v in candidates:
        root = (u + v * half_c1, v)
        if K.mul(root, root) == tuple(D):
            return root
    return None


def _linear_factor(F, r):
    return [F.neg(r), F.one]


def irreducibility_check(tower, poly, degree_bound=DEFAULT_DEGREE_BOUND):
    """Return True if ``poly`` is irreducible over ``tower``, else a monic factor.

    ``poly`` is a coefficient list (lowest first) of raw elements or anything
    :meth:`FieldTower.coerce` accepts.
    """
    F = tower
    f = poly_trim(F, [F.coerce(c) for c in poly])
    n = len(f) - 1
    if n < 1:
        raise ValueError("constant polynomial")
    if n > degree_bound:
        raise DegreeBoundExceeded(f"degree {n} exceeds bound {degree_bound}")
    if n == 1:
        return True
    if F.is_zero(f[0]):
        return [F.zero, F.one]
    if F.order:
        return _irreducible_finite(F, f, n)
    if F.height == 0:
        if n > 3:
            raise DegreeBoundExceeded("over QQ only degrees <= 3 are decided")
        r = _rational_root(f)
        return True if r is None else _linear_factor(F, r)
    if F.height == 1 and F.step_degree == 2 and n == 2:
        f = poly_monic(F, f)
        b, c = f[1], f[0]
        disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), c))
        s = _sqrt(F, disc)
        if s is None:
            return True
        root = F.mul(F.sub(s, b), F.inv(F.from_int(2)))
        return _linear_factor(F, root)
    raise DegreeBoundExceeded(
        "characteristic-0 irreducibility is decided over QQ (degree <= 3) and for "
        "quadratics over quadratic fields only"
    )


def _rational_root(f):
    den = 1
    for c in f:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(m):
        return [d for d in range(1, m + 1) if m % d == 0]

    for p in divisors(a0):
        for q in divisors(an):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * r ** i for i, c in enumerate(ints)) == 0:
                    return r
    return None


def _irreducible_finite(F, f, n):
    q = F.order
    f = poly_monic(F, f)
    if n <= 3 and q <= 10 ** 4:
        for r in F.elements():
            if F.is_zero(poly_eval(F, f, r)):
                return _linear_factor(F, r)
        return True
    x = [F.zero, F.one]
    xp = x
    for i in range(1, n // 2 + 1):
        xp = poly_powmod(F, xp, q, f)
        g = poly_gcd(F, f, poly_sub(F, xp, x))
        if len(g) > 1:
            if len(g) < len(f):
                return g
            return _search_factor(F, f, i)
    return True


def _search_factor(F, f, deg):
    if F.order ** deg > 10 ** 5:
        raise DegreeBoundExceeded("factor search space too large")
    for tail in itertools.product(F.elements(), repeat=deg):
        g = list(tail) + [F.one]
        if not poly_divmod(F, f, g)[1]:
            return g
    raise AssertionError("no factor found for a reducible polynomial")


def make_extension(tower, minpoly, name=None, degree_bound=DEFAULT_DEGREE_BOUND):
    """Extend ``tower`` by a root of the monic irreducible ``minpoly``."""
    F = tower
    coeffs = [F.coerce(c) for c in minpoly]
    coeffs = poly_trim(F, coeffs)
    if len(coeffs) < 3:
        raise ValueError("minimal polynomial must have degree >= 2")
    if coeffs[-1] != F.one:
        raise NonMonic("minimal polynomial must be monic")
    if name is None:
        name = f"g{F.height + 1}"
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
        raise ValueError(f"bad generator name {name!r}")
    if name in F.generator_names:
        raise ValueError(f"generator name {name!r} already used")
    verdict = irreducibility_check(F, coeffs, degree_bound)
    if verdict is not True:
        raise ReduciblePolynomial(verdict, f"reducible; factor {format_poly(F, verdict)}")
    return FieldTower(F.characteristic, F.steps + ((name, tuple(coeffs)),))


# ---------------------------------------------------------------------------
# literals
# ---------------------------------------------------------------------------

def _monomials(F, x):
    """Yield (exponent tuple, base coefficient) pairs for nonzero terms."""
    if F.height == 0:
        if not F.is_zero(x):
            yield (), x
        return
    for i, c in enumerate(x):
        for exps, coeff in _monomials(F.parent, c):
            yield exps + (i,), coeff


def _base_str(F, c):
    if F.characteristic:
        return str(c)
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(F, x):
    terms = []
    names = F.generator_names
    for exps, coeff in sorted(_monomials(F, x), key=lambda t: (sum(t[0]), t[0])):
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
        )
        cs = _base_str(F.base, coeff)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        terms.append(("-" if neg else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += sign + body
    return out


def format_poly(F, f):
    return "[" + ", ".join(format_scalar(F, c) for c in f) + "]"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num), m.start(1)))
        elif name is not None:
            tokens.append(("name", name, m.start(2)))
        elif op is not None and not op.isspace():
            if op not in "+-*/^()":
                raise ScalarSyntaxError(f"unexpected character {op!r} at {m.start(3)}")
            tokens.append(("op", op, m.start(3)))
        pos = m.end()
    return tokens


def parse_scalar(tower, text):
    """Parse a literal such as ``"3/4"``, ``"1+2*g"`` or ``"g2^2-1/3"``."""
    F = tower
    tokens = _tokenize(str(text))
    if not tokens:
        raise ScalarSyntaxError("empty scalar literal")
    gens = {}
    lv = F
    while lv.height:
        gens[lv.generator_name] = F.embed(lv.generator(), lv)
        lv = lv.parent
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, len(text))

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        val = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            val = F.add(val, rhs) if op == "+" else F.sub(val, rhs)
        return val

    def term():
        val = unary()
        while peek()[0] == "op" and peek()[1] in "*/":
            op = take()[1]
            rhs = unary()
            if op == "*":
                val = F.mul(val, rhs)
            else:
                if F.is_zero(rhs):
                    raise DivisionByZero(f"division by zero in {text!r}")
                val = F.mul(val, F.inv(rhs))
        return val

    def unary():
        if peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            val = unary()
            return F.neg(val) if op == "-" else val
        return power()

    def power():
        val = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            kind, e, where = take()
            if kind != "num":
                raise ScalarSyntaxError(f"exponent must be a non-negative integer at {where}")
            val = F.pow(val, e)
        return val

    def atom():
        kind, val, where = take()
        if kind == "num":
            return F.from_int(val)
        if kind == "name":
            if val not in gens:
                raise ScalarSyntaxError(f"unknown generator {val!r} at {where}")
            return gens[val]
        if kind == "op" and val == "(":
            inner = expr()
            if take()[1] != ")":
                raise ScalarSyntaxError(f"missing ')' in {text!r}")
            return inner
        raise ScalarSyntaxError(f"unexpected token {val!r} at {where} in {text!r}")

    value = expr()
    if pos != len(tokens):
        raise ScalarSyntaxError(f"trailing input at {tokens[pos][2]} in {text!r}")
    return Scalar(F, value)


# ---------------------------------------------------------------------------
# checked scalars
# ---------------------------------------------------------------------------

class Scalar:
    """An element of a tower level with operator overloading."""

    __slots__ = ("tower", "value")

    def __init__(self, tower, value):
        self.tower = tower
        self.value = value

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.tower != self.tower:
                raise TowerMismatch(f"{other.tower} vs {self.tower}")
            return other.value
        return self.tower.coerce(other)

    def __add__(self, other):
        return Scalar(self.tower, self.tower.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.tower, self.tower.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.tower, self.tower.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.tower, self.tower.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.tower, self.tower.neg(self.value))

    def __truediv__(self, other):
        return self * Scalar(self.tower, self._other(other)).inverse()

    def __pow__(self, n):
        return Scalar(self.tower, self.tower.pow(self.value, n))

    def inverse(self):
        return Scalar(self.tower, self.tower.inv(self.value))

    def is_zero(self):
        return self.tower.is_zero(self.value)

    def embed(self, tower):
        if tower == self.tower:
            return self
        return Scalar(tower, tower.embed(self.value, self.tower))

    def coefficients(self):
        return self.tower.coords(self.value)

    def canonical(self):
        return Scalar(self.tower, self.tower.from_coords(self.coefficients()))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.tower == other.tower and self.value == other.value
        try:
            return self.value == self.tower.coerce(other)
        except (TypeError, DivisionByZero):
            return NotImplemented

    def __hash__(self):
        return hash((self.tower, self.value))

    def __str__(self):
        return format_scalar(self.tower, self.value)

    def __repr__(self):
        return f"Scalar({self})"
