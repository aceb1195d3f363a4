"""Exact arithmetic in GF(p) and GF(p^k), quadratic characters, and
projective point enumeration.

Fields of characteristic 2 and 3 are rejected at construction: the
root-counting kernel below needs odd field order, and 3 is the bad prime
of every identity downstream.  Elements are immutable and carry a
reference to their field; all operations are pure functions, so values
can be shared freely across threads.

Extension fields GF(p^k) are represented as GF(p)[x]/(m) for a monic
irreducible modulus m, by default the lexicographically first one (see
``find_irreducible``), so that every count is reproducible across runs.
Elements are stored as canonical coefficient tuples (c0, ..., c_{k-1})
and also admit an integer encoding sum(c_i * p^i) in [0, p^k), used by
the table-driven counters.
"""

from itertools import product


class FieldError(ValueError):
    """Invalid field construction or operation (mixed fields, zero division)."""


def is_prime(n: int) -> bool:
    """Trial-division primality test; all primes here are desk scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), used for moduli (coefficient lists, ascending)

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] % p
        if c:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return _ptrim(a)


def _pmulmod(a, b, m, p):
    return _pmod(_pmul(a, b, p), m, p)


def _ppowmod(base, e, m, p):
    result = [1]
    acc = _pmod(list(base), m, p)
    while e > 0:
        if e & 1:
            result = _pmulmod(result, acc, m, p)
        acc = _pmulmod(acc, acc, m, p)
        e >>= 1
    return result


def _pmonic(b, p):
    inv = pow(b[-1], p - 2, p)
    return [(c * inv) % p for c in b]


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, _pmonic(b, p), p)
    return a


def _is_irreducible(f, p):
    """f monic with coefficients mod p, degree >= 1."""
    k = len(f) - 1
    if k == 1:
        return True
    x = [0, 1]
    # x^(p^k) == x mod f, and gcd(x^(p^(k/d)) - x, f) = 1 for prime d | k
    if _ppowmod(x, p ** k, f, p) != x:
        return False
    for d in _prime_divisors(k):
        g = _ppowmod(x, p ** (k // d), f, p)
        g = _ptrim([(gi - xi) % p for gi, xi in _zip_pad(g, x)])
        if len(_pgcd(f, g, p)) != 1:
            return False
    return True


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def find_irreducible(p: int, k: int) -> tuple:
    """Lexicographically first monic irreducible of degree k over GF(p).

    Coefficients ascending, (c0, ..., c_{k-1}, 1); the scan runs over
    (c0, ..., c_{k-1}) in lexicographic order so the result is
    deterministic.  k = 1 returns x itself.
    """
    if not is_prime(p) or p in (2, 3):
        raise FieldError(f"characteristic must be a prime >= 5, got {p}")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if k == 1:
        return (0, 1)
    for tail in product(range(p), repeat=k):
        f = list(tail) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise FieldError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# fields and elements

class PrimeField:
    """GF(p) for an odd prime p >= 5."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p in (2, 3):
            raise FieldError(f"bad prime {p}: characteristic 2 and 3 are excluded")
        self.p = p

    @property
    def char(self):
        return self.p

    @property
    def degree(self):
        return 1

    @property
    def order(self):
        return self.p

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element from a different field")
            return value
        return FieldElement(self, (int(value) % self.p,))

    def zero(self):
        return FieldElement(self, (0,))

    def one(self):
        return FieldElement(self, (1,))

    def from_encoding(self, e: int) -> "FieldElement":
        if not 0 <= e < self.p:
            raise FieldError(f"encoding {e} out of range for {self!r}")
        return FieldElement(self, (e,))

    def elements(self):
        for v in range(self.p):
            yield FieldElement(self, (v,))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class ExtField:
    """GF(p^k), k >= 2, as GF(p)[x]/(modulus) with a monic irreducible modulus."""

    __slots__ = ("base", "k", "modulus")

    def __init__(self, base, k: int, modulus=None):
        if isinstance(base, int):
            base = PrimeField(base)
        if k < 2:
            raise FieldError(f"extension degree must be >= 2, got {k} (use PrimeField)")
        if modulus is None:
            modulus = find_irreducible(base.p, k)
        modulus = tuple(c % base.p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not _is_irreducible(list(modulus), base.p):
            raise FieldError("modulus is reducible")
        self.base = base
        self.k = k
        self.modulus = modulus

    @property
    def char(self):
        return self.base.p

    @property
    def degree(self):
        return self.k

    @property
    def order(self):
        return self.base.p ** self.k

    def element(self, value) -> "FieldElement":
        """Build an element from an integer (constant embedding) or coefficients."""
        p = self.base.p
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element from a different field")
            return value
        if isinstance(value, int):
            coeffs = (value % p,) + (0,) * (self.k - 1)
            return FieldElement(self, coeffs)
        coeffs = [c % p for c in value]
        if len(coeffs) > self.k:
            raise FieldError("too many coefficients")
        coeffs += [0] * (self.k - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def from_encoding(self, e: int) -> "FieldElement":
        p = self.base.p
        if not 0 <= e < self.order:
            raise FieldError(f"encoding {e} out of range for {self!r}")
        coeffs = []
        for _ in range(self.k):
            coeffs.append(e % p)
            e //= p
        return FieldElement(self, tuple(coeffs))

    def elements(self):
        for e in range(self.order):
            yield self.from_encoding(e)

    def __eq__(self, other):
        return (isinstance(other, ExtField) and other.base == self.base
                and other.k == self.k and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("GF", self.base.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.base.p}^{self.k})"


def field_of_order(q: int):
    """The field with q = p^k elements (p >= 5; default modulus for k >= 2)."""
    if q < 5:
        raise FieldError(f"field order {q} not supported (char 2 and 3 excluded)")
    p = None
    for d in range(2, q + 1):
        if d * d > q and p is None:
            p = q
            break
        if q % d == 0:
            p = d
            break
    k = 0
    m = q
    while m % p == 0 and m > 1:
        m //= p
        k += 1
    if m != 1:
        raise FieldError(f"{q} is not a prime power")
    if k == 1:
        return PrimeField(p)
    return ExtField(PrimeField(p), k)


class FieldElement:
    """Element of GF(p) or GF(p^k), canonical coefficient tuple, immutable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    @property
    def encoding(self) -> int:
        p = self.field.char
        e = 0
        for c in reversed(self.coeffs):
            e = e * p + c
        return e

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise FieldError(f"cannot combine field element with {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field!r} and {other.field!r}")

    def __add__(self, other):
        self._check(other)
        p = self.field.char
        return FieldElement(self.field,
                            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        p = self.field.char
        return FieldElement(self.field,
                            tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.field.char
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        p = self.field.char
        if len(self.coeffs) == 1:
            return FieldElement(self.field, ((self.coeffs[0] * other.coeffs[0]) % p,))
        prod = _pmul(list(self.coeffs), list(other.coeffs), p)
        red = _pmod(prod, list(self.field.modulus), p)
        red += [0] * (self.field.k - len(red))
        return FieldElement(self.field, tuple(red))

    def inverse(self):
        if self.is_zero:
            raise FieldError("division by zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        acc = self
        while e > 0:
            if e & 1:
                result = result * acc
            acc = acc * acc
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.element(other)
        return (isinstance(other, FieldElement) and other.field == self.field
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if len(self.coeffs) == 1:
            return f"{self.coeffs[0]} in {self.field!r}"
        return f"{list(self.coeffs)} in {self.field!r}"


def field_arith(a: FieldElement, b, op: str) -> FieldElement:
    """Dispatch one arithmetic operation; op in {add, sub, mul, div, pow}.

    pow takes an integer exponent as second argument.
    """
    if op == "pow":
        if not isinstance(b, int):
            raise FieldError("pow expects an integer exponent")
        return a ** b
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise FieldError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# characters and root counting

def quadratic_character(a: FieldElement) -> int:
    """0 on zero, +1 on nonzero squares, -1 on nonsquares (odd field order)."""
    if a.is_zero:
        return 0
    q = a.field.order
    s = a ** ((q - 1) // 2)
    return 1 if s == a.field.one() else -1


def quadratic_root_count(a: FieldElement, b: FieldElement, c: FieldElement) -> int:
    """Number of projective zeros of a*U^2 + b*UV + c*V^2 on P^1(F_q).

    Identically zero forms contribute the whole line, q + 1 points;
    otherwise the count is 1 + chi(b^2 - 4ac).
    """
    a._check(b)
    a._check(c)
    field = a.field
    if a.is_zero and b.is_zero and c.is_zero:
        return field.order + 1
    four = field.element(4)
    disc = b * b - four * a * c
    return 1 + quadratic_character(disc)


# ---------------------------------------------------------------------------
# projective enumeration

def projective_cardinality(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def enumerate_projective(q: int, n: int):
    """Canonical points of P^n over a q-element scalar set, as encoding tuples.

    Normalisation: first nonzero coordinate equals 1 (encoding 1); later
    coordinates run over all q encodings.  Each point appears exactly once
    and the total is (q^{n+1} - 1)/(q - 1).  Purely combinatorial, so any
    q >= 2 is accepted; field semantics require q to be a prime power.
    """
    if q < 2 or n < 0:
        raise ValueError(f"need q >= 2 and n >= 0, got q={q}, n={n}")
    for lead in range(n + 1):
        head = (0,) * lead + (1,)
        for tail in product(range(q), repeat=n - lead):
            yield head + tail


def projective_points(field, n: int):
    """Canonical points of P^n(field) as tuples of field elements."""
    cache = [field.from_encoding(e) for e in range(field.order)]
    for pt in enumerate_projective(field.order, n):
        yield tuple(cache[e] for e in pt)
