"""Finite fields F_p and F_{p^k}.

An element c_0 + c_1 X + ... + c_{k-1} X^{k-1} of F_p[X]/(f) is stored as the
integer code c_0 + c_1 p + ... + c_{k-1} p^{k-1}; the coordinates in the power
basis (1, X, ..., X^{k-1}) are the base-p digits of the code.

Fields of order at most TABLE_LIMIT build discrete-log tables on first use.
They make multiplication, square roots and the quadratic character O(1) and
back the numpy kernels (``v*`` methods) used by the point-counting and
character-sum loops.
"""

import cmath
import math
from functools import lru_cache

import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .errors import DivisionByZero, DomainMismatch, ScaleLimit, TrivialCharacter
from .ntheory import prime_factors

__all__ = [
    "GF",
    "FieldElement",
    "Embedding",
    "additive_character",
    "default_modulus",
    "subfield_embedding",
    "standard_field",
    "TABLE_LIMIT",
]

TABLE_LIMIT = 10**7
MAX_CHARACTERISTIC = 1 << 20
# below this size the scalar paths index python lists instead of numpy arrays
_LIST_LIMIT = 1 << 18


def _irreducible(low, p):
    """``low`` lists c_0..c_{k-1} of the monic polynomial X^k + ... + c_0."""
    return gf_irreducible_p([ZZ(1)] + [ZZ(c % p) for c in reversed(low)], p, ZZ)


def default_modulus(p, k):
    """First monic irreducible polynomial of degree k over F_p.

    Candidates are scanned by increasing code c_0 + c_1 p + ... + c_{k-1} p^{k-1},
    i.e. lexicographically with the highest coefficient most significant.
    Returns the coefficients (c_0, ..., c_{k-1}) of the non-leading terms.
    """
    if k == 1:
        return (0,)
    for code in range(1, p**k):
        low = tuple((code // p**i) % p for i in range(k))
        if low[0] and _irreducible(low, p):
            return low
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """The field F_{p^k} = F_p[X]/(X^k + c_{k-1}X^{k-1} + ... + c_0)."""

    def __init__(self, p, k=1, modulus=None):
        p, k = int(p), int(k)
        if not isprime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if p > MAX_CHARACTERISTIC:
            raise ScaleLimit(f"characteristic {p} above {MAX_CHARACTERISTIC}")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k:
            raise ValueError(f"modulus needs {k} coefficients, got {len(modulus)}")
        if k > 1 and not _irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p**k
        self._pw = tuple(p**i for i in range(k))
        self._tables = None
        self._extensions = {}
        self._trace_basis = None

    # -- identity -------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, modulus={list(self.modulus)})"

    @property
    def order(self):
        return self.q

    # -- element construction -------------------------------------------------
    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise DomainMismatch(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, self.from_int(int(value)))
        return FieldElement(self, self.from_digits(value))

    def element(self, code):
        code = int(code)
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElement(self, code)

    def elements(self):
        for code in range(self.q):
            yield FieldElement(self, code)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def gen(self):
        """The class of X (equal to -c_0 when k = 1)."""
        return FieldElement(self, self.p if self.k > 1 else (-self.modulus[0]) % self.p)

    def from_int(self, n):
        return n % self.p

    def digits(self, code):
        if self.k == 1:
            return [code]
        p = self.p
        return [(code // pw) % p for pw in self._pw]

    def from_digits(self, digits):
        digits = list(digits)
        if len(digits) != self.k:
            raise ValueError(f"expected {self.k} coordinates, got {len(digits)}")
        return sum((int(d) % self.p) * pw for d, pw in zip(digits, self._pw))

    # -- tables ----------------------------------------------------------------
    @property
    def has_tables(self):
        return self._tables is not None

    @property
    def tables(self):
        if self._tables is None:
            self._tables = _LogTables(self)
        return self._tables

    # -- scalar arithmetic on codes ---------------------------------------------
    def add(self, a, b):
        p = self.p
        if self.k == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        t = self._tables
        if t is not None:
            if a == 0:
                return b
            if b == 0:
                return a
            la, lb = t.log_s[a], t.log_s[b]
            z = t.zech_s[(lb - la) % t.n]
            if z < 0:
                return 0
            return int(t.exp_s[(la + z) % t.n])
        out = 0
        for pw in self._pw:
            out += (((a // pw) + (b // pw)) % p) * pw
        return out

    def neg(self, a):
        p = self.p
        if self.k == 1:
            return (-a) % p
        if p == 2:
            return a
        out = 0
        for pw in self._pw:
            out += ((-(a // pw)) % p) * pw
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        if t is not None:
            return int(t.exp_s[(t.log_s[a] + t.log_s[b]) % t.n])
        return self._mul_generic(a, b)

    def square(self, a):
        return self.mul(a, a)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        t = self._tables
        if t is not None:
            return int(t.exp_s[(-t.log_s[a]) % t.n])
        return self._pow_generic(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        t = self._tables
        if t is not None:
            return int(t.exp_s[(t.log_s[a] * e) % t.n])
        return self._pow_generic(a, e)

    def sqrt(self, a):
        """A square root of ``a`` (the one with even discrete log), or None."""
        if a == 0:
            return 0
        t = self.tables
        la = t.log_s[a]
        if self.p == 2:
            # q - 1 is odd so halving the log is multiplication by q/2
            return int(t.exp_s[(la * (self.q // 2)) % t.n])
        if la % 2:
            return None
        return int(t.exp_s[la // 2])

    def is_square(self, a):
        return a == 0 or self.p == 2 or self.tables.log_s[a] % 2 == 0

    def artin_schreier_root(self, w):
        """Some z with z^2 + z = w in characteristic 2, or None."""
        if self.p != 2:
            raise ValueError("Artin-Schreier roots are only used in characteristic 2")
        z = self.tables.as_root_s[w]
        return None if z < 0 else int(z)

    def trace(self, a):
        """Absolute trace Tr(a) = a + a^p + ... + a^(p^(k-1)), as an integer in [0, p)."""
        if self.k == 1:
            return a
        basis = self.trace_basis
        p = self.p
        return sum(((a // pw) % p) * tb for pw, tb in zip(self._pw, basis)) % p

    @property
    def trace_basis(self):
        """Traces of the power-basis vectors 1, X, ..., X^(k-1)."""
        if self._trace_basis is None:
            vals = []
            for i in range(self.k):
                x = self._pw[i]
                acc, y = 0, x
                for _ in range(self.k):
                    acc = self._add_digits(acc, y)
                    y = self._pow_generic(y, self.p)
                if acc >= self.p:
                    raise AssertionError("trace left the prime field")
                vals.append(acc)
            self._trace_basis = tuple(vals)
        return self._trace_basis

    # -- generic polynomial arithmetic (no tables) ------------------------------
    def _add_digits(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        out = 0
        for pw in self._pw:
            out += (((a // pw) + (b // pw)) % self.p) * pw
        return out

    def _mul_generic(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return (a * b) % p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        mod = self.modulus
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg] % p
            if c:
                base = deg - k
                for i, m in enumerate(mod):
                    prod[base + i] -= c * m
        return sum((c % p) * pw for c, pw in zip(prod[:k], self._pw))

    def _pow_generic(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._mul_generic(result, a)
            a = self._mul_generic(a, a)
            e >>= 1
        return result

    # -- vectorised kernels on numpy code arrays --------------------------------
    def vconst(self, n, shape=()):
        return np.full(shape, self.from_int(n), dtype=np.int64)

    def vadd(self, A, B):
        p = self.p
        if self.k == 1:
            return (A + B) % p
        if p == 2:
            return np.bitwise_xor(A, B)
        if self.q <= TABLE_LIMIT:
            # a + b = a (1 + b/a) through the Zech table
            t = self.tables
            A, B = np.broadcast_arrays(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))
            la, lb = t.log[A], t.log[B]
            z = t.zech[(lb - la) % t.n]
            out = np.where(z < 0, 0, t.exp[(la + z) % t.n])
            return np.where(A == 0, B, np.where(B == 0, A, out)).astype(np.int64)
        out = np.zeros(np.broadcast(A, B).shape, dtype=np.int64)
        for pw in self._pw:
            out += (((A // pw) + (B // pw)) % p) * pw
        return out

    def vneg(self, A):
        p = self.p
        if self.k == 1:
            return (-A) % p
        if p == 2:
            return A.copy()
        if self.q <= TABLE_LIMIT:
            t = self.tables
            A = np.asarray(A, dtype=np.int64)
            out = t.exp[(t.log[A] + t.n // 2) % t.n].astype(np.int64)
            return np.where(A == 0, 0, out)
        out = np.zeros(A.shape, dtype=np.int64)
        for pw in self._pw:
            out += ((-(A // pw)) % p) * pw
        return out

    def vsub(self, A, B):
        return self.vadd(A, self.vneg(B))

    def vmul(self, A, B):
        if self.k == 1:
            return (A * B) % self.p
        t = self.tables
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        out = t.exp[(t.log[A] + t.log[B]) % t.n].astype(np.int64)
        return np.where((A == 0) | (B == 0), 0, out)

    def vsquare(self, A):
        return self.vmul(A, A)

    def vinv(self, A):
        """Elementwise inverse; zero maps to zero (callers mask it out)."""
        t = self.tables
        A = np.asarray(A, dtype=np.int64)
        out = t.exp[(-t.log[A]) % t.n].astype(np.int64)
        return np.where(A == 0, 0, out)

    def vchi(self, A):
        """Quadratic character: 0 at zero, +1 on non-zero squares, -1 otherwise."""
        A = np.asarray(A, dtype=np.int64)
        if self.p == 2:
            return np.where(A == 0, 0, 1)
        t = self.tables
        return np.where(A == 0, 0, np.where(t.log[A] % 2 == 0, 1, -1))

    def vtrace(self, A):
        A = np.asarray(A, dtype=np.int64)
        if self.k == 1:
            return A.copy()
        out = np.zeros(A.shape, dtype=np.int64)
        for pw, tb in zip(self._pw, self.trace_basis):
            out += ((A // pw) % self.p) * tb
        return out % self.p

    def vdigits(self, A):
        """Coordinates of each code, shape ``A.shape + (k,)``."""
        A = np.asarray(A, dtype=np.int64)
        return np.stack([(A // pw) % self.p for pw in self._pw], axis=-1)

    # -- extensions ----------------------------------------------------------------
    def extension(self, m):
        """Embedding of this field into F_{q^m} (built over F_p with a fresh modulus)."""
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if m not in self._extensions:
            if m == 1:
                self._extensions[m] = Embedding(self, self, np.arange(self.q, dtype=np.int64))
            else:
                if self.q**m > TABLE_LIMIT:
                    raise ScaleLimit(f"F_{self.q}^{m} has more than {TABLE_LIMIT} elements")
                big = standard_field(self.p, self.k * m)
                self._extensions[m] = subfield_embedding(self, big)
        return self._extensions[m]


class _LogTables:
    """exp/log (and Zech / Artin-Schreier) tables for a field of order <= TABLE_LIMIT."""

    def __init__(self, field):
        Q = field.q
        if Q > TABLE_LIMIT:
            raise ScaleLimit(f"field of order {Q} exceeds table limit {TABLE_LIMIT}")
        p, k = field.p, field.k
        n = Q - 1
        self.n = n
        g = self._generator(field)
        self.generator = g
        block = max(1, math.isqrt(n))
        seq = [1]
        for _ in range(block - 1):
            seq.append(field._mul_generic(seq[-1], g))
        V = np.array([field.digits(c) for c in seq], dtype=np.int64).reshape(len(seq), k)
        step = field._mul_generic(seq[-1], g)
        M = np.array(
            [field.digits(field._mul_generic(step, field._pw[i])) for i in range(k)],
            dtype=np.int64,
        ).reshape(k, k)
        blocks = [V]
        total = len(seq)
        while total < n:
            V = (V @ M) % p
            blocks.append(V)
            total += len(V)
        digits = np.concatenate(blocks)[:n]
        pw = np.array(field._pw, dtype=np.int64)
        exp = digits @ pw
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError("generator search returned a non-primitive element")
        self.exp = exp.astype(np.int32 if Q < 2**31 else np.int64)
        self.log = log.astype(self.exp.dtype)
        small = Q <= _LIST_LIMIT
        self.exp_s = self.exp.tolist() if small else self.exp
        self.log_s = self.log.tolist() if small else self.log
        if p != 2 and k > 1:
            e = exp
            plus1 = e - e % p + (e % p + 1) % p
            zech = log[plus1]
            self.zech = zech.astype(self.exp.dtype)
            self.zech_s = self.zech.tolist() if small else self.zech
        if p == 2:
            z = np.arange(Q, dtype=np.int64)
            sq = np.zeros(Q, dtype=np.int64)
            sq[1:] = exp[(2 * log[1:]) % n]
            w = np.bitwise_xor(sq, z)
            root = np.full(Q, -1, dtype=np.int64)
            root[w] = z
            self.as_root = root
            self.as_root_s = root.tolist() if small else root

    @staticmethod
    def _generator(field):
        n = field.q - 1
        if n == 1:
            return 1
        primes = prime_factors(n)
        for cand in range(2, field.q):
            if all(field._pow_generic(cand, n // r) != 1 for r in primes):
                return cand
        raise AssertionError("no primitive element")  # pragma: no cover


class FieldElement:
    """Value type for an element of a :class:`GF`."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = code

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise DomainMismatch(f"{other.field!r} vs {self.field!r}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return None

    def __add__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(b, self.code))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.code, int(e)))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def sqrt(self):
        r = self.field.sqrt(self.code)
        return None if r is None else FieldElement(self.field, r)

    def is_square(self):
        return self.field.is_square(self.code)

    def trace(self):
        return self.field.trace(self.code)

    def coords(self):
        return tuple(self.field.digits(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        if self.field.k != 1:
            raise TypeError("only prime-field elements convert to int")
        return self.code

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.code}"
        terms = []
        for i, c in enumerate(self.coords()):
            if c:
                terms.append(str(c) if i == 0 else (f"{c}*X^{i}" if c != 1 else f"X^{i}"))
        return "+".join(terms) if terms else "0"


class Embedding:
    """A field homomorphism source -> target stored as a lookup table of codes."""

    def __init__(self, source, target, table):
        self.source = source
        self.target = target
        self.table = np.asarray(table, dtype=np.int64)
        self._inverse = None

    def __call__(self, value):
        if isinstance(value, FieldElement):
            return FieldElement(self.target, int(self.table[value.code]))
        return int(self.table[value])

    def vmap(self, A):
        return self.table[np.asarray(A, dtype=np.int64)]

    def preimage(self, code):
        """Code in the source field mapping to ``code``, or None."""
        if self._inverse is None:
            self._inverse = {int(c): i for i, c in enumerate(self.table.tolist())}
        return self._inverse.get(int(code))


def subfield_embedding(small, big, anchor=None):
    """Embed ``small`` into ``big`` by sending X to a root of small's modulus.

    Roots are searched among powers of g^((Q-1)/(q-1)) for the primitive element
    g of ``big``, in increasing exponent order, so the choice is deterministic.
    ``anchor`` is an optional (small_code, big_code) pair the map must respect.
    """
    if small.p != big.p or big.k % small.k:
        raise DomainMismatch(f"{small!r} is not a subfield of {big!r}")
    p = small.p
    if small.k == 1:
        return Embedding(small, big, np.arange(p, dtype=np.int64))
    t = big.tables
    step = t.n // (small.q - 1)
    powers_cache = None
    for i in range(small.q - 1):
        r = int(t.exp_s[(i * step) % t.n])
        # Horner evaluation of the monic modulus at r
        acc = 1
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, r), c)
        if acc:
            continue
        powers = [1]
        for _ in range(small.k - 1):
            powers.append(big.mul(powers[-1], r))
        if anchor is not None:
            src, dst = anchor
            img = 0
            for d, rp in zip(small.digits(src), powers):
                img = big.add(img, big.mul(d, rp))
            if img != dst:
                continue
        powers_cache = powers
        break
    if powers_cache is None:
        raise AssertionError("modulus has no admissible root in the extension")
    codes = np.arange(small.q, dtype=np.int64)
    D = small.vdigits(codes)
    img = np.zeros(small.q, dtype=np.int64)
    for j, rp in enumerate(powers_cache):
        img = big.vadd(img, big.vmul(D[:, j], np.full(small.q, rp, dtype=np.int64)))
    return Embedding(small, big, img)


@lru_cache(maxsize=None)
def standard_field(p, k):
    """Shared GF(p, k) with the default modulus, so tables are built once."""
    return GF(p, k)


def additive_character(a, j):
    """psi_j(a) = exp(2 pi i j Tr(a) / p) for 1 <= j < p."""
    field = a.field
    j = int(j) % field.p
    if j == 0:
        raise TrivialCharacter("the trivial character must be handled by the caller")
    return cmath.exp(2j * math.pi * j * a.trace() / field.p)


def roots_of_unity(p):
    """exp(2 pi i r / p) for r = 0..p-1, as a complex numpy array."""
    return np.exp(2j * np.pi * np.arange(p) / p)
