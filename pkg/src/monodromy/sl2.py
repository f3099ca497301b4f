"""Exact SL(2, Z) matrices and words in the generators S and T."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class SL2Matrix:
    """Row-major [[a, b], [c, d]] with ad - bc = 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError("SL2Matrix entries must be integers")
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant is not 1: {self.rows()}")

    @classmethod
    def from_rows(cls, rows) -> "SL2Matrix":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __mul__(self, other: "SL2Matrix") -> "SL2Matrix":
        if not isinstance(other, SL2Matrix):
            return NotImplemented
        return SL2Matrix(self.a * other.a + self.b * other.c,
                         self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c,
                         self.c * other.b + self.d * other.d)

    def __neg__(self) -> "SL2Matrix":
        return SL2Matrix(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int) -> "SL2Matrix":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = IDENTITY
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "SL2Matrix":
        return SL2Matrix(self.a, self.c, self.b, self.d)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0

    def to_json(self):
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]

    @classmethod
    def from_json(cls, data) -> "SL2Matrix":
        return cls.from_rows([[int(v) for v in row] for row in data])

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = SL2Matrix(1, 0, 0, 1)
MINUS_I = SL2Matrix(-1, 0, 0, -1)
S = SL2Matrix(0, 1, -1, 0)
T = SL2Matrix(1, 1, 0, 1)
U = S * T
MU_A = SL2Matrix(1, 0, -1, 1)
MU_B = SL2Matrix(1, 1, 0, 1)


def mul(m1: SL2Matrix, m2: SL2Matrix) -> SL2Matrix:
    out = m1 * m2
    assert out.a * out.d - out.b * out.c == 1
    return out


def product(mats: Iterable[SL2Matrix]) -> SL2Matrix:
    out = IDENTITY
    for m in mats:
        out = out * m
    return out


def tau(m: SL2Matrix) -> SL2Matrix:
    """Transpose-inverse; equals S m S^-1 in SL(2, Z), hence an automorphism."""
    return m.transpose().inverse()


# Letters: "S", "s" = S^-1, "T", "t" = T^-1.
_LETTER_MATRIX = {"S": S, "s": S.inverse(), "T": T, "t": T.inverse()}
_INVERSE_LETTER = {"S": "s", "s": "S", "T": "t", "t": "T"}


@dataclass(frozen=True)
class GeneratorWord:
    """Freely reduced word in S, S^-1, T, T^-1 (written S, s, T, t)."""

    letters: tuple

    def __post_init__(self):
        letters = tuple(self.letters)
        for ch in letters:
            if ch not in _LETTER_MATRIX:
                raise ValueError(f"unknown letter {ch!r}")
        object.__setattr__(self, "letters", free_reduce(letters))

    def evaluate(self) -> SL2Matrix:
        return product(_LETTER_MATRIX[ch] for ch in self.letters)

    def inverse(self) -> "GeneratorWord":
        return GeneratorWord(tuple(_INVERSE_LETTER[ch] for ch in reversed(self.letters)))

    def __mul__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return "".join(self.letters) or "1"


def free_reduce(letters) -> tuple:
    out = []
    for ch in letters:
        if out and out[-1] == _INVERSE_LETTER[ch]:
            out.pop()
        else:
            out.append(ch)
    return tuple(out)


def decompose_word(m: SL2Matrix) -> GeneratorWord:
    """Write m as a word in S and T by the Euclidean algorithm on the first column.

    Repeatedly left-multiply by T^-q with q = floor(a / c), then by S, until
    the lower-left entry vanishes; what remains is +-T^b.
    """
    steps = []
    a, b, c, d = m.a, m.b, m.c, m.d
    while c != 0:
        q = a // c
        if q:
            a, b = a - q * c, b - q * d
            steps.append(("T", q))
        a, b, c, d = c, d, -a, -b
        steps.append(("S", 1))
    # now [[a, b], [0, d]] with a = d = +-1
    letters = []
    for gen, k in steps:
        if gen == "T":
            letters.extend(["T" if k > 0 else "t"] * abs(k))
        else:
            letters.append("s")
    if a == 1:
        tail = ["T" if b > 0 else "t"] * abs(b)
    else:
        # [[-1, b], [0, -1]] = S^2 T^-b
        tail = ["S", "S"] + ["t" if b > 0 else "T"] * abs(b)
    word = GeneratorWord(tuple(letters + tail))
    return word


def reduce_mod(m: SL2Matrix, n: int):
    if n < 2:
        raise ValueError("modulus must be at least 2")
    return ((m.a % n, m.b % n), (m.c % n, m.d % n))


def matmul_mod(x, y, n: int):
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return (((a * e + b * g) % n, (a * f + b * h) % n),
            ((c * e + d * g) % n, (c * f + d * h) % n))


def sl2_mod_order(n: int) -> int:
    """|SL(2, Z/n)| = n^3 prod_{p | n} (1 - 1/p^2)."""
    order = n ** 3
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            order = order // (p * p) * (p * p - 1)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        order = order // (m * m) * (m * m - 1)
    return order
