"""Symmetric group combinatorics: permutations, partitions, group algebra.

Permutations are tuples of images on {1..n} (one-line notation); composition
is (sigma * tau)(i) = sigma(tau(i)).  Partitions are weakly decreasing tuples
of positive row lengths.  Group algebra elements are sparse dicts from
permutation tuples to Fractions.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


class PadTooSmall(Exception):
    """pad(lam, n) needs n - |lam| >= lam_1."""


# ---------------------------------------------------------------------------
# permutations (tuples of images, 1-based values)
# ---------------------------------------------------------------------------

def identity_perm(n: int):
    return tuple(range(1, n + 1))


def transposition(n: int, i: int, j: int):
    """The transposition (i j) in S_n."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("transposition indices out of range: (%d,%d), n=%d" % (i, j, n))
    if i == j:
        raise ValueError("transposition needs distinct indices, got i=j=%d" % i)
    images = list(range(1, n + 1))
    images[i - 1], images[j - 1] = j, i
    return tuple(images)


def compose(sigma, tau):
    """(sigma . tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t - 1] for t in tau)


def inverse(sigma):
    out = [0] * len(sigma)
    for i, image in enumerate(sigma, start=1):
        out[image - 1] = i
    return tuple(out)


def apply_perm(sigma, i: int) -> int:
    return sigma[i - 1]


def all_permutations(n: int):
    """All of S_n, in lexicographic order of image tuples."""
    return itertools.permutations(range(1, n + 1))


def perm_to_str(sigma) -> str:
    return "[" + ",".join(str(i) for i in sigma) + "]"


def perm_from_str(text: str):
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError("bad permutation literal: %r" % text)
    images = tuple(int(p) for p in body[1:-1].split(",") if p.strip())
    if sorted(images) != list(range(1, len(images) + 1)):
        raise ValueError("not a permutation of 1..n: %r" % text)
    return images


def permute_positions(sigma, vec):
    """Relocate position i to sigma(i): out[sigma(i)-1] = vec[i-1].

    This is the action matching sigma . x_i = x_{sigma(i)} . sigma on
    exponent vectors.
    """
    out = [0] * len(vec)
    for i, v in enumerate(vec):
        out[sigma[i] - 1] = v
    return tuple(out)


# ---------------------------------------------------------------------------
# partitions / Young diagrams
# ---------------------------------------------------------------------------

def check_partition(lam):
    lam = tuple(int(r) for r in lam)
    if any(r <= 0 for r in lam):
        raise ValueError("partition rows must be positive: %s" % (lam,))
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError("partition rows must be weakly decreasing: %s" % (lam,))
    return lam


def partition_size(lam) -> int:
    return sum(lam)


def content(lam) -> int:
    """Sum of j - i over boxes (i, j) of the diagram, both 1-based."""
    lam = check_partition(lam)
    total = 0
    for i, row in enumerate(lam):
        # row i (0-based) contributes sum_{j=0..row-1} (j - i)
        total += row * (row - 1) // 2 - i * row
    return total


def pad(lam, n: int):
    """Prepend a row of n - |lam| boxes: pad(lam, n) = (n - |lam|, lam...)."""
    lam = check_partition(lam)
    first = n - sum(lam)
    if lam and first < lam[0]:
        raise PadTooSmall(
            "pad((%s), %d): first row %d shorter than lam_1 = %d"
            % (",".join(map(str, lam)), n, first, lam[0])
        )
    if first < 0:
        raise PadTooSmall("pad: n = %d smaller than |lam| = %d" % (n, sum(lam)))
    if first == 0:
        # only legal if lam itself is empty (rows must stay positive)
        if lam:
            raise PadTooSmall("pad: zero-length first row in front of %s" % (lam,))
        return ()
    return (first,) + lam


def interpolated_omega_value(lam, n: int) -> Fraction:
    """ct(lam) - |lam| + (n - |lam|)(n - |lam| - 1)/2, as an exact rational.

    Equals content(pad(lam, n)) whenever pad is defined; the formula itself
    makes sense for every n.
    """
    lam = check_partition(lam)
    size = sum(lam)
    m = n - size
    return Fraction(content(lam) - size) + Fraction(m * (m - 1), 2)


def partition_to_str(lam) -> str:
    return "(" + ",".join(str(r) for r in lam) + ")"


def partition_from_str(text: str):
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError("bad partition literal: %r" % text)
    inner = body[1:-1].strip().rstrip(",")
    if not inner:
        return ()
    return check_partition(int(r) for r in inner.split(","))


# ---------------------------------------------------------------------------
# group algebra of S_n over Q
# ---------------------------------------------------------------------------

class GroupAlgebraElement:
    """Sparse element of Q[S_n]: dict from image tuples to Fractions."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        for sigma, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(sigma)] = c
        self.terms = clean

    @classmethod
    def unit(cls, n: int):
        return cls(n, {identity_perm(n): 1})

    @classmethod
    def basis(cls, n: int, sigma):
        return cls(n, {tuple(sigma): 1})

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("mixed group algebras: S_%d vs S_%d" % (self.n, other.n))

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for sigma, c in other.terms.items():
            s = terms.get(sigma, 0) + c
            if s:
                terms[sigma] = s
            else:
                terms.pop(sigma, None)
        return GroupAlgebraElement(self.n, terms)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GroupAlgebraElement(
                self.n, {s: c * Fraction(other) for s, c in self.terms.items()}
            )
        self._check(other)
        terms = {}
        for s1, c1 in self.terms.items():
            for s2, c2 in other.terms.items():
                s = compose(s1, s2)
                acc = terms.get(s, 0) + c1 * c2
                if acc:
                    terms[s] = acc
                else:
                    terms.pop(s, None)
        return GroupAlgebraElement(self.n, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, GroupAlgebraElement)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for sigma in sorted(self.terms):
            bits.append("%s*%s" % (self.terms[sigma], perm_to_str(sigma)))
        return " + ".join(bits)


def omega_element(n: int) -> GroupAlgebraElement:
    """Sum of all transpositions of S_n."""
    terms = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            terms[transposition(n, i, j)] = Fraction(1)
    return GroupAlgebraElement(n, terms)


def symmetrizer(n: int) -> GroupAlgebraElement:
    """e = (1/n!) sum over S_n; idempotent."""
    c = Fraction(1, math.factorial(n))
    return GroupAlgebraElement(n, {sigma: c for sigma in all_permutations(n)})
