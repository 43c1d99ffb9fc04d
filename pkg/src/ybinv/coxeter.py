"""Signed permutations, the Coxeter group B_n and the framed group W_{d,n}.

A signed permutation of ``X_n = {-n, ..., -1, 1, ..., n}`` commuting with
negation is stored as its image vector ``(w(1), ..., w(n))``.  Composition is
``(a * b)(x) = a(b(x))``.  The generators are ``r_1`` (negate 1) and the
transpositions ``s_i = (i, i+1)``.  Right multiplication by ``s_i`` swaps
entries ``i`` and ``i+1`` of the image vector and right multiplication by
``r_1`` negates the first entry.

The standard form writes ``w = w_1 w_2 ... w_n`` with ``w_k`` in ``N_k``,
where ``N_k`` consists of ``1``, ``r_k``, the chains ``s_{k-1} ... s_i`` and the
chains ``s_{k-1} ... s_i r_i`` for ``1 <= i < k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Sequence

__all__ = [
    "SignedPermutation",
    "NFactor",
    "StandardForm",
    "FramedElement",
    "WdnBlock",
    "compose",
    "length",
    "reduced_word",
    "standard_form",
    "wdn_standard_form",
    "expand_blocks",
    "all_signed_permutations",
    "generator_word_element",
]

Generator = tuple[str, int]  # ("r", 1) or ("s", i)


@dataclass(frozen=True, order=True)
class SignedPermutation:
    """Element of B_n given by the images of 1..n."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(abs(x) for x in self.images) != list(range(1, n + 1)):
            raise ValueError(f"{self.images!r} is not a signed permutation")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def r(cls, k: int, n: int) -> "SignedPermutation":
        """The sign change of k, written r_k."""
        if not 1 <= k <= n:
            raise ValueError(f"r_{k} is not defined in B_{n}")
        return cls(tuple(-x if x == k else x for x in range(1, n + 1)))

    @classmethod
    def s(cls, i: int, n: int) -> "SignedPermutation":
        """The transposition (i, i+1)."""
        if not 1 <= i < n:
            raise ValueError(f"s_{i} is not defined in B_{n}")
        images = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return cls(tuple(images))

    def __call__(self, x: int) -> int:
        image = self.images[abs(x) - 1]
        return image if x > 0 else -image

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return compose(self, other)

    def inverse(self) -> "SignedPermutation":
        out = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            out[abs(image) - 1] = i if image > 0 else -i
        return SignedPermutation(tuple(out))

    def extend(self, n: int) -> "SignedPermutation":
        """The same permutation viewed in B_n, fixing the new points."""
        return SignedPermutation(self.images + tuple(range(self.n + 1, n + 1)))

    @property
    def length(self) -> int:
        return length(self)

    def __str__(self) -> str:
        return "(" + " ".join(str(x) for x in self.images) + ")"


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """The product a*b acting by x -> a(b(x))."""
    if a.n != b.n:
        raise ValueError("composing signed permutations of different degrees")
    return SignedPermutation(tuple(a(x) for x in b.images))


def _descent_steps(images: tuple[int, ...]) -> list[Generator]:
    """Greedy reduction to the identity by right multiplication.

    Right multiplying by ``r_1`` lowers the length exactly when the first
    entry is negative and by ``s_i`` exactly when ``m_i > m_{i+1}``.  The
    generators used, read in reverse, form a reduced word.
    """
    m = list(images)
    steps: list[Generator] = []
    while m:
        if m[0] < 0:
            m[0] = -m[0]
            steps.append(("r", 1))
            continue
        for i in range(len(m) - 1):
            if m[i] > m[i + 1]:
                m[i], m[i + 1] = m[i + 1], m[i]
                steps.append(("s", i + 1))
                break
        else:
            return steps
    return steps


@lru_cache(maxsize=None)
def _length(images: tuple[int, ...]) -> int:
    return len(_descent_steps(images))


def length(w: SignedPermutation) -> int:
    """Coxeter length with respect to r_1, s_1, ..., s_{n-1}."""
    return _length(w.images)


def reduced_word(w: SignedPermutation) -> list[Generator]:
    """Some reduced expression for w as a list of ("r", 1) / ("s", i)."""
    return list(reversed(_descent_steps(w.images)))


def generator_word_element(word: Sequence[Generator], n: int) -> SignedPermutation:
    """Multiply out a word in the generators."""
    w = SignedPermutation.identity(n)
    for name, i in word:
        w = w * (SignedPermutation.r(i, n) if name == "r" else SignedPermutation.s(i, n))
    return w


@dataclass(frozen=True)
class NFactor:
    """One factor w_k of the standard form.

    ``kind`` is ``"one"`` (identity), ``"r"`` (the element r_k), ``"s"``
    (the chain s_{k-1} ... s_i) or ``"sr"`` (the chain s_{k-1} ... s_i r_i).
    For ``"one"`` and ``"r"`` the index i equals k.
    """

    kind: str
    k: int
    i: int

    def __post_init__(self) -> None:
        if self.kind in ("one", "r"):
            if self.i != self.k:
                raise ValueError("factors 1 and r_k carry i = k")
        elif self.kind in ("s", "sr"):
            if not 1 <= self.i < self.k:
                raise ValueError("chain factors need 1 <= i < k")
        else:
            raise ValueError(f"unknown factor kind {self.kind!r}")

    @property
    def bottom(self) -> int:
        """Index of the strand carrying the frame in the factorised block."""
        return self.i

    @property
    def negative(self) -> bool:
        return self.kind in ("r", "sr")

    def word(self) -> list[Generator]:
        """A reduced word, with r_k written through r_1 and transpositions."""
        k, i = self.k, self.i
        if self.kind == "one":
            return []
        if self.kind == "r":
            return [("s", j) for j in range(k - 1, 0, -1)] + [("r", 1)] + [
                ("s", j) for j in range(1, k)
            ]
        if self.kind == "s":
            return [("s", j) for j in range(k - 1, i - 1, -1)]
        # s_{k-1} ... s_i r_i = s_{k-1} ... s_1 r_1 s_1 ... s_{i-1}
        return [("s", j) for j in range(k - 1, 0, -1)] + [("r", 1)] + [
            ("s", j) for j in range(1, i)
        ]

    def element(self, n: int) -> SignedPermutation:
        return generator_word_element(self.word(), n)

    def __str__(self) -> str:
        if self.kind == "one":
            return "1"
        if self.kind == "r":
            return f"r_{self.k}"
        chain = "".join(f"s_{j}" for j in range(self.k - 1, self.i - 1, -1))
        return chain + (f"r_{self.i}" if self.kind == "sr" else "")


@dataclass(frozen=True)
class StandardForm:
    factors: tuple[NFactor, ...]

    def word(self) -> list[Generator]:
        out: list[Generator] = []
        for f in self.factors:
            out.extend(f.word())
        return out

    def element(self) -> SignedPermutation:
        n = len(self.factors)
        w = SignedPermutation.identity(n)
        for f in self.factors:
            w = w * f.element(n)
        return w


def _top_factor(images: list[int]) -> NFactor:
    n = len(images)
    p = next(idx for idx, x in enumerate(images, start=1) if abs(x) == n)
    positive = images[p - 1] > 0
    if p == n:
        return NFactor("one" if positive else "r", n, n)
    return NFactor("s" if positive else "sr", n, p)


def standard_form(w: SignedPermutation) -> StandardForm:
    """Decompose w = w_1 ... w_n with w_k in N_k."""
    factors: list[NFactor] = []
    current = w
    for k in range(w.n, 0, -1):
        images = list(current.images[:k])
        factor = _top_factor(images)
        factors.append(factor)
        # w' = w * factor^{-1} fixes k, so it restricts to B_{k-1}
        local = SignedPermutation(tuple(images))
        reduced = local * factor.element(k).inverse()
        if reduced.images[k - 1] != k:
            raise AssertionError("standard form peeling did not fix the top strand")
        current = SignedPermutation(reduced.images[: k - 1]) if k > 1 else reduced
    factors.reverse()
    return StandardForm(tuple(factors))


def all_signed_permutations(n: int) -> Iterator[SignedPermutation]:
    """Every element of B_n in a fixed deterministic order."""
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            yield SignedPermutation(tuple(s * x for s, x in zip(signs, perm)))


# ---------------------------------------------------------------------------
# The framed group W_{d,n} = (Z/d)^n semidirect B_n


@dataclass(frozen=True)
class FramedElement:
    """The element ``w t_1^{a_1} ... t_n^{a_n}`` of W_{d,n}."""

    w: SignedPermutation
    frames: tuple[int, ...]
    d: int

    def __post_init__(self) -> None:
        if len(self.frames) != self.w.n:
            raise ValueError("frame vector length differs from n")
        object.__setattr__(self, "frames", tuple(a % self.d for a in self.frames))

    def __mul__(self, other: "FramedElement") -> "FramedElement":
        # t^a w' = w' t^{a'} with a'_p = a_{|w'(p)|}
        if self.d != other.d:
            raise ValueError("framed elements over different d")
        moved = tuple(self.frames[abs(x) - 1] for x in other.w.images)
        return FramedElement(
            self.w * other.w,
            tuple(a + b for a, b in zip(moved, other.frames)),
            self.d,
        )

    @classmethod
    def identity(cls, n: int, d: int) -> "FramedElement":
        return cls(SignedPermutation.identity(n), (0,) * n, d)


@dataclass(frozen=True)
class WdnBlock:
    """Block ``y_k t_j^m`` of the W_{d,n} standard form (j = factor bottom)."""

    factor: NFactor
    m: int

    def element(self, n: int, d: int) -> FramedElement:
        frames = [0] * n
        frames[self.factor.bottom - 1] = self.m
        return FramedElement(self.factor.element(n), tuple(frames), d)


def wdn_standard_form(x: FramedElement) -> list[WdnBlock]:
    """Factor w t^a as a product of blocks y_1 t^{c_1} ... y_n t^{c_n}.

    Frames are peeled from the top strand down: when the top factor is 1 or
    r_k the block takes the frame of strand k; for a chain ending at i the
    block takes the frame of strand i and the remaining frames shift down.
    """
    factors = standard_form(x.w).factors
    frames = list(x.frames)
    blocks: list[WdnBlock] = []
    for factor in reversed(factors):
        i = factor.bottom
        blocks.append(WdnBlock(factor, frames[i - 1]))
        del frames[i - 1]
    blocks.reverse()
    return blocks


def expand_blocks(blocks: Sequence[WdnBlock], n: int, d: int) -> FramedElement:
    """Multiply out a block factorisation inside W_{d,n}."""
    total = FramedElement.identity(n, d)
    for block in blocks:
        total = total * block.element(n, d)
    return total
