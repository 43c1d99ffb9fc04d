"""The algebra Y_{d,n}^B through its faithful tensor representation.

Elements are stored in the D-split basis: words ``w t_1^{m_1} ... t_n^{m_n}``
where ``w`` is spelled by the standard form of a signed permutation.  A word
in the generators is evaluated on the start vector ``u_1^0 (x) ... (x) u_n^0``;
because each D-split word sends that vector to a distinct u-basis tensor with
coefficient 1, the u-coordinates of the image are exactly the D-split
coordinates of the word.

The C basis consists of products ``m_1 m_2 ... m_n`` of blocks

* ``(+, k, k, m)  = t_k^m``
* ``(-, k, k, m)  = t_k^m b_k``
* ``(+, k, j, m)  = g_{k-1} ... g_j t_j^m``          (j < k)
* ``(-, k, j, m)  = g_{k-1} ... g_j b_j t_j^m``      (j < k)

with ``b_j = g_{j-1} ... g_1 b_1 g_1^-1 ... g_{j-1}^-1``.  Replacing ``b_j`` by
``g_{j-1} ... g_1 b_1 g_1 ... g_{j-1}`` gives a D-split word of the same block
data, and a C word equals that D-split word plus words of strictly smaller
Coxeter length.  The change of basis is therefore unitriangular and is
inverted by back substitution without any division.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .coxeter import (
    FramedElement,
    NFactor,
    SignedPermutation,
    WdnBlock,
    all_signed_permutations,
    expand_blocks,
    length,
    standard_form,
    wdn_standard_form,
)
from .errors import SingularMatrixError, SizeGuardError
from .exact import LaurentScalar, ScalarDomain, canonical_string
from .rep import (
    Letter,
    _accumulate,
    _act,
    _transform,
    start_vector,
)

__all__ = [
    "MAX_DIMENSION",
    "DSplitWord",
    "CBlock",
    "CWord",
    "AlgebraElement",
    "YAlgebra",
    "get_algebra",
    "dimension",
    "letters_of",
    "to_dsplit",
    "mul",
    "builder",
    "enumerate_basis",
    "to_c_coords",
    "from_c_coords",
    "embed",
]

# Largest basis size handled; covers Y_{3,3} (1296) and Y_{4,2} (6144).
MAX_DIMENSION = 6144


def dimension(n: int, d: int) -> int:
    """2^n d^n n!, the dimension of Y_{d,n}^B."""
    return 2**n * d**n * factorial(n)


@dataclass(frozen=True, order=True)
class DSplitWord:
    """The D-split word ``w t_1^{m_1} ... t_n^{m_n}``."""

    w: SignedPermutation
    frames: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.w.n

    @property
    def length(self) -> int:
        return length(self.w)

    def __str__(self) -> str:
        sf = " ".join(str(f) for f in standard_form(self.w).factors)
        return f"[{sf}] {self.w} t^({' '.join(str(m) for m in self.frames)})"


class CBlock(NamedTuple):
    """Block ``m^{kind}_{k, j, m}`` at level k."""

    k: int
    kind: str  # "+" or "-"
    j: int
    m: int

    def __str__(self) -> str:
        return f"{self.kind} {self.k} {self.j} {self.m}"


@dataclass(frozen=True, order=True)
class CWord:
    """A C-basis word, one block per level 1..n."""

    blocks: tuple[CBlock, ...]

    @property
    def n(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return " | ".join(str(b) for b in self.blocks) if self.blocks else "1"


Word = DSplitWord | CWord


# ---------------------------------------------------------------------------
# Letters


def _b_letters(j: int) -> list[Letter]:
    return (
        [Letter("G", i) for i in range(j - 1, 0, -1)]
        + [Letter("B", 1)]
        + [Letter("G_inv", i) for i in range(1, j)]
    )


def _bbar_letters(j: int) -> list[Letter]:
    return (
        [Letter("G", i) for i in range(j - 1, 0, -1)]
        + [Letter("B", 1)]
        + [Letter("G", i) for i in range(1, j)]
    )


def block_letters(block: CBlock) -> list[Letter]:
    k, kind, j, m = block
    chain = [Letter("G", i) for i in range(k - 1, j - 1, -1)]
    ts = [Letter("T", j)] * m
    if kind == "+":
        return chain + ts
    if j == k:
        return ts + _b_letters(k)
    return chain + _b_letters(j) + ts


def letters_of(word: Word) -> list[Letter]:
    """Generator letters spelling a basis word."""
    if isinstance(word, CWord):
        out: list[Letter] = []
        for block in word.blocks:
            out.extend(block_letters(block))
        return out
    out = []
    for name, i in standard_form(word.w).word():
        out.append(Letter("B", 1) if name == "r" else Letter("G", i))
    for k, m in enumerate(word.frames, start=1):
        out.extend([Letter("T", k)] * m)
    return out


def _block_factor(block: CBlock) -> NFactor:
    k, kind, j, _ = block
    if j == k:
        return NFactor("one" if kind == "+" else "r", k, k)
    return NFactor("s" if kind == "+" else "sr", k, j)


def enumerate_blocks(k: int, d: int) -> list[CBlock]:
    """Blocks available at level k, in a fixed order."""
    return [
        CBlock(k, kind, j, m)
        for kind in ("+", "-")
        for j in range(k, 0, -1)
        for m in range(d)
    ]


# ---------------------------------------------------------------------------


class AlgebraElement:
    """A linear combination of basis words of Y_{d,n}^B."""

    __slots__ = ("algebra", "basis", "coeffs")

    def __init__(self, algebra: "YAlgebra", coeffs: Mapping[Word, object], basis: str = "D") -> None:
        if basis not in ("C", "D"):
            raise ValueError("basis must be 'C' or 'D'")
        self.algebra = algebra
        self.basis = basis
        self.coeffs = {w: c for w, c in coeffs.items() if c}

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def d(self) -> int:
        return self.algebra.d

    @property
    def domain(self) -> ScalarDomain:
        return self.algebra.domain

    def _same(self, other: "AlgebraElement") -> None:
        if other.algebra is not self.algebra:
            raise ValueError("elements live in different algebras")

    def in_dsplit(self) -> "AlgebraElement":
        return self if self.basis == "D" else self.algebra.from_c_coords(self)

    def in_c(self) -> "AlgebraElement":
        return self if self.basis == "C" else self.algebra.to_c_coords(self)

    def __add__(self, other: object):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same(other)
        a, b = self, other
        if a.basis != b.basis:
            a, b = a.in_dsplit(), b.in_dsplit()
        out = dict(a.coeffs)
        for w, c in b.coeffs.items():
            _accumulate(out, w, c)
        return AlgebraElement(self.algebra, out, a.basis)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {w: -c for w, c in self.coeffs.items()}, self.basis)

    def __sub__(self, other: object):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar: object) -> "AlgebraElement":
        s = self.domain.specialize(scalar) if isinstance(scalar, LaurentScalar) else scalar
        return AlgebraElement(self.algebra, {w: c * s for w, c in self.coeffs.items()}, self.basis)

    def __mul__(self, other: object):
        if isinstance(other, AlgebraElement):
            self._same(other)
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: object):
        if isinstance(other, AlgebraElement):
            return NotImplemented
        return self.scale(other)

    def __pow__(self, exponent: int) -> "AlgebraElement":
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.algebra is not self.algebra:
            return False
        if self.basis != other.basis:
            return self.in_dsplit().coeffs == other.in_dsplit().coeffs
        return self.coeffs == other.coeffs

    __hash__ = None  # mutable-looking value type; compare, do not hash

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, word: Word):
        return self.coeffs.get(word, self.domain.zero)

    def support(self) -> list[Word]:
        return sorted(self.coeffs)

    def dump(self) -> str:
        """One line per basis word.

        C words print their blocks as ``[+|-] k j m``; D-split words print the
        standard form, the image vector and the frame vector.
        """
        lines = []
        for word in sorted(self.coeffs):
            lines.append(f"{word} : {canonical_string(self.coeffs[word])}")
        return "\n".join(lines) if lines else "0"

    def __repr__(self) -> str:
        return f"AlgebraElement(n={self.n}, d={self.d}, basis={self.basis!r}, terms={len(self.coeffs)})"


# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _perm(labels: tuple[int, ...]) -> SignedPermutation:
    return SignedPermutation(labels)


class YAlgebra:
    """Y_{d,n}^B over a scalar domain, with cached change-of-basis data."""

    def __init__(self, n: int, d: int, domain: ScalarDomain | None = None) -> None:
        if n < 0 or d < 1:
            raise ValueError("need n >= 0 and d >= 1")
        if dimension(n, d) > MAX_DIMENSION:
            raise SizeGuardError(
                f"Y_{{{d},{n}}} has dimension {dimension(n, d)}, above the supported {MAX_DIMENSION}"
            )
        self.n = n
        self.d = d
        self.domain = domain or ScalarDomain(d)
        if self.domain.d != d:
            raise ValueError("scalar domain built for a different d")
        self._lock = threading.RLock()
        self._start = start_vector(n, d, self.domain).entries
        self._prefix_cache: dict[tuple[CBlock, ...], dict] = {(): self._start}
        self._columns: dict[CWord, dict[DSplitWord, object]] = {}

    def __repr__(self) -> str:
        return f"YAlgebra(n={self.n}, d={self.d}, domain={self.domain})"

    @property
    def dimension(self) -> int:
        return dimension(self.n, self.d)

    # -- evaluation --------------------------------------------------------

    def _check_letter(self, letter: Letter) -> None:
        kind, i = letter
        if kind in ("T", "T_inv"):
            ok = 1 <= i <= self.n
        elif kind in ("G", "G_inv", "E"):
            ok = 1 <= i < self.n
        else:
            ok = i == 1 and self.n >= 1
        if not ok:
            raise ValueError(f"letter {letter} is not defined for n={self.n}")

    def _apply(self, entries: dict, letters: Iterable[Letter]) -> dict:
        for letter in letters:
            letter = Letter(*letter)
            self._check_letter(letter)
            entries = _act(entries, letter, self.n, self.domain)
        return entries

    def _read_off(self, v_entries: dict) -> dict[DSplitWord, object]:
        dom = self.domain
        raw = _transform(v_entries, self.n, dom, -1)
        scale = dom.inv_d**self.n
        out: dict[DSplitWord, object] = {}
        for idx, c in raw.items():
            labels = tuple(a for a, _ in idx)
            frames = tuple(r for _, r in idx)
            out[DSplitWord(_perm(labels), frames)] = c * scale
        return out

    def _v_vector(self, x: "AlgebraElement") -> dict:
        """The image of the start vector under x, in the v-basis."""
        x = x.in_dsplit()
        u_entries = {tuple(zip(w.w.images, w.frames)): c for w, c in x.coeffs.items()}
        return _transform(u_entries, self.n, self.domain, +1)

    def element(self, coeffs: Mapping[Word, object], basis: str = "D") -> AlgebraElement:
        return AlgebraElement(self, coeffs, basis)

    def from_letters(self, letters: Sequence[Letter]) -> AlgebraElement:
        """D-split coordinates of a word in the generators."""
        return AlgebraElement(self, self._read_off(self._apply(self._start, letters)))

    def word(self, word: Word) -> AlgebraElement:
        """The basis word itself as an element (in its own basis)."""
        return AlgebraElement(self, {word: self.domain.one}, "C" if isinstance(word, CWord) else "D")

    def mul(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        """Product a*b: act on the image of a by the letters of each word of b."""
        base = self._v_vector(a)
        total: dict = {}
        for word, c in b.in_dsplit().coeffs.items():
            image = self._apply(base, letters_of(word))
            for idx, val in image.items():
                _accumulate(total, idx, val * c)
        return AlgebraElement(self, self._read_off(total))

    def mul_letters(self, a: AlgebraElement, letters: Sequence[Letter]) -> AlgebraElement:
        return AlgebraElement(self, self._read_off(self._apply(self._v_vector(a), letters)))

    # -- named elements ----------------------------------------------------

    def one(self) -> AlgebraElement:
        return self.from_letters([])

    def t(self, j: int, power: int = 1) -> AlgebraElement:
        return self.from_letters([Letter("T", j)] * (power % self.d))

    def g(self, i: int) -> AlgebraElement:
        return self.from_letters([Letter("G", i)])

    def g_inv(self, i: int) -> AlgebraElement:
        return self.from_letters([Letter("G_inv", i)])

    def b1(self) -> AlgebraElement:
        return self.from_letters([Letter("B", 1)])

    def b1_inv(self) -> AlgebraElement:
        return self.from_letters([Letter("B_inv", 1)])

    def b(self, j: int) -> AlgebraElement:
        """b_j = g_{j-1} ... g_1 b_1 g_1^-1 ... g_{j-1}^-1."""
        return self.from_letters(_b_letters(j))

    def bbar(self, j: int) -> AlgebraElement:
        """g_{j-1} ... g_1 b_1 g_1 ... g_{j-1}."""
        return self.from_letters(_bbar_letters(j))

    def e(self, i: int) -> AlgebraElement:
        """e_i = (1/d) sum_m t_i^m t_{i+1}^{d-m}."""
        return self.e_shift(i, 0)

    def e_shift(self, i: int, m: int) -> AlgebraElement:
        """(1/d) sum_s t_i^{m+s} t_{i+1}^{d-s}."""
        d = self.d
        total = None
        for s in range(d):
            term = self.from_letters(
                [Letter("T", i)] * ((m + s) % d) + [Letter("T", i + 1)] * ((d - s) % d)
            )
            total = term if total is None else total + term
        return total.scale(self.domain.inv_d)

    def f(self, j: int = 1) -> AlgebraElement:
        """f_j = (1/d) sum_m t_j^m."""
        total = None
        for m in range(self.d):
            term = self.t(j, m)
            total = term if total is None else total + term
        return total.scale(self.domain.inv_d)

    def g_w(self, w: SignedPermutation) -> AlgebraElement:
        """The element spelled by the standard form of w."""
        return self.from_letters(letters_of(DSplitWord(w, (0,) * self.n)))

    def block(self, block: CBlock) -> AlgebraElement:
        """A single C block as an element of this algebra."""
        return self.from_letters(block_letters(block))

    # -- bases -------------------------------------------------------------

    def dsplit_basis(self) -> Iterator[DSplitWord]:
        for w in all_signed_permutations(self.n):
            for frames in product(range(self.d), repeat=self.n):
                yield DSplitWord(w, frames)

    def c_basis(self) -> Iterator[CWord]:
        levels = [enumerate_blocks(k, self.d) for k in range(1, self.n + 1)]
        for blocks in product(*levels):
            yield CWord(tuple(blocks))

    def leading_dword(self, cword: CWord) -> DSplitWord:
        """The D-split word with the same block data as a C word."""
        blocks = [WdnBlock(_block_factor(b), b.m) for b in cword.blocks]
        x = expand_blocks(blocks, self.n, self.d)
        return DSplitWord(x.w, x.frames)

    def leading_cword(self, dword: DSplitWord) -> CWord:
        """Inverse of :meth:`leading_dword`, via the W_{d,n} standard form."""
        blocks = wdn_standard_form(FramedElement(dword.w, dword.frames, self.d))
        out = []
        for blk in blocks:
            f = blk.factor
            kind = "-" if f.negative else "+"
            out.append(CBlock(f.k, kind, f.bottom, blk.m))
        return CWord(tuple(out))

    def _prefix_vector(self, blocks: tuple[CBlock, ...]) -> dict:
        cached = self._prefix_cache.get(blocks)
        if cached is None:
            base = self._prefix_vector(blocks[:-1])
            cached = self._apply(base, block_letters(blocks[-1]))
            if len(blocks) < self.n:
                self._prefix_cache[blocks] = cached
        return cached

    def column(self, cword: CWord) -> dict[DSplitWord, object]:
        """D-split coordinates of a C word, checked to be unitriangular."""
        col = self._columns.get(cword)
        if col is not None:
            return col
        with self._lock:
            col = self._columns.get(cword)
            if col is not None:
                return col
            if cword.n != self.n:
                raise ValueError("C word has the wrong number of blocks")
            col = self._read_off(self._prefix_vector(cword.blocks))
            lead = self.leading_dword(cword)
            if col.get(lead) != self.domain.one:
                raise SingularMatrixError(f"C word {cword} lacks a unit leading term")
            top = lead.length
            for word in col:
                if word != lead and word.length >= top:
                    raise SingularMatrixError(
                        f"C word {cword} has a term {word} not below its leading length"
                    )
            self._columns[cword] = col
            return col

    def verify_c_basis(self) -> bool:
        """Build every column; raises SingularMatrixError on failure."""
        seen: set[DSplitWord] = set()
        for cword in self.c_basis():
            self.column(cword)
            lead = self.leading_dword(cword)
            if lead in seen or self.leading_cword(lead) != cword:
                raise SingularMatrixError("leading terms of C words are not distinct")
            seen.add(lead)
        return len(seen) == self.dimension

    # -- change of basis ---------------------------------------------------

    def to_c_coords(self, x: AlgebraElement) -> AlgebraElement:
        """Solve for C coordinates by back substitution in length order."""
        if x.basis == "C":
            return x
        target = dict(x.coeffs)
        result: dict[CWord, object] = {}
        while target:
            top = max(w.length for w in target)
            layer = [w for w in target if w.length == top]
            for dword in layer:
                c = target.pop(dword)
                cword = self.leading_cword(dword)
                result[cword] = c
                for other, a in self.column(cword).items():
                    if other != dword:
                        _accumulate(target, other, -(a * c))
        return AlgebraElement(self, result, "C")

    def from_c_coords(self, x: AlgebraElement) -> AlgebraElement:
        if x.basis == "D":
            return x
        total: dict[DSplitWord, object] = {}
        for cword, c in x.coeffs.items():
            for dword, a in self.column(cword).items():
                _accumulate(total, dword, a * c)
        return AlgebraElement(self, total, "D")


_ALGEBRAS: dict[tuple[int, int, ScalarDomain], YAlgebra] = {}
_ALGEBRAS_LOCK = threading.Lock()


def get_algebra(n: int, d: int, domain: ScalarDomain | None = None) -> YAlgebra:
    """Shared, cached algebra instance for (n, d, domain)."""
    dom = domain or ScalarDomain(d)
    key = (n, d, dom)
    with _ALGEBRAS_LOCK:
        alg = _ALGEBRAS.get(key)
        if alg is None:
            alg = YAlgebra(n, d, dom)
            _ALGEBRAS[key] = alg
        return alg


# ---------------------------------------------------------------------------
# Functional interface


def to_dsplit(letters: Sequence[Letter], n: int, d: int, domain: ScalarDomain | None = None) -> AlgebraElement:
    return get_algebra(n, d, domain).from_letters(letters)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a.algebra.mul(a, b)


def to_c_coords(x: AlgebraElement) -> AlgebraElement:
    return x.algebra.to_c_coords(x)


def from_c_coords(x: AlgebraElement) -> AlgebraElement:
    return x.algebra.from_c_coords(x)


def enumerate_basis(kind: str, n: int, d: int) -> list[Word]:
    """All C words or all D-split words of Y_{d,n}^B in a deterministic order."""
    alg = get_algebra(n, d)
    if kind == "C":
        return list(alg.c_basis())
    if kind == "D":
        return list(alg.dsplit_basis())
    raise ValueError("kind must be 'C' or 'D'")


def builder(kind: str, n: int, d: int, *args, domain: ScalarDomain | None = None) -> AlgebraElement:
    """Named elements: t, g, g_inv, b1, b1_inv, b, bbar, e, f, e_shift, g_w, block."""
    alg = get_algebra(n, d, domain)
    table = {
        "t": alg.t, "g": alg.g, "g_inv": alg.g_inv, "b1": alg.b1, "b1_inv": alg.b1_inv,
        "b": alg.b, "bbar": alg.bbar, "e": alg.e, "f": alg.f, "e_shift": alg.e_shift,
        "g_w": alg.g_w, "block": alg.block, "one": alg.one,
    }
    if kind not in table:
        raise ValueError(f"unknown element kind {kind!r}")
    return table[kind](*args)


def embed(x: AlgebraElement, n: int) -> AlgebraElement:
    """Image of x under the inclusion Y_{d,m} -> Y_{d,n} (m <= n)."""
    src = x.algebra
    if n < src.n:
        raise ValueError("can only embed into a larger algebra")
    dst = get_algebra(n, src.d, src.domain)
    pad = (0,) * (n - src.n)
    coeffs = {
        DSplitWord(w.w.extend(n), w.frames + pad): c for w, c in x.in_dsplit().coeffs.items()
    }
    return AlgebraElement(dst, coeffs, "D")
