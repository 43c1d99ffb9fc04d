"""Framed type-B braid words and the invariant built from the Markov trace.

A braid word on n strands uses the letters ``r`` / ``r^-1`` (the loop
generator around the fixed strand), ``s<i>`` / ``s<i>^-1`` (the usual braid
generators) and ``t<j>^<m>`` (framing).  Its image in Y_{d,n}^B sends ``r`` to
``b_1``, ``s_i`` to ``g_i`` and ``t_j`` to ``t_j``.

For a solution S of the E- and F-systems put ``E_S = 1/|S|``,
``lambda_S = (z - (u - u^-1) E_S) / z`` and
``Lambda_S = 1 / (z sqrt(lambda_S))``.  The invariant of a word a with
exponent sum e (counting only the s-letters) is

    Lambda_S^{n-1} sqrt(lambda_S)^e Tr(pi(a)) = z^{-(n-1)} Tr(pi(a)) * sqrt(lambda_S)^{e-(n-1)}.

It is stored exactly as the pair (L, h) with ``L = z^{-(n-1)} Tr(pi(a))`` and
``h = e - (n-1)``, meaning ``L * sqrt(lambda_S)^h``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .algebra import AlgebraElement, get_algebra
from .errors import ParameterError, ParseError
from .exact import CyclotomicScalar, ScalarDomain, canonical_string
from .rep import Letter
from .trace import (
    SubsetSolution,
    TraceParams,
    e_values,
    markov_trace,
    verify_e_condition,
    verify_f_condition,
)

__all__ = [
    "BraidLetter",
    "BraidWordB",
    "parse_braid",
    "project",
    "exponent_sum",
    "InvariantValue",
    "compute_invariant",
    "invariant_equal",
    "markov_move",
    "random_braid_word",
]

KINDS = ("rho", "rho_inv", "sigma", "sigma_inv", "frame")


class BraidLetter(NamedTuple):
    kind: str
    index: int = 1
    power: int = 1

    def inverse(self) -> "BraidLetter":
        if self.kind == "frame":
            return BraidLetter("frame", self.index, -self.power)
        swap = {"rho": "rho_inv", "rho_inv": "rho", "sigma": "sigma_inv", "sigma_inv": "sigma"}
        return BraidLetter(swap[self.kind], self.index, 1)

    def __str__(self) -> str:
        if self.kind == "rho":
            return "r"
        if self.kind == "rho_inv":
            return "r^-1"
        if self.kind == "sigma":
            return f"s{self.index}"
        if self.kind == "sigma_inv":
            return f"s{self.index}^-1"
        return f"t{self.index}^{self.power}"


@dataclass(frozen=True)
class BraidWordB:
    """A framed type-B braid word on n strands with framing modulo d."""

    n: int
    d: int
    letters: tuple[BraidLetter, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        clean = []
        for letter in self.letters:
            letter = BraidLetter(*letter)
            if letter.kind not in KINDS:
                raise ValueError(f"unknown braid letter kind {letter.kind!r}")
            if letter.kind in ("sigma", "sigma_inv") and not 1 <= letter.index < self.n:
                raise ValueError(f"s{letter.index} needs 1 <= i < n = {self.n}")
            if letter.kind == "frame":
                if not 1 <= letter.index <= self.n:
                    raise ValueError(f"t{letter.index} needs 1 <= j <= n = {self.n}")
                letter = BraidLetter("frame", letter.index, letter.power % self.d)
            clean.append(letter)
        object.__setattr__(self, "letters", tuple(clean))

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.letters)

    def __add__(self, other: "BraidWordB") -> "BraidWordB":
        if (self.n, self.d) != (other.n, other.d):
            raise ValueError("concatenating braid words of different shape")
        return BraidWordB(self.n, self.d, self.letters + other.letters)

    def inverse(self) -> "BraidWordB":
        return BraidWordB(self.n, self.d, tuple(x.inverse() for x in reversed(self.letters)))

    def extended(self, n: int) -> "BraidWordB":
        return BraidWordB(n, self.d, self.letters)


def _parse_token(token: str) -> BraidLetter:
    m = re.fullmatch(r"r(\^-1)?", token)
    if m:
        return BraidLetter("rho_inv" if m.group(1) else "rho", 1, 1)
    m = re.fullmatch(r"s(\d+)(\^-1)?", token)
    if m:
        return BraidLetter("sigma_inv" if m.group(2) else "sigma", int(m.group(1)), 1)
    m = re.fullmatch(r"t(\d+)\^(-?\d+)", token)
    if m:
        return BraidLetter("frame", int(m.group(1)), int(m.group(2)))
    raise ParseError(f"unrecognised braid token {token!r}")


def parse_braid(text: str, d: int, n: int | None = None) -> BraidWordB:
    """Parse whitespace-separated tokens ``r``, ``r^-1``, ``s<i>``, ``s<i>^-1``, ``t<j>^<m>``.

    When n is omitted the smallest strand count that fits the word is used.
    """
    tokens = text.replace(",", " ").split()
    letters = [_parse_token(tok) for tok in tokens]
    needed = 1
    for letter in letters:
        if letter.kind in ("sigma", "sigma_inv"):
            if letter.index < 1:
                raise ParseError("braid generator indices start at 1")
            needed = max(needed, letter.index + 1)
        elif letter.kind == "frame":
            if letter.index < 1:
                raise ParseError("strand indices start at 1")
            needed = max(needed, letter.index)
    strands = needed if n is None else n
    if strands < needed:
        raise ParseError(f"word uses {needed} strands but n = {strands}")
    return BraidWordB(strands, d, tuple(letters))


def _algebra_letters(word: BraidWordB) -> list[Letter]:
    out: list[Letter] = []
    for kind, i, p in word.letters:
        if kind == "rho":
            out.append(Letter("B", 1))
        elif kind == "rho_inv":
            out.append(Letter("B_inv", 1))
        elif kind == "sigma":
            out.append(Letter("G", i))
        elif kind == "sigma_inv":
            out.append(Letter("G_inv", i))
        else:
            out.extend([Letter("T", i)] * (p % word.d))
    return out


def project(word: BraidWordB, domain: ScalarDomain | None = None) -> AlgebraElement:
    """The image pi(word) in Y_{d,n}^B, in D-split coordinates."""
    return get_algebra(word.n, word.d, domain).from_letters(_algebra_letters(word))


def exponent_sum(word: BraidWordB) -> int:
    """Signed count of the s-letters; r-letters and framings do not count."""
    return sum(1 if x.kind == "sigma" else -1 if x.kind == "sigma_inv" else 0 for x in word.letters)


@dataclass(frozen=True)
class InvariantValue:
    """The value ``L * sqrt(lambda_S)^h``."""

    L: object
    h: int
    e_s: CyclotomicScalar
    d: int
    domain: ScalarDomain = field(compare=False)

    def __str__(self) -> str:
        return f"invariant = {canonical_string(self.L)}\nhalf_power = {self.h}"

    def as_dict(self) -> dict:
        return {"invariant": canonical_string(self.L), "half_power": self.h}


def _params_of(sol: SubsetSolution | TraceParams) -> tuple[TraceParams, CyclotomicScalar]:
    if isinstance(sol, SubsetSolution):
        params = sol.params
        return params, CyclotomicScalar.constant(sol.d, sol.e_s)
    return sol, e_values(sol.x)[0]


def validate_parameters(sol: SubsetSolution | TraceParams) -> None:
    params, _ = _params_of(sol)
    ok_e, _ = verify_e_condition(params.x)
    if not ok_e:
        raise ParameterError("x does not satisfy the E-condition")
    if not verify_f_condition(params.x, params.y):
        raise ParameterError("y does not satisfy the F-condition")


def compute_invariant(
    word: BraidWordB,
    sol: SubsetSolution | TraceParams,
    unsafe: bool = False,
    domain: ScalarDomain | None = None,
) -> InvariantValue:
    """Evaluate the invariant of a braid word.

    Parameters must solve the E- and F-systems unless ``unsafe`` is set, in
    which case the same expression is computed without any invariance
    guarantee.
    """
    params, e_s = _params_of(sol)
    if params.d != word.d:
        raise ParameterError("parameters and braid word use different d")
    if not unsafe:
        validate_parameters(sol)
    dom = domain or ScalarDomain(word.d)
    tr = markov_trace(project(word, dom), params)
    shift = word.n - 1
    L = tr * dom.z ** (-shift) if shift else tr
    return InvariantValue(L, exponent_sum(word) - shift, e_s, word.d, dom)


def invariant_equal(a: InvariantValue, b: InvariantValue) -> bool:
    """Exact equality of ``L_a sqrt(lambda)^{h_a}`` and ``L_b sqrt(lambda)^{h_b}``.

    With ``P = z - (u - u^-1) E_S`` and ``h_a - h_b = 2k >= 0`` this is
    ``L_a P^k = L_b z^k``.  Different parity of h means the values lie in
    different sqrt(lambda)-cosets and agree only when both vanish.
    """
    if a.d != b.d or a.e_s != b.e_s or a.domain != b.domain:
        raise ValueError("invariants computed for different d or different E_S")
    if a.h < b.h:
        a, b = b, a
    diff = a.h - b.h
    if diff % 2:
        return not a.L and not b.L
    k = diff // 2
    if k == 0:
        return a.L == b.L
    dom = a.domain
    P = dom.z - dom.u_minus * dom.const(a.e_s)
    return a.L * P**k == b.L * dom.z**k


def markov_move(
    word: BraidWordB, move: str, letter: BraidLetter | None = None, rng: random.Random | None = None
) -> BraidWordB:
    """Apply a Markov move.

    ``conjugate`` replaces a by ``x a x^-1`` for a letter x (random when not
    given); ``stabilize+`` and ``stabilize-`` add a strand and append
    ``s_n`` or ``s_n^-1``.
    """
    if move == "conjugate":
        if letter is None:
            letter = _random_letter(word.n, word.d, rng or random.Random())
        x = BraidWordB(word.n, word.d, (letter,))
        return x + word + x.inverse()
    if move in ("stabilize+", "stabilize-"):
        n = word.n + 1
        kind = "sigma" if move == "stabilize+" else "sigma_inv"
        return BraidWordB(n, word.d, word.letters + (BraidLetter(kind, word.n, 1),))
    raise ValueError(f"unknown Markov move {move!r}")


def _random_letter(n: int, d: int, rng: random.Random) -> BraidLetter:
    choices = ["rho", "rho_inv", "frame"]
    if n >= 2:
        choices += ["sigma", "sigma_inv"]
    kind = rng.choice(choices)
    if kind in ("sigma", "sigma_inv"):
        return BraidLetter(kind, rng.randint(1, n - 1), 1)
    if kind == "frame":
        return BraidLetter("frame", rng.randint(1, n), rng.randint(1, max(d - 1, 1)))
    return BraidLetter(kind, 1, 1)


def random_braid_word(n: int, d: int, length: int, rng: random.Random) -> BraidWordB:
    return BraidWordB(n, d, tuple(_random_letter(n, d, rng) for _ in range(length)))
