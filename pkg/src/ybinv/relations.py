"""Verification suites for the defining relations and multiplication lemmas.

Defining relations are checked twice: as operator identities on every basis
tensor of V^{(x)n} and as coordinate identities in the D-split basis.  The
block-multiplication lemmas for the C and D bases, the b_k braid identities
and the auxiliary conjugation identities are checked as coordinate
identities through :class:`~ybinv.algebra.YAlgebra`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .algebra import AlgebraElement, CBlock, YAlgebra, get_algebra
from .exact import ScalarDomain
from .rep import Letter, _accumulate, _act, check_rep_size

__all__ = [
    "Identity",
    "CheckResult",
    "defining_relations",
    "operator_identity_holds",
    "coordinate_identity_holds",
    "check_defining_relations",
    "check_projection_letters",
    "check_braid_hbhb",
    "check_tr1",
    "check_c_lemmas",
    "check_d_lemmas",
    "literal_b1_lemma_k1",
]

Expr = tuple[tuple[object, tuple[Letter, ...]], ...]


@dataclass(frozen=True)
class Identity:
    """``sum c_i * word_i == sum c'_j * word'_j`` with words as letter tuples."""

    family: str
    instance: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class CheckResult:
    family: str
    instance: str
    passed: bool
    operator: bool | None = None
    coordinates: bool | None = None


def _w(*letters: Letter) -> tuple[Letter, ...]:
    return tuple(letters)


def T(j: int) -> Letter:
    return Letter("T", j)


def G(i: int) -> Letter:
    return Letter("G", i)


B = Letter("B", 1)


def defining_relations(n: int, d: int, dom: ScalarDomain) -> list[Identity]:
    """Every instance of the ten defining relation families for given n, d."""
    one = dom.one
    out: list[Identity] = []

    def add(family: str, instance: str, lhs: Expr, rhs: Expr) -> None:
        out.append(Identity(family, instance, lhs, rhs))

    gens = range(1, n)
    for i, j in product(gens, gens):
        if abs(i - j) > 1:
            add("g_i g_j = g_j g_i", f"i={i},j={j}", ((one, _w(G(i), G(j))),), ((one, _w(G(j), G(i))),))
        if abs(i - j) == 1:
            add(
                "g_i g_j g_i = g_j g_i g_j", f"i={i},j={j}",
                ((one, _w(G(i), G(j), G(i))),), ((one, _w(G(j), G(i), G(j))),),
            )
    if n >= 1:
        for i in gens:
            if i != 1:
                add("b_1 g_i = g_i b_1", f"i={i}", ((one, _w(B, G(i))),), ((one, _w(G(i), B)),))
        if n >= 2:
            add(
                "b_1 g_1 b_1 g_1 = g_1 b_1 g_1 b_1", "",
                ((one, _w(B, G(1), B, G(1))),), ((one, _w(G(1), B, G(1), B)),),
            )
    strands = range(1, n + 1)
    for i, j in product(strands, strands):
        if i < j:
            add("t_i t_j = t_j t_i", f"i={i},j={j}", ((one, _w(T(i), T(j))),), ((one, _w(T(j), T(i))),))
    for i in gens:
        for j in strands:
            sj = i + 1 if j == i else i if j == i + 1 else j
            add("t_j g_i = g_i t_s_i(j)", f"i={i},j={j}", ((one, _w(T(j), G(i))),), ((one, _w(G(i), T(sj))),))
    for i in strands:
        add("t_i b_1 = b_1 t_i", f"i={i}", ((one, _w(T(i), B)),), ((one, _w(B, T(i))),))
    for i in strands:
        add("t_i^d = 1", f"i={i}", ((one, _w(*[T(i)] * d)),), ((one, ()),))
    coef = dom.u_minus * dom.inv_d
    for i in gens:
        rhs = ((one, ()),) + tuple(
            (coef, _w(*[T(i)] * m, *[T(i + 1)] * ((d - m) % d), G(i))) for m in range(d)
        )
        add("g_i^2 = 1 + (u-u^-1) e_i g_i", f"i={i}", ((one, _w(G(i), G(i))),), rhs)
    if n >= 1:
        coef_b = dom.v_minus * dom.inv_d
        rhs = ((one, ()),) + tuple((coef_b, _w(*[T(1)] * m, B)) for m in range(d))
        add("b_1^2 = 1 + (v-v^-1) f_1 b_1", "", ((one, _w(B, B)),), rhs)
    return out


def _basis_tensors(n: int, d: int) -> Iterator[tuple[tuple[int, int], ...]]:
    labels = [x for x in range(-n, n + 1) if x]
    slot = list(product(labels, range(d)))
    return product(slot, repeat=n)


def _apply_expr(entries: dict, expr: Expr, n: int, dom: ScalarDomain) -> dict:
    total: dict = {}
    for coef, letters in expr:
        image = entries
        for letter in letters:
            image = _act(image, letter, n, dom)
        for idx, c in image.items():
            _accumulate(total, idx, c * coef)
    return total


def operator_identity_holds(identity: Identity, n: int, d: int, dom: ScalarDomain) -> bool:
    """Compare both sides as operators on every basis tensor of V^{(x)n}."""
    check_rep_size(n, d)
    one = dom.one
    for idx in _basis_tensors(n, d):
        entries = {idx: one}
        if _apply_expr(entries, identity.lhs, n, dom) != _apply_expr(entries, identity.rhs, n, dom):
            return False
    return True


def _expr_element(alg: YAlgebra, expr: Expr) -> AlgebraElement:
    total = alg.element({})
    for coef, letters in expr:
        total = total + alg.from_letters(letters).scale(coef)
    return total


def coordinate_identity_holds(identity: Identity, alg: YAlgebra) -> bool:
    return _expr_element(alg, identity.lhs) == _expr_element(alg, identity.rhs)


def check_defining_relations(
    n: int, d: int, domain: ScalarDomain | None = None, operators: bool = True
) -> list[CheckResult]:
    dom = domain or ScalarDomain(d)
    alg = get_algebra(n, d, dom)
    results = []
    for ident in defining_relations(n, d, dom):
        op = operator_identity_holds(ident, n, d, dom) if operators else None
        co = coordinate_identity_holds(ident, alg)
        results.append(
            CheckResult(ident.family, ident.instance, bool(co and op is not False), op, co)
        )
    return results


def check_projection_letters(n: int, d: int, domain: ScalarDomain | None = None) -> list[CheckResult]:
    """E, F and the inverse letters agree with their definitions as operators."""
    dom = domain or ScalarDomain(d)
    one = dom.one
    idents = []
    for i in range(1, n):
        rhs = tuple(
            (dom.inv_d * one, _w(*[T(i)] * m, *[T(i + 1)] * ((d - m) % d))) for m in range(d)
        )
        idents.append(Identity("E_i = (1/d) sum T_i^m T_{i+1}^-m", f"i={i}", ((one, _w(Letter("E", i))),), rhs))
        idents.append(Identity("G_i G_i^-1 = 1", f"i={i}", ((one, _w(G(i), Letter("G_inv", i))),), ((one, ()),)))
        idents.append(Identity("G_i^-1 G_i = 1", f"i={i}", ((one, _w(Letter("G_inv", i), G(i))),), ((one, ()),)))
    if n >= 1:
        rhs = tuple((dom.inv_d * one, _w(*[T(1)] * m)) for m in range(d))
        idents.append(Identity("F = (1/d) sum T_1^m", "", ((one, _w(Letter("F", 1))),), rhs))
        idents.append(Identity("B B^-1 = 1", "", ((one, _w(B, Letter("B_inv", 1))),), ((one, ()),)))
        idents.append(Identity("B^-1 B = 1", "", ((one, _w(Letter("B_inv", 1), B)),), ((one, ()),)))
    for j in range(1, n + 1):
        idents.append(Identity("T T^-1 = 1", f"j={j}", ((one, _w(T(j), Letter("T_inv", j))),), ((one, ()),)))
    out = []
    for ident in idents:
        ok = operator_identity_holds(ident, n, d, dom)
        out.append(CheckResult(ident.family, ident.instance, ok, ok, None))
    return out


# ---------------------------------------------------------------------------
# Lemma suites (coordinate identities)


class _Words:
    """Shorthand constructors for blocks inside a fixed algebra."""

    def __init__(self, alg: YAlgebra) -> None:
        self.alg = alg
        self.d = alg.d
        self.dom = alg.domain

    def t(self, j: int, m: int = 1) -> AlgebraElement:
        return self.alg.t(j, m % self.d)

    def g(self, i: int) -> AlgebraElement:
        return self.alg.g(i)

    def g_inv(self, i: int) -> AlgebraElement:
        return self.alg.g_inv(i)

    def M(self, level: int, kind: str, k: int, m: int) -> AlgebraElement:
        """C block m^{kind}_{level, k, m}."""
        return self.alg.block(CBlock(level, kind, k, m % self.d))

    def N(self, level: int, kind: str, k: int, m: int) -> AlgebraElement:
        """D block: g_{level-1} ... g_k t_k^m, or with bbar_k before t_k^m."""
        letters = [G(i) for i in range(level - 1, k - 1, -1)]
        if kind == "-":
            letters += [G(i) for i in range(k - 1, 0, -1)] + [B] + [G(i) for i in range(1, k)]
        letters += [T(k)] * (m % self.d)
        return self.alg.from_letters(letters)

    def total(self, terms: Sequence[AlgebraElement]) -> AlgebraElement:
        acc = self.alg.element({})
        for x in terms:
            acc = acc + x
        return acc


def _record(out: list[CheckResult], family: str, instance: str, lhs: AlgebraElement, rhs: AlgebraElement) -> None:
    out.append(CheckResult(family, instance, lhs == rhs, None, lhs == rhs))


def check_braid_hbhb(alg: YAlgebra) -> list[CheckResult]:
    """Relations among b_k, t_j and g_i inherited from the defining ones."""
    n, out = alg.n, []
    for k in range(1, n):
        bk = alg.b(k)
        for j in range(1, n + 1):
            _record(out, "b_k t_j = t_j b_k", f"k={k},j={j}", bk * alg.t(j), alg.t(j) * bk)
        for i in range(1, n):
            if i <= k - 2 or i >= k + 1:
                _record(out, "b_k g_i = g_i b_k", f"k={k},i={i}", bk * alg.g(i), alg.g(i) * bk)
        gk = alg.g(k)
        _record(out, "g_k b_k g_k b_k = b_k g_k b_k g_k", f"k={k}", gk * bk * gk * bk, bk * gk * bk * gk)
        _record(out, "g_k b_k b_{k+1} = b_k g_k b_k", f"k={k}", gk * bk * alg.b(k + 1), bk * gk * bk)
    return out


def check_tr1(alg: YAlgebra, samples: int = 5, seed: int = 0) -> list[CheckResult]:
    """Conjugation identities used by the trace construction."""
    W, n, d, out = _Words(alg), alg.n, alg.d, []
    c = alg.domain.u_minus
    for k in range(2, n + 1):
        for j in range(1, k):
            for m in range(d):
                x = W.M(k, "-", j, m)
                _record(out, "m^-_{k,j,m} b_k = b_{k-1} m^-_{k,j,m}", f"k={k},j={j},m={m}",
                        x * alg.b(k), alg.b(k - 1) * x)
        g, bk1, e = alg.g(k - 1), alg.b(k - 1), alg.e(k - 1)
        lhs = g * g * bk1 * alg.g_inv(k - 1)
        rhs = bk1 * g - (bk1 * e).scale(c) + (e * alg.b(k)).scale(c)
        _record(out, "g^2 b g^-1 expansion", f"k={k}", lhs, rhs)
    if n >= 2:
        rng = random.Random(seed)
        basis = list(alg.dsplit_basis())
        g, gi, e = alg.g(n - 1), alg.g_inv(n - 1), alg.e(n - 1)
        for _ in range(samples):
            x = alg.word(rng.choice(basis)) + alg.word(rng.choice(basis))
            lhs = g * x * gi
            rhs = gi * x * g + (e * x * g - g * x * e).scale(c)
            _record(out, "g X g^-1 = g^-1 X g + (u-u^-1)(e X g - g X e)", "random X", lhs, rhs)
    return out


def check_c_lemmas(alg: YAlgebra) -> list[CheckResult]:
    """Multiplication of C blocks by t_j, g_j and b_1 from the right."""
    W, n, d, out = _Words(alg), alg.n, alg.d, []
    um = alg.domain.u_minus * alg.domain.inv_d
    vm = alg.domain.v_minus * alg.domain.inv_d
    for L in range(1, n + 1):
        for kind in ("+", "-"):
            for k in range(1, L + 1):
                for m in range(d):
                    M = W.M(L, kind, k, m)
                    tag = f"n={L},{kind},k={k},m={m}"
                    for j in range(1, L + 1):
                        if j > k:
                            rhs = W.t(j - 1) * M
                        elif j == k:
                            rhs = W.M(L, kind, k, m + 1)
                        else:
                            rhs = W.t(j) * M
                        _record(out, "C block times t_j", f"{tag},j={j}", M * W.t(j), rhs)
                    _record(out, "t_n times C block", tag, W.t(L) * M, W.M(L, kind, k, m + 1))
                    for j in range(1, L):
                        if j > k:
                            rhs = W.g(j - 1) * M
                        elif j == k:
                            rhs = W.M(L, kind, k + 1, m) + W.total(
                                [W.t(j, m - s) * W.M(L, kind, k, s) for s in range(d)]
                            ).scale(um)
                        elif j == k - 1:
                            rhs = W.M(L, kind, k - 1, m)
                        else:
                            rhs = W.g(j) * M
                        _record(out, "C block times g_j", f"{tag},j={j}", M * W.g(j), rhs)
                    b1 = alg.b1()
                    if kind == "+":
                        rhs = W.M(L, "-", 1, m) if k == 1 else b1 * M
                    elif k == 1:
                        rhs = W.M(L, "+", 1, m) + W.total([W.M(L, "-", 1, s) for s in range(d)]).scale(vm)
                    else:
                        p_terms = []
                        for s in range(d):
                            chain = alg.one()
                            for i in range(1, k - 1):
                                chain = chain * W.g_inv(i)
                            inner = W.t(1, m - s) * chain * W.M(L, "-", 1, s)
                            p_terms.append(b1 * inner - W.t(1, m - s) * chain * (W.M(L, "-", 1, s) * b1))
                        rhs = b1 * M + W.total(p_terms).scale(um)
                    _record(out, "C block times b_1", tag, M * b1, rhs)
    return out


def literal_b1_lemma_k1(alg: YAlgebra, level: int, m: int) -> tuple[AlgebraElement, AlgebraElement]:
    """Both sides of the k = 1 negative-block b_1 rule with plus blocks in the sum.

    This variant is false in general; the correct sum runs over negative
    blocks.  Kept so the discrepancy can be demonstrated.
    """
    W, d = _Words(alg), alg.d
    vm = alg.domain.v_minus * alg.domain.inv_d
    lhs = W.M(level, "-", 1, m) * alg.b1()
    rhs = W.M(level, "+", 1, m) + W.total([W.M(level, "+", 1, s) for s in range(d)]).scale(vm)
    return lhs, rhs


def check_d_lemmas(alg: YAlgebra) -> list[CheckResult]:
    """Multiplication of D blocks by b_1, g_j and t_j from the right."""
    W, n, d, out = _Words(alg), alg.n, alg.d, []
    um = alg.domain.u_minus * alg.domain.inv_d
    vm = alg.domain.v_minus * alg.domain.inv_d
    b1 = alg.b1()
    for L in range(1, n + 1):
        for a in range(d):
            top = W.N(L, "-", L, a)  # bbar_L t_L^a
            _record(out, "bbar_n t^a commutes with b_1", f"n={L},a={a}", top * b1, b1 * top)
            for j in range(1, L - 1):
                _record(out, "bbar_n t^a commutes with g_j", f"n={L},a={a},j={j}", top * W.g(j), W.g(j) * top)
            if L >= 2:
                rhs = W.N(L, "-", L - 1, a) + W.total(
                    [W.t(L - 1, a - s) * W.N(L, "-", L, s) for s in range(d)]
                ).scale(um)
                _record(out, "bbar_n t^a times g_{n-1}", f"n={L},a={a}", top * W.g(L - 1), rhs)
            for kind in ("+", "-"):
                for k in range(1, L + 1):
                    N = W.N(L, kind, k, a)
                    tag = f"n={L},{kind},k={k},a={a}"
                    if k != 1:
                        _record(out, "D block commutes with b_1", tag, N * b1, b1 * N)
                    for j in range(1, L + 1):
                        if j > k:
                            rhs = W.t(j - 1) * N
                        elif j == k:
                            rhs = W.N(L, kind, k, a + 1)
                        else:
                            rhs = W.t(j) * N
                        _record(out, "D block times t_j", f"{tag},j={j}", N * W.t(j), rhs)
                    for j in range(1, L):
                        if j > k:
                            rhs = W.g(j - 1) * N
                        elif kind == "+":
                            if j == k:
                                rhs = W.N(L, "+", k + 1, a) + W.total(
                                    [W.t(j, a - s) * W.N(L, "+", k, s) for s in range(d)]
                                ).scale(um)
                            elif j == k - 1:
                                rhs = W.N(L, "+", k - 1, a)
                            else:
                                rhs = W.g(j) * N
                        else:
                            if j == k:
                                rhs = W.N(L, "-", k + 1, a)
                            elif j == k - 1:
                                rhs = W.N(L, "-", k - 1, a) + W.total(
                                    [W.t(j, a - s) * W.N(L, "-", k, s) for s in range(d)]
                                ).scale(um)
                            else:
                                rhs = W.g(j) * N
                        _record(out, "D block times g_j", f"{tag},j={j}", N * W.g(j), rhs)
            _record(out, "plus D block times b_1", f"n={L},a={a}", W.N(L, "+", 1, a) * b1, W.N(L, "-", 1, a))
            rhs = W.N(L, "+", 1, a) + W.total([W.N(L, "-", 1, s) for s in range(d)]).scale(vm)
            _record(out, "minus D block times b_1", f"n={L},a={a}", W.N(L, "-", 1, a) * b1, rhs)
    return out
