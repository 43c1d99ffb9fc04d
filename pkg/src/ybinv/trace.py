"""Relative traces, the Markov trace and the E/F parameter systems.

The relative trace ``tr_n`` maps a C word ``w m_n`` (``w`` in C_{n-1}) to

* ``x_m w``        when ``m_n = t_n^m``,
* ``y_m w``        when ``m_n = t_n^m b_n``,
* ``z w m'``       when ``m_n`` is a chain block at level n ending at ``j < n``;
  here ``m'`` is the block with the same data one level down and the product
  is rewritten in the C basis of Y_{d,n-1}.

The Markov trace is the composite down to level 0.  :class:`MarkovTrace`
memoises its value on C words and, through the unitriangular change of basis,
on D-split words, so evaluating it on an element costs one dot product.
"""

from __future__ import annotations

import threading
from random import Random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import gmpy2

from .algebra import (
    AlgebraElement,
    CBlock,
    CWord,
    DSplitWord,
    block_letters,
    embed,
    get_algebra,
    letters_of,
)
from .errors import ParameterError
from .exact import CyclotomicScalar, ScalarDomain, to_rational

__all__ = [
    "TraceParams",
    "SubsetSolution",
    "CyclicFunction",
    "MarkovTrace",
    "get_trace",
    "tr_step",
    "markov_trace",
    "markov_trace_by_steps",
    "dft",
    "convolve",
    "e_values",
    "f_values",
    "e_system_solution",
    "verify_e_condition",
    "verify_f_condition",
    "f_system",
    "f_system_matrix",
    "matrix_rank",
    "f_nullspace_dim",
    "subset_solution",
    "nonempty_subsets",
    "trace_with_e_shift",
    "factorization_check",
    "FactorizationReport",
]


def _cyc(d: int, value: object) -> CyclotomicScalar:
    if isinstance(value, CyclotomicScalar):
        if value.d != d:
            raise ValueError("parameter lives in a different cyclotomic field")
        return value
    return CyclotomicScalar.constant(d, to_rational(value))


@dataclass(frozen=True)
class TraceParams:
    """Trace parameters x_0..x_{d-1} (x_0 = 1) and y_0..y_{d-1}; z stays symbolic."""

    d: int
    x: tuple[CyclotomicScalar, ...]
    y: tuple[CyclotomicScalar, ...]

    def __post_init__(self) -> None:
        if len(self.x) != self.d or len(self.y) != self.d:
            raise ValueError("need exactly d values of x and of y")
        object.__setattr__(self, "x", tuple(_cyc(self.d, v) for v in self.x))
        object.__setattr__(self, "y", tuple(_cyc(self.d, v) for v in self.y))
        if self.x[0] != 1:
            raise ParameterError("x_0 must equal 1")

    @classmethod
    def random(cls, d: int, rng: Random, bound: int = 9) -> "TraceParams":
        """Random non-zero rational parameters with x_0 = 1."""

        def pick() -> gmpy2.mpq:
            while True:
                q = gmpy2.mpq(rng.randint(-bound, bound), rng.randint(1, bound))
                if q:
                    return q

        x = (1,) + tuple(pick() for _ in range(d - 1))
        y = tuple(pick() for _ in range(d))
        return cls(d, x, y)


# ---------------------------------------------------------------------------
# Functions on Z/d and the Fourier transform


@dataclass(frozen=True)
class CyclicFunction:
    """A function Z/d -> Q(w), stored as its d values."""

    d: int
    values: tuple[CyclotomicScalar, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.d:
            raise ValueError("need exactly d values")
        object.__setattr__(self, "values", tuple(_cyc(self.d, v) for v in self.values))

    def __call__(self, k: int) -> CyclotomicScalar:
        return self.values[k % self.d]

    @classmethod
    def delta(cls, d: int, a: int) -> "CyclicFunction":
        return cls(d, tuple(1 if k == a % d else 0 for k in range(d)))

    @classmethod
    def character(cls, d: int, a: int) -> "CyclicFunction":
        """e_a : b -> w^{ab}."""
        return cls(d, tuple(CyclotomicScalar.omega(d, a * b) for b in range(d)))

    @classmethod
    def random(cls, d: int, rng: Random, bound: int = 6) -> "CyclicFunction":
        vals = []
        for _ in range(d):
            coeffs = [gmpy2.mpq(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(d)]
            vals.append(CyclotomicScalar(d, coeffs))
        return cls(d, tuple(vals))

    def __add__(self, other: "CyclicFunction") -> "CyclicFunction":
        return CyclicFunction(self.d, tuple(a + b for a, b in zip(self.values, other.values)))

    def __mul__(self, other: object) -> "CyclicFunction":
        """Pointwise product, or scaling by a constant."""
        if isinstance(other, CyclicFunction):
            return CyclicFunction(self.d, tuple(a * b for a, b in zip(self.values, other.values)))
        return CyclicFunction(self.d, tuple(a * other for a in self.values))

    __rmul__ = __mul__

    def reflect(self) -> "CyclicFunction":
        """k -> f(-k)."""
        return CyclicFunction(self.d, tuple(self(-k) for k in range(self.d)))


def dft(f: CyclicFunction) -> CyclicFunction:
    """f^(x) = sum_y f(y) w^{-xy}."""
    d = f.d
    out = []
    for x in range(d):
        acc = CyclotomicScalar.zero(d)
        for y in range(d):
            if f.values[y]:
                acc = acc + f.values[y] * CyclotomicScalar.omega(d, -x * y)
        out.append(acc)
    return CyclicFunction(d, tuple(out))


def convolve(f: CyclicFunction, g: CyclicFunction) -> CyclicFunction:
    """(f * g)(x) = sum_y f(y) g(x - y)."""
    d = f.d
    out = []
    for x in range(d):
        acc = CyclotomicScalar.zero(d)
        for y in range(d):
            acc = acc + f(y) * g(x - y)
        out.append(acc)
    return CyclicFunction(d, tuple(out))


# ---------------------------------------------------------------------------
# E and F systems


def e_values(x: Sequence[CyclotomicScalar]) -> tuple[CyclotomicScalar, ...]:
    """E^{(k)} = (1/d) sum_m x_{k+m} x_{d-m}."""
    d = len(x)
    inv = gmpy2.mpq(1, d)
    out = []
    for k in range(d):
        acc = CyclotomicScalar.zero(d)
        for m in range(d):
            acc = acc + x[(k + m) % d] * x[(d - m) % d]
        out.append(acc * inv)
    return tuple(out)


def f_values(x: Sequence[CyclotomicScalar], y: Sequence[CyclotomicScalar]) -> tuple[CyclotomicScalar, ...]:
    """F^{(k)} = (1/d) sum_m x_{d-m} y_{k+m}."""
    d = len(x)
    inv = gmpy2.mpq(1, d)
    out = []
    for k in range(d):
        acc = CyclotomicScalar.zero(d)
        for m in range(d):
            acc = acc + x[(d - m) % d] * y[(k + m) % d]
        out.append(acc * inv)
    return tuple(out)


def verify_e_condition(x: Sequence[object]) -> tuple[bool, tuple[CyclotomicScalar, ...]]:
    """Whether E^{(m)} = x_m E^{(0)} for all m, together with the E values."""
    d = len(x)
    xs = tuple(_cyc(d, v) for v in x)
    ev = e_values(xs)
    ok = all(ev[m] == xs[m] * ev[0] for m in range(d))
    return ok, ev


def verify_f_condition(x: Sequence[object], y: Sequence[object]) -> bool:
    """Whether F^{(m)} = y_m E^{(0)} for all m."""
    d = len(x)
    xs = tuple(_cyc(d, v) for v in x)
    ys = tuple(_cyc(d, v) for v in y)
    e0 = e_values(xs)[0]
    fv = f_values(xs, ys)
    return all(fv[m] == ys[m] * e0 for m in range(d))


def _normalise_subset(d: int, subset: Iterable[int]) -> tuple[int, ...]:
    s = tuple(sorted({int(a) % d for a in subset}))
    if not s:
        raise ParameterError("the subset S must be non-empty")
    return s


def e_system_solution(d: int, subset: Iterable[int]) -> tuple[CyclotomicScalar, ...]:
    """x_S(k) = (1/|S|) sum_{s in S} w^{sk}."""
    s = _normalise_subset(d, subset)
    inv = gmpy2.mpq(1, len(s))
    return tuple(
        sum((CyclotomicScalar.omega(d, a * k) for a in s), CyclotomicScalar.zero(d)) * inv
        for k in range(d)
    )


def f_system(d: int, subset: Iterable[int], alpha: Mapping[int, object]) -> tuple[CyclotomicScalar, ...]:
    """y_S(k) = sum_{s in S} alpha_s w^{sk}."""
    s = _normalise_subset(d, subset)
    coeffs = {a: _cyc(d, alpha.get(a, 0)) for a in s}
    return tuple(
        sum((coeffs[a] * CyclotomicScalar.omega(d, a * k) for a in s), CyclotomicScalar.zero(d))
        for k in range(d)
    )


def f_system_matrix(d: int, x: Sequence[object]) -> list[list[CyclotomicScalar]]:
    """Matrix of the linear F-system in y, scaled by d.

    Row k encodes ``sum_j x_{k-j} y_j - d E^{(0)} y_k = 0``.
    """
    xs = tuple(_cyc(d, v) for v in x)
    e0 = e_values(xs)[0]
    rows = []
    for k in range(d):
        row = []
        for j in range(d):
            entry = xs[(k - j) % d]
            if j == k:
                entry = entry - e0 * d
            row.append(entry)
        rows.append(row)
    return rows


def matrix_rank(matrix: Sequence[Sequence[CyclotomicScalar]]) -> int:
    """Exact rank by Gaussian elimination over Q(w)."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def f_nullspace_dim(d: int, subset: Iterable[int]) -> int:
    return d - matrix_rank(f_system_matrix(d, e_system_solution(d, subset)))


def nonempty_subsets(d: int) -> list[tuple[int, ...]]:
    return [c for r in range(1, d + 1) for c in combinations(range(d), r)]


@dataclass(frozen=True)
class SubsetSolution:
    """The solution of the E- and F-systems attached to S and alpha."""

    d: int
    subset: tuple[int, ...]
    alpha: tuple[tuple[int, CyclotomicScalar], ...]

    def __post_init__(self) -> None:
        s = _normalise_subset(self.d, self.subset)
        object.__setattr__(self, "subset", s)
        table = dict(self.alpha)
        extra = set(table) - set(s)
        if extra:
            raise ParameterError(f"alpha given for elements {sorted(extra)} outside S")
        object.__setattr__(
            self, "alpha", tuple((a, _cyc(self.d, table.get(a, 0))) for a in s)
        )

    @property
    def x(self) -> tuple[CyclotomicScalar, ...]:
        return e_system_solution(self.d, self.subset)

    @property
    def y(self) -> tuple[CyclotomicScalar, ...]:
        return f_system(self.d, self.subset, dict(self.alpha))

    @property
    def e_s(self) -> gmpy2.mpq:
        """E_S = 1/|S|."""
        return gmpy2.mpq(1, len(self.subset))

    @property
    def params(self) -> TraceParams:
        return TraceParams(self.d, self.x, self.y)


def subset_solution(d: int, subset: Iterable[int], alpha: Mapping[int, object] | None = None) -> SubsetSolution:
    """Solution for S; alpha defaults to 1 on every element of S."""
    s = _normalise_subset(d, subset)
    table = {a: 1 for a in s} if alpha is None else dict(alpha)
    return SubsetSolution(d, s, tuple(table.items()))


# ---------------------------------------------------------------------------
# Relative traces and the Markov trace


def _level0(d: int, domain: ScalarDomain, value) -> AlgebraElement:
    return AlgebraElement(get_algebra(0, d, domain), {CWord(()): value}, "C")


def tr_step(x: AlgebraElement, params: TraceParams) -> AlgebraElement:
    """The relative trace tr_n : Y_{d,n} -> Y_{d,n-1}, in C coordinates."""
    n, d, dom = x.n, x.d, x.domain
    if n < 1:
        raise ValueError("tr_n needs n >= 1")
    if params.d != d:
        raise ValueError("trace parameters built for a different d")
    xc = x.in_c()
    lower = get_algebra(n - 1, d, dom)
    total = AlgebraElement(lower, {}, "C")
    for cword, c in xc.coeffs.items():
        prefix = CWord(cword.blocks[:-1])
        k, kind, j, m = cword.blocks[-1]
        if j == n:
            factor = params.x[m] if kind == "+" else params.y[m]
            term = AlgebraElement(lower, {prefix: c * factor}, "C")
        else:
            letters = letters_of(prefix) + block_letters(CBlock(n - 1, kind, j, m))
            term = lower.to_c_coords(lower.from_letters(letters)).scale(c * dom.z)
        total = total + term
    return total


class MarkovTrace:
    """Tr on Y_{d,n} for every n, memoised on C words and D-split words."""

    def __init__(self, d: int, params: TraceParams, domain: ScalarDomain | None = None) -> None:
        if params.d != d:
            raise ValueError("trace parameters built for a different d")
        self.d = d
        self.params = params
        self.domain = domain or ScalarDomain(d)
        self._c: dict[CWord, object] = {CWord(()): self.domain.one}
        self._d: dict[DSplitWord, object] = {}
        self._lock = threading.RLock()

    def c_value(self, cword: CWord):
        """Tr of a single C word."""
        val = self._c.get(cword)
        if val is not None:
            return val
        with self._lock:
            n = cword.n
            prefix = CWord(cword.blocks[:-1])
            k, kind, j, m = cword.blocks[-1]
            if j == n:
                factor = self.params.x[m] if kind == "+" else self.params.y[m]
                val = self.c_value(prefix) * factor
            else:
                lower = get_algebra(n - 1, self.d, self.domain)
                product = lower._read_off(
                    lower._apply(lower._prefix_vector(prefix.blocks), block_letters(CBlock(n - 1, kind, j, m)))
                )
                val = self.domain.z * self._dot(product)
            self._c[cword] = val
            return val

    def d_value(self, dword: DSplitWord):
        """Tr of a single D-split word, by unitriangular back substitution."""
        val = self._d.get(dword)
        if val is not None:
            return val
        with self._lock:
            if dword.n == 0:
                return self.domain.one
            alg = get_algebra(dword.n, self.d, self.domain)
            cword = alg.leading_cword(dword)
            val = self.c_value(cword)
            for other, a in alg.column(cword).items():
                if other != dword:
                    val = val - a * self.d_value(other)
            self._d[dword] = val
            return val

    def _dot(self, coeffs: Mapping[DSplitWord, object]):
        total = self.domain.zero
        for word, c in coeffs.items():
            total = total + c * self.d_value(word)
        return total

    def __call__(self, x: AlgebraElement):
        if x.d != self.d or x.domain != self.domain:
            raise ValueError("element and trace use different d or scalar domains")
        if x.basis == "C":
            total = self.domain.zero
            for cword, c in x.coeffs.items():
                total = total + c * self.c_value(cword)
            return total
        return self._dot(x.coeffs)


_TRACES: dict[tuple, MarkovTrace] = {}
_TRACES_LOCK = threading.Lock()


def get_trace(params: TraceParams, domain: ScalarDomain | None = None) -> MarkovTrace:
    dom = domain or ScalarDomain(params.d)
    key = (params, dom)
    with _TRACES_LOCK:
        tr = _TRACES.get(key)
        if tr is None:
            tr = MarkovTrace(params.d, params, dom)
            _TRACES[key] = tr
        return tr


def markov_trace(x: AlgebraElement, params: TraceParams):
    """Tr(x) as a scalar of x's domain (a Laurent polynomial in z when symbolic)."""
    return get_trace(params, x.domain)(x)


def markov_trace_by_steps(x: AlgebraElement, params: TraceParams):
    """Tr(x) computed by literally iterating tr_n, ..., tr_1."""
    current = x.in_c()
    while current.n > 0:
        current = tr_step(current, params)
    return current.coeffs.get(CWord(()), x.domain.zero)


# ---------------------------------------------------------------------------
# Factorisation through e_n


def trace_with_e_shift(x: AlgebraElement, params: TraceParams, m: int = 0):
    """Tr_{n+1}(x e_n^{(m)}) for x in Y_{d,n}.

    ``x e_n^{(m)} = (1/d) sum_s (x t_n^{m+s}) t_{n+1}^{-s}``.  Writing
    ``x t_n^{m+s}`` in the C basis of Y_{d,n} and appending the level n+1
    block ``t_{n+1}^{-s}`` gives the C coordinates in Y_{d,n+1} directly, so
    no level n+1 change of basis is needed.
    """
    alg, d, n = x.algebra, x.d, x.n
    trace = get_trace(params, x.domain)
    total = x.domain.zero
    for s in range(d):
        shifted = alg.to_c_coords(x * alg.t(n, m + s))
        top = CBlock(n + 1, "+", n + 1, (-s) % d)
        for cword, c in shifted.coeffs.items():
            total = total + c * trace.c_value(CWord(cword.blocks + (top,)))
    return total * x.domain.inv_d


@dataclass
class FactorizationReport:
    n: int
    d: int
    subset: tuple[int, ...]
    words_checked: int = 0
    failures: list[str] = field(default_factory=list)
    lemma_checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


def factorization_check(
    n: int,
    d: int,
    sol: SubsetSolution,
    domain: ScalarDomain | None = None,
    cross_check_generic: bool = True,
) -> FactorizationReport:
    """Check Tr_{n+1}(w e_n) = Tr_{n+1}(e_n) Tr_n(w) = Tr_n(w)/|S| on the C basis.

    Also checks the shifted-idempotent identities for words ending in
    ``t_n^k`` and ``b_n t_n^k`` and the reduction for chain blocks.  When
    Y_{d,n+1} is small enough the value of Tr_{n+1}(w e_n) is recomputed by
    the generic route as well.
    """
    dom = domain or ScalarDomain(d)
    params = sol.params
    trace = get_trace(params, dom)
    alg = get_algebra(n, d, dom)
    report = FactorizationReport(n, d, sol.subset)
    ev = e_values(params.x)
    fv = f_values(params.x, params.y)
    e_s = sol.e_s

    generic = None
    if cross_check_generic:
        try:
            generic = get_algebra(n + 1, d, dom)
        except Exception:  # outside the envelope: only the block route
            generic = None
    if generic is not None:
        top_e = generic.e(n)
        if trace(top_e) != e_s:
            report.failures.append("Tr_{n+1}(e_n) != E_S")

    for cword in alg.c_basis():
        w = alg.word(cword)
        base = trace.c_value(cword)
        lhs = trace_with_e_shift(w, params)
        report.words_checked += 1
        if lhs != base * e_s:
            report.failures.append(f"factorisation fails for {cword}")
        if generic is not None:
            if trace(embed(w, n + 1) * generic.e(n)) != lhs:
                report.failures.append(f"generic route disagrees for {cword}")
        k_lvl, kind, j, k = cword.blocks[-1]
        prefix = CWord(cword.blocks[:-1])
        if j == n:
            inner = trace.c_value(prefix)
            table = ev if kind == "+" else fv
            for m in range(d):
                report.lemma_checks += 1
                if trace_with_e_shift(w, params, m) != inner * table[(k + m) % d]:
                    report.failures.append(f"shifted idempotent identity fails for {cword}, m={m}")
        elif n >= 2:
            # Tr_{n+1}(w' m e_n) = z Tr_n(m' w' e_{n-1}) with m' one level down
            lower = get_algebra(n - 1, d, dom)
            x_low = lower.block(CBlock(n - 1, kind, j, k)) * lower.from_letters(letters_of(prefix))
            report.lemma_checks += 1
            rhs = dom.z * trace(embed(x_low, n) * alg.e(n - 1))
            if lhs != rhs:
                report.failures.append(f"chain-block reduction fails for {cword}")
    return report
