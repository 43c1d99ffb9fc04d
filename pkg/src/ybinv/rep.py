"""The tensor representation of Y_{d,n}^B on V^{(x)n}.

V has basis ``v_i^r`` with ``i`` in ``X_n`` and ``r`` in ``Z/d``.  A basis
tensor is a tuple of ``(label, frame)`` pairs, one per slot.  Operators act on
the right and are given by explicit case tables:

* ``T_j`` multiplies by ``w^{r_j}``;
* ``G_i`` acts on slots ``i, i+1``: swap when the frames differ, and when they
  agree it multiplies by ``u`` (equal labels), swaps (``a < b``) or swaps and
  adds ``(u - u^-1)`` times the input (``a > b``);
* ``B_1`` acts on slot 1: negate the label, adding ``(v - v^-1)`` times the
  input when the frame is 0 and the label negative;
* ``E_i`` keeps tensors with ``r_i = r_{i+1}`` and ``F`` those with ``r_1 = 0``.

The u-basis ``u_k^r = sum_i w^{ir} v_k^i`` diagonalises nothing but makes the
frames additive: ``u_k^r T = u_k^{r+1}``.  The start vector
``u_1^0 (x) ... (x) u_n^0`` is sent by a word ``(w, m)`` of W_{d,n} to the single
u-tensor with labels ``w(1), ..., w(n)`` and frames ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, NamedTuple, Sequence

from .coxeter import SignedPermutation
from .errors import SizeGuardError
from .exact import ScalarDomain, canonical_string

__all__ = [
    "Letter",
    "TensorIndex",
    "TensorVector",
    "REP_SIZE_LIMIT",
    "check_rep_size",
    "apply_letter",
    "apply_letters",
    "to_u_basis",
    "from_u_basis",
    "start_vector",
    "evaluate_letters",
    "predicted_action",
    "dump_vector",
]

REP_SIZE_LIMIT = 10**6

LETTER_KINDS = ("T", "T_inv", "G", "G_inv", "B", "B_inv", "E", "F")


class Letter(NamedTuple):
    """A letter of a word in the algebra or its image operator.

    ``T``/``T_inv`` carry the strand j, ``G``/``G_inv``/``E`` the index i of
    the pair (i, i+1), and ``B``/``B_inv``/``F`` always act on strand 1.
    """

    kind: str
    index: int = 1

    def __str__(self) -> str:
        names = {
            "T": "t", "T_inv": "t^-1", "G": "g", "G_inv": "g^-1",
            "B": "b", "B_inv": "b^-1", "E": "e", "F": "f",
        }
        base = names[self.kind]
        if "^" in base:
            head, tail = base.split("^")
            return f"{head}{self.index}^{tail}"
        return f"{base}{self.index}"


TensorIndex = tuple[tuple[int, int], ...]


@dataclass
class TensorVector:
    """A finite linear combination of basis tensors.

    ``basis`` is ``"v"`` or ``"u"`` and states which tensor basis the indices
    refer to.  Only non-zero coefficients are stored.
    """

    n: int
    d: int
    basis: str = "v"
    entries: dict[TensorIndex, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.basis not in ("u", "v"):
            raise ValueError("basis flag must be 'u' or 'v'")

    def __len__(self) -> int:
        return len(self.entries)

    def coefficient(self, index: TensorIndex, domain: ScalarDomain | None = None):
        if index in self.entries:
            return self.entries[index]
        return (domain or ScalarDomain(self.d)).zero

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorVector):
            return NotImplemented
        return (self.n, self.d, self.basis) == (other.n, other.d, other.basis) and (
            self.entries == other.entries
        )


def check_rep_size(n: int, d: int) -> None:
    """Refuse tensor powers with more than 10^6 basis tensors."""
    if (2 * n * d) ** n > REP_SIZE_LIMIT:
        raise SizeGuardError(
            f"V^(x){n} for d={d} has {(2 * n * d) ** n} basis tensors, above {REP_SIZE_LIMIT}"
        )


def _accumulate(dst: dict, key, value) -> None:
    cur = dst.get(key)
    if cur is None:
        if value:
            dst[key] = value
        return
    total = cur + value
    if total:
        dst[key] = total
    else:
        del dst[key]


def _act_t(entries: dict, j: int, power: int, dom: ScalarDomain) -> dict:
    out = {}
    slot = j - 1
    d = dom.d
    for idx, c in entries.items():
        r = (idx[slot][1] * power) % d
        out[idx] = c if r == 0 else c * dom.omega(r)
    return out


def _act_g(entries: dict, i: int, dom: ScalarDomain) -> dict:
    out: dict = {}
    p, q = i - 1, i
    u, um = dom.u, dom.u_minus
    for idx, c in entries.items():
        (a, r), (b, s) = idx[p], idx[q]
        swapped = idx[:p] + (idx[q], idx[p]) + idx[q + 1:]
        if r != s or a < b:
            _accumulate(out, swapped, c)
        elif a == b:
            _accumulate(out, idx, c * u)
        else:
            _accumulate(out, swapped, c)
            _accumulate(out, idx, c * um)
    return out


def _act_b(entries: dict, dom: ScalarDomain) -> dict:
    out: dict = {}
    vm = dom.v_minus
    for idx, c in entries.items():
        a, r = idx[0]
        flipped = ((-a, r),) + idx[1:]
        _accumulate(out, flipped, c)
        if r == 0 and a < 0:
            _accumulate(out, idx, c * vm)
    return out


def _act_e(entries: dict, i: int) -> dict:
    p = i - 1
    return {idx: c for idx, c in entries.items() if idx[p][1] == idx[p + 1][1]}


def _act_f(entries: dict) -> dict:
    return {idx: c for idx, c in entries.items() if idx[0][1] == 0}


def _subtract_scaled(base: dict, other: dict, scalar) -> dict:
    out = dict(base)
    for idx, c in other.items():
        _accumulate(out, idx, -(c * scalar))
    return out


def _act(entries: dict, letter: Letter, n: int, dom: ScalarDomain) -> dict:
    kind, i = letter
    if kind in ("T", "T_inv"):
        if not 1 <= i <= n:
            raise ValueError(f"T_{i} does not act on {n} strands")
        return _act_t(entries, i, 1 if kind == "T" else dom.d - 1, dom)
    if kind in ("G", "G_inv", "E"):
        if not 1 <= i < n:
            raise ValueError(f"{kind}_{i} does not act on {n} strands")
        if kind == "E":
            return _act_e(entries, i)
        image = _act_g(entries, i, dom)
        if kind == "G":
            return image
        return _subtract_scaled(image, _act_e(entries, i), dom.u_minus)
    if kind in ("B", "B_inv", "F"):
        if i != 1:
            raise ValueError("B and F act on strand 1 only")
        if kind == "F":
            return _act_f(entries)
        image = _act_b(entries, dom)
        if kind == "B":
            return image
        return _subtract_scaled(image, _act_f(entries), dom.v_minus)
    raise ValueError(f"unknown letter kind {kind!r}")


def apply_letter(x: TensorVector, letter: Letter, domain: ScalarDomain | None = None) -> TensorVector:
    """Apply one operator letter to a v-basis vector (right action)."""
    if x.basis != "v":
        raise ValueError("operators act on v-basis vectors")
    dom = domain or ScalarDomain(x.d)
    return TensorVector(x.n, x.d, "v", _act(x.entries, Letter(*letter), x.n, dom))


def apply_letters(
    x: TensorVector, letters: Iterable[Letter], domain: ScalarDomain | None = None
) -> TensorVector:
    if x.basis != "v":
        raise ValueError("operators act on v-basis vectors")
    dom = domain or ScalarDomain(x.d)
    entries = x.entries
    for letter in letters:
        entries = _act(entries, Letter(*letter), x.n, dom)
    return TensorVector(x.n, x.d, "v", entries)


def _transform(entries: dict, n: int, dom: ScalarDomain, sign: int) -> dict:
    """Slot-by-slot discrete Fourier transform over the frames.

    ``sign = -1`` maps v-coordinates to u-coordinates (before the 1/d^n
    scaling) and ``sign = +1`` maps back.
    """
    d = dom.d
    current = entries
    for slot in range(n):
        out: dict = {}
        for idx, c in current.items():
            label, r = idx[slot]
            head, tail = idx[:slot], idx[slot + 1:]
            for m in range(d):
                k = (sign * r * m) % d
                _accumulate(out, head + ((label, m),) + tail, c if k == 0 else c * dom.omega(k))
        current = out
    return current


def to_u_basis(x: TensorVector, domain: ScalarDomain | None = None) -> TensorVector:
    """Rewrite a v-basis vector in the u-basis.

    The u-coordinate of (labels, m) is ``d^-n sum_r w^{-r.m}`` times the
    v-coordinate of (labels, r).
    """
    if x.basis == "u":
        return x
    dom = domain or ScalarDomain(x.d)
    raw = _transform(x.entries, x.n, dom, -1)
    scale = dom.inv_d ** x.n
    return TensorVector(x.n, x.d, "u", {idx: c * scale for idx, c in raw.items()})


def from_u_basis(x: TensorVector, domain: ScalarDomain | None = None) -> TensorVector:
    """Rewrite a u-basis vector in the v-basis."""
    if x.basis == "v":
        return x
    dom = domain or ScalarDomain(x.d)
    return TensorVector(x.n, x.d, "v", _transform(x.entries, x.n, dom, +1))


def start_vector(n: int, d: int, domain: ScalarDomain | None = None) -> TensorVector:
    """``u_1^0 (x) ... (x) u_n^0`` written in the v-basis."""
    check_rep_size(n, d)
    dom = domain or ScalarDomain(d)
    one = dom.one
    entries = {
        tuple((k + 1, r) for k, r in enumerate(frames)): one
        for frames in product(range(d), repeat=n)
    }
    return TensorVector(n, d, "v", entries)


def evaluate_letters(
    letters: Sequence[Letter], n: int, d: int, domain: ScalarDomain | None = None
) -> TensorVector:
    """Image of the start vector under a word, returned in the u-basis."""
    dom = domain or ScalarDomain(d)
    x = apply_letters(start_vector(n, d, dom), letters, dom)
    return to_u_basis(x, dom)


def predicted_action(w: SignedPermutation, frames: Sequence[int], d: int) -> TensorIndex:
    """Image of ``v_1^{r_1} (x) ... (x) v_n^{r_n}`` under g_w, a single tensor.

    With w = (m_1, ..., m_n) the result is ``v_{m_1}^{r_{|m_1|}} (x) ... (x)
    v_{m_n}^{r_{|m_n|}}`` with coefficient 1.
    """
    if len(frames) != w.n:
        raise ValueError("need one frame per strand")
    return tuple((m, frames[abs(m) - 1] % d) for m in w.images)


def dump_vector(x: TensorVector) -> str:
    """One line per basis tensor: ``(i_1 r_1 ... i_n r_n) : coefficient``."""
    lines = []
    for idx in sorted(x.entries):
        flat = " ".join(f"{a} {r}" for a, r in idx)
        lines.append(f"({flat}) : {canonical_string(x.entries[idx])}")
    return "\n".join(lines)
