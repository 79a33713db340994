"""Exact Schubert calculus on the Grassmannian of r-planes in C^m.

Classes are indexed by partitions fitting in a ``rows x cols`` box, where
``rows = r`` and ``cols = m - r``.  Products use the Littlewood-Richardson
rule (counting lattice-word fillings of skew shapes); special classes also
have a direct Pieri implementation, and the two are cross-checked in tests.
All coefficients are Python integers.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "BoxShape",
    "Partition",
    "ClassSum",
    "pieri_multiply",
    "multiply",
    "power",
    "degree",
    "degree_formula",
    "flag_dims_to_partition",
    "witness_cycle_signatures",
    "witness_cycle_class",
]


@dataclass(frozen=True)
class BoxShape:
    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"box dimensions must be positive, got {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def full(self) -> "Partition":
        return Partition((self.cols,) * self.rows, self)


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]
    box: BoxShape

    def __init__(self, parts: Iterable[int], box: BoxShape) -> None:
        p = [int(x) for x in parts]
        if any(x < 0 for x in p):
            raise ValueError(f"negative part in {p}")
        if any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"parts must be weakly decreasing: {p}")
        while p and p[-1] == 0:
            p.pop()
        if len(p) > box.rows or (p and p[0] > box.cols):
            raise ValueError(f"{tuple(p)} does not fit a {box.rows}x{box.cols} box")
        object.__setattr__(self, "parts", tuple(p))
        object.__setattr__(self, "box", box)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def padded(self) -> tuple[int, ...]:
        return self.parts + (0,) * (self.box.rows - len(self.parts))

    def complement(self) -> "Partition":
        """The partition obtained by rotating the box complement by 180 degrees."""
        c = self.box.cols
        return Partition(tuple(c - x for x in reversed(self.padded())), self.box)

    def label(self) -> str:
        return "(" + ",".join(str(x) for x in self.parts) + ")"

    def __str__(self) -> str:
        return "s" + ("".join(map(str, self.parts)) if self.parts else "0")


class ClassSum(Mapping[Partition, int]):
    """Integer combination of Schubert classes sharing one box.

    Zero coefficients are never stored, so equality is plain dict equality.
    """

    __slots__ = ("box", "_terms")

    def __init__(self, box: BoxShape, terms: Mapping[Partition, int] | Iterable[tuple[Partition, int]] = ()):
        acc: Counter[Partition] = Counter()
        items = terms.items() if isinstance(terms, Mapping) else terms
        for lam, c in items:
            if lam.box != box:
                raise ValueError(f"partition {lam} belongs to box {lam.box}, not {box}")
            acc[lam] += int(c)
        self.box = box
        self._terms = {lam: c for lam, c in acc.items() if c != 0}

    @classmethod
    def schubert(cls, parts: Sequence[int], box: BoxShape) -> "ClassSum":
        return cls(box, {Partition(parts, box): 1})

    @classmethod
    def one(cls, box: BoxShape) -> "ClassSum":
        return cls.schubert((), box)

    def __getitem__(self, lam: Partition) -> int:
        return self._terms.get(lam, 0)

    def __iter__(self) -> Iterator[Partition]:
        return iter(sorted(self._terms, key=lambda p: (-p.size, tuple(-x for x in p.parts))))

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassSum):
            return NotImplemented
        return self.box == other.box and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.box, frozenset(self._terms.items())))

    def _check(self, other: "ClassSum") -> None:
        if self.box != other.box:
            raise ValueError(f"box mismatch: {self.box} vs {other.box}")

    def __add__(self, other: "ClassSum") -> "ClassSum":
        self._check(other)
        return ClassSum(self.box, list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other: "ClassSum") -> "ClassSum":
        return self + (-1) * other

    def __rmul__(self, k: int) -> "ClassSum":
        return ClassSum(self.box, {lam: k * c for lam, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, ClassSum):
            return multiply(self, other)
        return other * self

    def __pow__(self, n: int) -> "ClassSum":
        return power(self, n)

    def coefficient(self, parts: Sequence[int]) -> int:
        return self[Partition(parts, self.box)]

    def as_dict(self) -> dict[str, int]:
        return {lam.label(): self[lam] for lam in self}

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*{lam}" if c != 1 else str(lam) for lam, c in ((l, self[l]) for l in self))


def _horizontal_strips(shape: tuple[int, ...], p: int, box: BoxShape) -> Iterator[tuple[int, ...]]:
    """Shapes nu inside ``box`` with nu/shape a horizontal strip of size p."""
    base = shape + (0,) * (box.rows - len(shape))

    def rec(i: int, left: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
        if i == box.rows:
            if left == 0:
                yield tuple(acc)
            return
        upper = box.cols if i == 0 else base[i - 1]
        for add in range(min(left, upper - base[i]), -1, -1):
            acc.append(base[i] + add)
            yield from rec(i + 1, left - add, acc)
            acc.pop()

    yield from rec(0, p, [])


def pieri_multiply(lam: Partition, p: int) -> ClassSum:
    """sigma_lam * sigma_p via Pieri's rule; every coefficient is 0 or 1."""
    if p <= 0:
        raise ValueError(f"special class index must be positive, got {p}")
    box = lam.box
    return ClassSum(box, [(Partition(nu, box), 1) for nu in _horizontal_strips(lam.parts, p, box)])


def _is_lattice(word: list[int]) -> bool:
    seen: Counter[int] = Counter()
    for k in word:
        seen[k] += 1
        if k > 1 and seen[k] > seen[k - 1]:
            return False
    return True


def _lr_products(lam: Partition, mu: Partition) -> Counter[tuple[int, ...]]:
    """Littlewood-Richardson expansion of sigma_lam * sigma_mu inside the box.

    Labels 1..len(mu) are placed row by row of mu as horizontal strips; a
    filling counts when its reverse reading word is a lattice word.
    """
    box = lam.box
    out: Counter[tuple[int, ...]] = Counter()
    mparts = mu.parts

    def rec(k: int, shape: tuple[int, ...], rows: tuple[tuple[int, ...], ...]) -> None:
        if k == len(mparts):
            word = [lab for row in rows for lab in reversed(row)]
            if _is_lattice(word):
                out[tuple(x for x in shape if x)] += 1
            return
        padded = shape + (0,) * (box.rows - len(shape))
        for nu in _horizontal_strips(shape, mparts[k], box):
            new_rows = tuple(row + (k + 1,) * (nu[i] - padded[i]) for i, row in enumerate(rows))
            # prune: lattice property fails early if a prefix already breaks it
            partial = [lab for row in new_rows for lab in reversed(row)]
            if _is_lattice(partial):
                rec(k + 1, nu, new_rows)

    rec(0, lam.padded(), tuple(() for _ in range(box.rows)))
    return out


def multiply(alpha: ClassSum, beta: ClassSum) -> ClassSum:
    """Product in the cohomology ring of the Grassmannian, truncated to the box."""
    alpha._check(beta)
    box = alpha.box
    acc: Counter[Partition] = Counter()
    for lam, a in alpha.items():
        for mu, b in beta.items():
            for nu, c in _lr_products(lam, mu).items():
                acc[Partition(nu, box)] += a * b * c
    return ClassSum(box, acc)


def power(alpha: ClassSum, n: int) -> ClassSum:
    if n < 0:
        raise ValueError("negative power")
    result = ClassSum.one(alpha.box)
    for _ in range(n):
        result = multiply(result, alpha)
    return result


def degree(box: BoxShape) -> int:
    """Degree of the Grassmannian in its Pluecker embedding.

    Computed as the coefficient of the full box in sigma_1^(rows*cols) by
    repeated Pieri steps.
    """
    current = ClassSum.one(box)
    for _ in range(box.size):
        acc: Counter[Partition] = Counter()
        for lam, c in current.items():
            for nu in pieri_multiply(lam, 1):
                acc[nu] += c
        current = ClassSum(box, acc)
    return current[box.full()]


def degree_formula(box: BoxShape) -> int:
    """Closed form (rc)! * prod_{i<r} i! / (c+i)!."""
    r, c = box.rows, box.cols
    num = math.factorial(r * c) * math.prod(math.factorial(i) for i in range(r))
    den = math.prod(math.factorial(c + i) for i in range(r))
    q, rem = divmod(num, den)
    assert rem == 0
    return q


def flag_dims_to_partition(a: Sequence[int], n: int, k: int) -> Partition:
    """Partition of the Schubert variety {H : dim(H & A_i) >= i} of k-planes in P^n.

    ``a`` lists the projective dimensions of the flag A_0 < ... < A_k.
    """
    a = tuple(int(x) for x in a)
    if len(a) != k + 1:
        raise ValueError(f"expected {k + 1} flag dimensions, got {len(a)}")
    if any(x >= y for x, y in zip(a, a[1:])):
        raise ValueError(f"flag dimensions must be strictly increasing: {a}")
    if a[0] < 0 or a[-1] > n:
        raise ValueError(f"flag dimensions must lie in [0, {n}]: {a}")
    parts = sorted(((n - k + i) - ai for i, ai in enumerate(a)), reverse=True)
    return Partition(parts, BoxShape(k + 1, n - k))


def fill_inessential(sig: Sequence[int | None], n: int, k: int) -> tuple[int, ...]:
    """Complete a condition signature where omitted entries (None, or missing
    trailing entries) are inessential: a hyperplane in the next space, or P^n."""
    sig = list(sig) + [None] * (k + 1 - len(sig))
    out: list[int] = [0] * (k + 1)
    nxt = n + 1
    for i in range(k, -1, -1):
        out[i] = nxt - 1 if sig[i] is None else int(sig[i])
        nxt = out[i]
    return tuple(out)


# Eight components of the limit cycle for planes meeting four planes in P^5,
# as projective dimensions of (A_0, A_1, A_2); None marks an omitted condition.
# point p: 0, lines mu_i, lambda: 1, planes nu, N: 2, 3-planes M_i, L: 3, hyperplane: 4
_WITNESS_SIGNATURES: tuple[tuple[str, tuple[int | None, ...]], ...] = (
    ("Omega(mu1,.,Lambda)", (1, None, 4)),
    ("Omega(p,M2)", (0, 3)),
    ("Omega(mu2,.,Lambda)", (1, None, 4)),
    ("Omega(p,M1)", (0, 3)),
    ("Omega(.,nu)", (None, 2)),
    ("Omega(p,L)", (0, 3)),
    ("Omega(lambda,.,Lambda)", (1, None, 4)),
    ("Omega(.,N)", (None, 2)),
)


def witness_cycle_signatures() -> list[tuple[str, tuple[int, ...]]]:
    return [(name, fill_inessential(sig, 5, 2)) for name, sig in _WITNESS_SIGNATURES]


def witness_cycle_class() -> ClassSum:
    box = BoxShape(3, 3)
    return ClassSum(box, [(flag_dims_to_partition(dims, 5, 2), 1) for _, dims in witness_cycle_signatures()])
