"""Generating sets for Fix(Y), Fix_c(Y) and Fix_c(Y) ∩ IA_n, with checks.

Throughout, Y = {x_{m+1}, ..., x_n}.  Products of generators are written
left to right as map composition, so the rightmost one acts first.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .folding import decompose, recompose
from .free_group import (EndoMap, K, K3, Permutation, S, TypeTwo, _replace, abelianize,
                         commutator, compose, cyclically_reduce, multiply, rho)


# --- named Nielsen generators ------------------------------------------------

@dataclass(frozen=True)
class Gen:
    """A named generator ``kind_indices`` raised to ``power`` (+1 or -1).

    kind is ``rho``, ``K``, ``S`` or ``K3`` (the Magnus map x_i -> x_i[x_j, x_k]).
    """

    kind: str
    indices: tuple
    power: int = 1

    def to_map(self, n: int) -> EndoMap:
        i = self.indices[0]
        if self.kind == "S":
            return S(i, n)
        build = {"rho": rho, "K": K, "K3": K3}[self.kind]
        f = build(*self.indices, n)
        if self.power == 1:
            return f
        # each generator only moves x_i, so the inverse is explicit
        if self.kind == "rho":
            w = (i, -self.indices[1])
        elif self.kind == "K":
            j = self.indices[1]
            w = (-j, i, j)
        else:
            j, k = self.indices[1:]
            w = multiply((i,), commutator((k,), (j,)))
        return _replace(n, i, w)

    def inverse(self) -> "Gen":
        if self.kind == "S":
            return self
        return Gen(self.kind, self.indices, -self.power)

    @property
    def base(self) -> "Gen":
        return Gen(self.kind, self.indices)

    def __str__(self):
        name = f"{self.kind}_{''.join(map(str, self.indices))}"
        return name if self.power == 1 else name + "^-1"


def product(gens: Sequence[Gen], n: int) -> EndoMap:
    if not gens:
        return EndoMap.identity(n)
    return compose(*(g.to_map(n) for g in gens))


# --- generator catalogs ------------------------------------------------------

@dataclass(frozen=True)
class GeneratorCatalog:
    kind: str
    m: int
    n: int
    elements: dict = field(compare=False)

    def __contains__(self, g: Gen) -> bool:
        return str(g.base) in self.elements

    def __iter__(self):
        return iter(self.elements.values())

    def __len__(self):
        return len(self.elements)


def catalog_gens(kind: str, m: int, n: int) -> list[Gen]:
    """A_m, B_m or C_m as named generators."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    A = [Gen("S", (i,)) for i in range(1, m + 1)]
    A += [Gen("rho", (i, j)) for i, j in pairs if i <= m]
    if kind == "A":
        return A
    if kind == "B":
        return A + [Gen("K", (i, j)) for i, j in pairs if i > m]
    if kind == "C":
        out = [Gen("K", p) for p in pairs]
        out += [Gen("K3", (i, j, k)) for i in range(1, m + 1)
                for j in range(1, n + 1) for k in range(1, n + 1) if len({i, j, k}) == 3]
        return out
    raise ValueError(f"unknown catalog {kind!r}; expected A, B or C")


def catalog(kind: str, m: int, n: int) -> GeneratorCatalog:
    gens = catalog_gens(kind, m, n)
    return GeneratorCatalog(kind, m, n, {str(g): g.to_map(n) for g in gens})


def random_word(gens: Sequence[Gen], length: int, rng: random.Random) -> list[Gen]:
    return [g if rng.random() < 0.5 else g.inverse() for g in
            (rng.choice(gens) for _ in range(length))]


# --- Whitehead to Nielsen ----------------------------------------------------

def _left_mult(k: int, a: int) -> list[Gen]:
    """x_k -> a x_k, written as S_k rho_{k|a|}^{-+1} S_k."""
    j, s = abs(a), (1 if a > 0 else -1)
    return [Gen("S", (k,)), Gen("rho", (k, j), -s), Gen("S", (k,))]


def _swap(i: int, j: int) -> list[Gen]:
    """Exchange x_i and x_j."""
    lam = [Gen("S", (i,)), Gen("rho", (i, j), -1), Gen("S", (i,))]
    return [Gen("rho", (i, j)), Gen("rho", (j, i), -1)] + lam + [Gen("S", (j,))]


def permutation_to_nielsen(P: Permutation) -> list[Gen]:
    n = P.rank
    out: list[Gen] = []
    current = list(range(1, n + 1))  # current[k] = index x_k is sent to so far
    for pos in range(n):
        want = P.sigma[pos]
        at = current.index(want)
        if at != pos:
            out += _swap(pos + 1, at + 1)
            current[pos], current[at] = current[at], current[pos]
    out += [Gen("S", (i,)) for i, e in enumerate(P.signs, 1) if e == -1]
    return out


def whitehead_to_nielsen(W: TypeTwo | Permutation, n: int, m: int = 0) -> list[Gen]:
    """Write a Whitehead automorphism as a product of rho, K and S.

    For (A, a) each generator is handled separately (the pieces commute).
    Conjugation of x_j is emitted as K_{j|a|} when j > m and otherwise as a
    left and a right multiplication, so that factors fixing Y land in A_m or
    B_m as appropriate.
    """
    if isinstance(W, Permutation):
        return permutation_to_nielsen(W)
    a = W.a
    i, s = abs(a), (1 if a > 0 else -1)
    out: list[Gen] = []
    for j in range(1, n + 1):
        if j == i:
            continue
        left, right = j in W.A, -j in W.A
        if left and right and j > m:
            out.append(Gen("K", (j, i), s))
            continue
        if right:
            out.append(Gen("rho", (j, i), -s))
        if left:
            out += _left_mult(j, a)
    return out


# --- reports -----------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    detail: Any = None

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + \
            ("" if self.ok or self.detail is None else f": {self.detail}")


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: Any = None) -> bool:
        self.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def summary(self) -> str:
        return f"{self.title}: {len(self.checks) - len(self.failures)}/{len(self.checks)} passed"


# --- matrix relators ---------------------------------------------------------

T1 = ("T", 1)


def E(i: int, j: int) -> tuple:
    return ("E", i, j)


@dataclass(frozen=True)
class Relator:
    name: str
    word: tuple  # ((symbol, power), ...)


def _comm(a, b) -> tuple:
    return ((a, 1), (b, 1), (a, -1), (b, -1))


def _sym(x) -> str:
    return "T_1" if x[0] == "T" else f"E_{x[1]}{x[2]}"


def _rel_name(word) -> str:
    return " ".join(_sym(x) + ("" if p == 1 else f"^{p}") for x, p in word)


def _relator(word) -> Relator:
    return Relator(_rel_name(word), tuple(word))


@dataclass(frozen=True)
class RelatorBank:
    m: int
    n: int
    R1: tuple
    R2: tuple
    R3: tuple

    def all(self) -> list[Relator]:
        return list(self.R1) + list(self.R2) + list(self.R3)


def relator_bank(m: int, n: int, loose: bool = False) -> RelatorBank:
    """Relators of the presentation of G_m in T_1 and the E_ij.

    The commutation relator [E_ij, E_kl] is listed for j != k and i != l,
    and the trivial conjugation E_ij E_kl E_ij^-1 = E_kl for i != l.
    ``loose=True`` uses the looser ranges (i != k, j != l) and (i != k)
    instead, under which some listed words are not relators.
    """
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    lower = [E(i, j) for i in range(m + 1, n + 1) for j in range(1, m + 1)]
    R1 = [_relator(_comm(a, b)) for a, b in itertools.combinations(lower, 2)]

    R2 = [_relator(((T1, 2),))]
    if m >= 2:
        e12, e21 = E(1, 2), E(2, 1)
        R2.append(_relator(((e12, 1), (e21, -1), (e12, 1)) * 4))
        R2.append(_relator(((e12, 1), (e21, -1), (e12, 1), (e21, 1), (e12, -1), (e21, 1))))
        upper = [(i, j) for i in range(1, m + 1) for j in range(1, m + 1) if i != j]
        for (i, j), (k, l) in itertools.product(upper, repeat=2):
            if (i, j) == (k, l):
                continue
            if (i != k and j != l) if loose else (j != k and i != l):
                R2.append(_relator(_comm(E(i, j), E(k, l))))
        for i, j, k in itertools.permutations(range(1, m + 1), 3):
            R2.append(_relator(_comm(E(i, j), E(j, k)) + ((E(i, k), -1),)))
        for i, j in upper:
            if i != 1 and j != 1:
                R2.append(_relator(_comm(T1, E(i, j))))
            else:
                R2.append(_relator(((T1, 1), (E(i, j), 1), (T1, 1), (E(i, j), 1))))

    R3 = []
    upper = [(i, j) for i in range(1, m + 1) for j in range(1, m + 1) if i != j]
    for (i, j), (k, l) in itertools.product(upper, [(k, l) for k, l in
                                                    (x[1:] for x in lower)]):
        lhs = ((E(i, j), 1), (E(k, l), 1), (E(i, j), -1))
        if (i != k) if loose else (i != l):
            R3.append(_relator(lhs + ((E(k, l), -1),)))
        if i == l and len({i, j, k}) == 3:
            # E_ij E_kl E_ij^-1 = E_kj^-1 E_kl
            R3.append(_relator(lhs + ((E(k, l), -1), (E(k, j), 1))))
    for k, l in (x[1:] for x in lower):
        conj = ((T1, 1), (E(k, l), 1), (T1, 1))
        if k != 1 and l != 1:
            R3.append(_relator(conj + ((E(k, l), -1),)))
        else:
            R3.append(_relator(conj + ((E(k, l), 1),)))
    return RelatorBank(m, n, tuple(R1), tuple(R2), tuple(R3))


def symbol_matrix(x, n: int) -> np.ndarray:
    M = np.eye(n, dtype=np.int64)
    if x[0] == "T":
        M[x[1] - 1, x[1] - 1] = -1
    else:
        M[x[1] - 1, x[2] - 1] = 1
    return M


def _inverse_matrix(x, n: int) -> np.ndarray:
    M = symbol_matrix(x, n)
    if x[0] == "E":
        M[x[1] - 1, x[2] - 1] = -1
    return M


def evaluate(word: Iterable, n: int) -> np.ndarray:
    out = np.eye(n, dtype=np.int64)
    for x, p in word:
        step = symbol_matrix(x, n) if p > 0 else _inverse_matrix(x, n)
        for _ in range(abs(p)):
            out = out @ step
    return out


def verify_relators_matrix(m: int, n: int, loose: bool = False) -> Report:
    bank = relator_bank(m, n, loose)
    report = Report(f"relators m={m} n={n}")
    I = np.eye(n, dtype=np.int64)
    for family, rels in (("R1", bank.R1), ("R2", bank.R2), ("R3", bank.R3)):
        for r in rels:
            M = evaluate(r.word, n)
            ok = np.array_equal(M, I)
            report.add(f"{family}: {r.name}", ok, None if ok else M.tolist())
    return report


def in_G_m(M: np.ndarray, m: int) -> bool:
    """Block shape (A 0; B I) with A invertible over Z."""
    n = M.shape[0]
    if np.any(M[:m, m:] != 0) or not np.array_equal(M[m:, m:], np.eye(n - m, dtype=M.dtype)):
        return False
    return abs(round(np.linalg.det(M[:m, :m]))) == 1 if m else True


# --- word identities ---------------------------------------------------------

def _g(kind, *idx, power=1):
    return Gen(kind, idx, power)


def identity_bank(n: int) -> list[tuple[str, list[Gen], list[Gen]]]:
    """Word identities used to shrink and normalise the Magnus generating set."""
    out = []
    for i in range(2, n + 1):
        s1 = _g("S", 1)
        rhs = [s1, _g("rho", 1, i), _g("rho", i, 1, power=-1), s1, _g("rho", 1, i, power=-1),
               s1, _g("rho", 1, i), s1, _g("rho", i, 1), _g("rho", 1, i, power=-1), s1]
        out.append((f"S_{i} elimination", [_g("S", i)], rhs))
    for p, q, k in itertools.permutations(range(1, n + 1), 3):
        lhs = [_g("rho", p, k), _g("K3", k, p, q), _g("rho", p, k, power=-1)]
        rhs = [_g("K", q, k), _g("K", q, p), _g("K", p, q), _g("K3", p, q, k), _g("K", k, p),
               _g("K3", k, p, q), _g("K", k, q, power=-1), _g("K", k, p, power=-1),
               _g("K", q, p, power=-1), _g("K", q, k, power=-1)]
        out.append((f"rho_{p}{k} K_{k}{p}{q} rho_{p}{k}^-1 (p,q,k)=({p},{q},{k})", lhs, rhs))
        lhs = [_g("rho", p, k, power=-1), _g("K3", k, p, q), _g("rho", p, k)]
        rhs = [_g("K", q, k, power=-1), _g("K", q, p), _g("K", p, q, power=-1),
               _g("K", q, p, power=-1), _g("K3", k, p, q), _g("K3", p, q, k),
               _g("K", q, k), _g("K", k, q)]
        out.append((f"rho_{p}{k}^-1 K_{k}{p}{q} rho_{p}{k} (p,q,k)=({p},{q},{k})", lhs, rhs))
    return out


def verify_identity_bank(n: int) -> Report:
    report = Report(f"identities n={n}")
    for name, lhs, rhs in identity_bank(n):
        f, g = product(lhs, n), product(rhs, n)
        report.add(name, f == g, None if f == g else {"lhs": str(f), "rhs": str(g)})
    return report


# --- Fix(Y) and Fix_c(Y) -----------------------------------------------------

def in_fixc(f: EndoMap, m: int) -> bool:
    return all(cyclically_reduce(f.images[j - 1])[0] == (j,) for j in range(m + 1, f.rank + 1))


def in_fix(f: EndoMap, m: int) -> bool:
    return all(f.images[j - 1] == (j,) for j in range(m + 1, f.rank + 1))


def in_IA(f: EndoMap) -> bool:
    return np.array_equal(abelianize(f), np.eye(f.rank, dtype=np.int64))


def verify_fix_decomposition(f: EndoMap, m: int) -> Report:
    """Decompose f in Fix_c mode and check every factor against Y and B_m (A_m)."""
    n = f.rank
    report = Report(f"Fix_c decomposition m={m} n={n}")
    if not report.add("input lies in Fix_c(Y)", in_fixc(f, m), str(f)):
        return report
    pointwise = in_fix(f, m)
    d = decompose(f, fixc=m)
    report.add("recomposition equals input", recompose(d) == f)
    gens = catalog("A" if pointwise else "B", m, n)
    pieces = list(d.factors) + [d.head]
    for k, W in enumerate(pieces):
        label = "head" if W is d.head else f"factor {k + 1}"
        Wm = W.to_map(n)
        report.add(f"{label} {W} in Fix_c(Y)", in_fixc(Wm, m))
        if pointwise:
            report.add(f"{label} {W} in Fix(Y)", in_fix(Wm, m))
        word = whitehead_to_nielsen(W, n, m)
        bad = [str(g) for g in word if g not in gens]
        report.add(f"{label} refines into {gens.kind}_{m}", not bad, bad or None)
        report.add(f"{label} refinement recomposes", product(word, n) == Wm)
    return report
