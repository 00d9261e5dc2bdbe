"""
Positively based rings and their based modules.

A :class:`BasedRing` is a structure-constant tensor ``N[i, j, k]`` over a
fixed basis whose entry 0 is the unit; a :class:`BasedModule` assigns a
nonnegative integer matrix to every basis element. Everything here is a
decategorified shadow: enumerated modules are candidate action matrices,
not 2-representations.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cells import (CellDecomposition, _components, _reachability, h_cell,
                    is_regular)
from .coxeter import CoxeterSystem, build_system
from .hecke import KLTable, build_kl_table, left_products

__all__ = [
    "BasedRing", "BasedModule", "BasisCells", "EnumerationResult",
    "basis_cells", "cell_quotient_ring", "small_quotient_ring",
    "dihedral_small_quotient_ring", "quadratic_ring", "trivial_ring",
    "special_value", "special_eigenvalue", "spectral_radius", "is_special",
    "enumerate_transitive_modules", "QuotientError", "nice_reduced_ring",
]

log = logging.getLogger(__name__)

SPECIAL_RTOL = 1e-9


class QuotientError(ValueError):
    pass


@dataclass(eq=False)
class BasedRing:
    """b_i * b_j = sum_k N[i, j, k] b_k with b_0 the unit."""
    labels: list[str]
    structure: np.ndarray

    def __post_init__(self):
        self.structure = np.asarray(self.structure, dtype=np.int64)
        n = len(self.labels)
        if self.structure.shape != (n, n, n):
            raise ValueError(f"structure tensor has shape {self.structure.shape}, "
                             f"expected {(n, n, n)}")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def product(self, i: int, j: int) -> dict[str, int]:
        return {self.labels[k]: int(c) for k, c in enumerate(self.structure[i, j]) if c}

    def left_matrix(self, i: int) -> np.ndarray:
        """Matrix of b_i on the regular module: column j is b_i * b_j."""
        return self.structure[i].T.copy()

    def check(self):
        """Raise ValueError unless unital, associative and nonnegative."""
        N = self.structure
        n = self.rank
        eye = np.eye(n, dtype=np.int64)
        if not (np.array_equal(N[0], eye) and np.array_equal(N[:, 0, :], eye)):
            raise ValueError("basis element 0 is not a unit")
        if (N < 0).any():
            raise ValueError("negative structure constant")
        # (b_i b_j) b_k = b_i (b_j b_k)
        lhs = np.einsum("ijm,mkl->ijkl", N, N)
        rhs = np.einsum("jkm,iml->ijkl", N, N)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, k, l = bad[0]
            raise ValueError(f"not associative at ({self.labels[i]}, {self.labels[j]}, "
                             f"{self.labels[k]}) coefficient of {self.labels[l]}")
        return self

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "tensor": self.structure.tolist()}

    def __eq__(self, other):
        return (isinstance(other, BasedRing) and self.labels == other.labels
                and np.array_equal(self.structure, other.structure))


@dataclass(eq=False)
class BasedModule:
    """Nonnegative integer action matrices, one per basis element of ``ring``."""
    ring: BasedRing
    matrices: list[np.ndarray]

    @property
    def rank(self) -> int:
        return self.matrices[0].shape[0]

    def sum_matrix(self) -> np.ndarray:
        return np.sum(self.matrices, axis=0)

    def is_transitive(self) -> bool:
        return bool((self.sum_matrix() > 0).all())

    def check(self):
        n = self.rank
        M = self.matrices
        if not np.array_equal(M[0], np.eye(n, dtype=np.int64)):
            raise ValueError("unit does not act by the identity")
        if any((m < 0).any() for m in M):
            raise ValueError("negative action entry")
        N = self.ring.structure
        stack = np.array(M)
        for i in range(self.ring.rank):
            for j in range(self.ring.rank):
                rhs = np.tensordot(N[i, j], stack, axes=1)
                if not np.array_equal(M[i] @ M[j], rhs):
                    raise ValueError(f"action fails on {self.ring.labels[i]} * "
                                     f"{self.ring.labels[j]}")
        return self

    def transpose(self) -> "BasedModule":
        return BasedModule(self.ring, [m.T.copy() for m in self.matrices])

    def to_json(self) -> dict:
        return {"rank": self.rank, "matrices": [m.tolist() for m in self.matrices]}


# -- small constructors -------------------------------------------------------

def trivial_ring() -> BasedRing:
    return BasedRing(["1"], np.ones((1, 1, 1), dtype=np.int64))


def quadratic_ring(a: int) -> BasedRing:
    """Basis {1, x} with x^2 = 1 + a x."""
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0] = np.eye(2, dtype=np.int64)
    N[1, 0, 1] = 1
    N[1, 1] = [1, a]
    return BasedRing(["1", "x"], N)


# -- cells on a basis ------------------------------------------------------------

@dataclass
class BasisCells:
    """Cells of a based ring; ``*_of[i]`` is the cell id of basis element i."""
    left_of: np.ndarray
    right_of: np.ndarray
    two_sided_of: np.ndarray
    left_cells: list[list[int]]
    right_cells: list[list[int]]
    two_sided_cells: list[list[int]]
    two_sided_reach: list[int] = field(repr=False)

    def two_sided_leq(self, i, j) -> bool:
        return bool(self.two_sided_reach[i] >> j & 1)

    def top_cells(self) -> list[int]:
        """Maximal two-sided cells."""
        k = len(self.two_sided_cells)
        return [i for i in range(k)
                if not any(j != i and self.two_sided_leq(i, j) for j in range(k))]


def basis_cells(ring: BasedRing) -> BasisCells:
    """b_i <=_L b_j iff some b_s b_i has a nonzero coefficient at b_j."""
    N = ring.structure
    n = ring.rank
    s, i, j = np.nonzero(N)
    # left: i -> j via b_s b_i ; right: b_i b_s, i.e. N[i, s, j]
    left_src, left_dst = i, j
    right_src, right_dst = s, j
    lo, lb, _ = _components(n, left_src, left_dst)
    ro, rb, _ = _components(n, right_src, right_dst)
    to, tb, tsucc = _components(n, np.concatenate([left_src, right_src]),
                                np.concatenate([left_dst, right_dst]))
    return BasisCells(lo, ro, to, lb, rb, tb, _reachability(tsucc))


# -- rings from Hecke algebra data -----------------------------------------------

def _ring_on(system: CoxeterSystem, table: KLTable, dec: CellDecomposition,
             basis: list[int], J: int, keep: set[int]) -> BasedRing:
    """
    v = 1 structure constants on {e} u basis, keeping only terms in ``keep``;
    terms in J outside ``keep`` are an error, terms in higher cells are dropped.
    """
    W = system
    basis = [x for x in basis if x != 0]
    idx = {0: 0}
    idx.update({x: k + 1 for k, x in enumerate(basis)})
    n = len(idx)
    N = np.zeros((n, n, n), dtype=np.int64)
    N[0] = np.eye(n, dtype=np.int64)
    N[:, 0, :] = np.eye(n, dtype=np.int64)
    if basis:
        prods = left_products(table, basis, basis)
        for x in basis:
            for y in basis:
                for z, h in prods.expansion(x, y).items():
                    if z in keep:
                        N[idx[x], idx[y], idx[z]] = h(1)
                        continue
                    Jz = int(dec.two_sided_of[z])
                    if Jz == J:
                        raise QuotientError(
                            f"H not closed under quotient product: C_{W.label(x)} C_{W.label(y)} "
                            f"has C_{W.label(z)} in the cell but outside the basis")
                    if not dec.two_sided_leq(J, Jz):
                        raise QuotientError(f"C_{W.label(z)} lies in a cell not above the "
                                            "product's cell")
    return BasedRing(["e"] + [W.label(x) for x in basis], N)


def cell_quotient_ring(system: CoxeterSystem, table: KLTable, dec: CellDecomposition,
                       L: int) -> BasedRing:
    """
    Ring on {unit} u H for H = L meet L^-1: constants h_{x,y,z}(1) with z in H,
    terms from cells above the cell of L truncated.
    """
    J = int(dec.two_sided_of[dec.left_cells[L][0]])
    if not is_regular(dec, J):
        raise QuotientError(f"two-sided cell {J} is not regular")
    H = h_cell(dec, L)
    return _ring_on(system, table, dec, H, J, set(H)).check()


def small_quotient_ring(system: CoxeterSystem, table: KLTable,
                        dec: CellDecomposition) -> BasedRing:
    """Ring on {e} u J where J is the two-sided cell of the simple reflections."""
    s = system.generators[0]
    J = int(dec.two_sided_of[s])
    cell = dec.two_sided_cells[J]
    return _ring_on(system, table, dec, cell, J, set(cell)).check()


def nice_reduced_ring(system: CoxeterSystem, table: KLTable, dec: CellDecomposition,
                      L: int) -> tuple[BasedRing, dict]:
    """
    Rank-two ring {1, x}, x^2 = 1 + a x, behind an H-cell H = {w'_0, w} whose
    first element is a parabolic longest element.

    With l defined by b_{w'_0}^2 = l b_{w'_0}, the rescaled elements
    b_{w'_0}/l and b_w/l satisfy those relations; a based module of the
    reduced ring is a module of the H-cell ring in which w'_0 acts by l times
    the identity. Returns the ring and ``{"l", "a", "longest", "other"}``.
    """
    from .cells import parabolic_longest_elements
    H = h_cell(dec, L)
    longest = set(parabolic_longest_elements(system))
    tops = [x for x in H if x in longest]
    if len(H) != 2 or len(tops) != 1:
        raise QuotientError("reduction needs |H| = 2 with exactly one parabolic "
                            "longest element")
    ring = cell_quotient_ring(system, table, dec, L)
    p = 1 + H.index(tops[0])
    w = 3 - p
    N = ring.structure
    l = int(N[p, p, p])
    ok = (N[p, p, w] == 0 and N[p, w, p] == 0 and N[p, w, w] == l
          and N[w, p, w] == l and N[w, w, p] == l and N[w, w, w] % l == 0)
    if not ok:
        raise QuotientError(f"H-cell ring {ring.labels} does not rescale to a rank-two ring")
    a = int(N[w, w, w]) // l
    info = {"l": l, "a": a, "longest": ring.labels[p], "other": ring.labels[w]}
    return quadratic_ring(a), info


def _dihedral_formula_ring(n: int, W: CoxeterSystem) -> BasedRing:
    """Small quotient of I2(n) from the explicit theta_s theta_w rules, by induction."""
    w0 = W.w0
    basis = [x for x in range(W.order) if x != w0]
    idx = {x: k for k, x in enumerate(basis)}
    size = len(basis)

    def gen_times(s: int, w: int) -> dict[int, int]:
        t = 1 - s
        if w == 0:
            return {int(W.left[0, s]): 1}
        if w == W.left[0, t]:
            return {int(W.left[w, s]): 1}
        sw, tw = int(W.left[w, s]), int(W.left[w, t])
        if W.lengths[sw] < W.lengths[w]:
            return {w: 2}
        if sw == w0:
            return {tw: 1}
        return {sw: 1, tw: 1}

    def gen_times_vec(s, vec):
        out = np.zeros(size, dtype=np.int64)
        for k in np.nonzero(vec)[0]:
            for z, c in gen_times(s, basis[k]).items():
                out[idx[z]] += c * vec[k]
        return out

    N = np.zeros((size, size, size), dtype=np.int64)
    for y in basis:
        start = np.zeros(size, dtype=np.int64)
        start[idx[y]] = 1
        memo = {0: start}
        for x in sorted(basis, key=lambda x: W.lengths[x])[1:]:
            s = W.words[x][0]
            xp = int(W.left[x, s])
            # theta_x = theta_s theta_x' - [x' != t] theta_{t x'}
            vec = gen_times_vec(s, memo[xp])
            if W.lengths[xp] > 1:
                vec = vec - memo[int(W.left[xp, 1 - s])]
            memo[x] = vec
        for x in basis:
            N[idx[x], idx[y]] = memo[x]
    labels = [W.label(x) for x in basis]
    return BasedRing(labels, N)


def dihedral_small_quotient_ring(n: int, method: str = "auto") -> BasedRing:
    """
    Small quotient ring of I2(n): basis {e} u (W minus {e, w0}).

    ``method="formula"`` uses the explicit generator rules extended by
    induction, ``"hecke"`` the KL structure constants with C_{w0} dropped;
    ``"auto"`` picks the formula for odd n and the Hecke data for even n.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    W = build_system(f"I2({n})")
    if method == "auto":
        method = "formula" if n % 2 else "hecke"
    if method == "formula":
        return _dihedral_formula_ring(n, W).check()
    if method == "hecke":
        from .cells import compute_cells
        table = build_kl_table(W)
        dec = compute_cells(W, table)
        return small_quotient_ring(W, table, dec)
    raise ValueError(f"unknown method {method!r}")


# -- spectral data -------------------------------------------------------------

def spectral_radius(matrix: np.ndarray, tol: float = 1e-13, max_iter: int = 200000) -> float:
    """
    Perron-Frobenius root of a nonnegative matrix by power iteration on
    M + I from the all-ones vector (the shift makes imprimitive cases converge).
    """
    M = np.asarray(matrix, dtype=float)
    n = M.shape[0]
    A = M + np.eye(n)
    x = np.ones(n)
    lam = 0.0
    for _ in range(max_iter):
        y = A @ x
        new = np.linalg.norm(y) / np.linalg.norm(x)
        x = y / np.linalg.norm(y)
        if abs(new - lam) <= tol * max(1.0, new):
            lam = new
            break
        lam = new
    return lam - 1.0


def _pf_vectors(M):
    vals, right = np.linalg.eig(M)
    k = int(np.argmax(vals.real))
    vals_l, left = np.linalg.eig(M.T)
    kl = int(np.argmax(vals_l.real))
    return np.abs(right[:, k].real), np.abs(left[:, kl].real)


def special_value(ring: BasedRing) -> float:
    """Spectral radius of the sum of all basis elements on the regular module."""
    S = sum(ring.left_matrix(i) for i in range(ring.rank))
    return spectral_radius(S)


def special_eigenvalue(ring: BasedRing, i: int) -> float:
    """
    Scalar by which b_i acts on the Perron-Frobenius line of the regular
    module (exact for commutative rings; a Rayleigh quotient otherwise).
    """
    S = sum(ring.left_matrix(k) for k in range(ring.rank)).astype(float)
    u, w = _pf_vectors(S)
    return float(w @ ring.left_matrix(i) @ u / (w @ u))


def is_special(module: BasedModule) -> bool:
    """Does the module's sum matrix reach the ring's special value?"""
    a = spectral_radius(module.sum_matrix())
    b = special_value(module.ring)
    return abs(a - b) <= SPECIAL_RTOL * max(abs(a), abs(b), 1.0)


# -- enumeration of transitive based modules ------------------------------------

@dataclass
class EnumerationResult:
    """Transitive based modules up to permutation of the module basis."""
    ring: BasedRing
    max_rank: int
    entry_bound: int
    modules: list[BasedModule]
    # some accepted module touches the entry bound, so larger entries may be missing
    hit_bound: bool = False
    generators: list[int] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.hit_bound

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "max_rank": self.max_rank,
            "entry_bound": self.entry_bound,
            "complete": self.complete,
            "note": "decategorified candidates",
            "modules": [m.to_json() for m in self.modules],
        }


def _derivation_plan(N: np.ndarray):
    """
    Choose generators and, for every other basis element k, a product
    b_i b_j from which M_k = (M_i M_j - sum_{k' != k} N_ijk' M_k') / N_ijk.
    """
    n = N.shape[0]
    known = {0}
    gens: list[int] = []
    plan: list[tuple[int, int, int]] = []
    while len(known) < n:
        progress = True
        while progress:
            progress = False
            for i, j in itertools.product(sorted(known), repeat=2):
                support = set(np.nonzero(N[i, j])[0].tolist())
                unknown = support - known
                if len(unknown) == 1:
                    k = unknown.pop()
                    plan.append((i, j, k))
                    known.add(k)
                    progress = True
        if len(known) < n:
            g = min(set(range(n)) - known)
            gens.append(g)
            known.add(g)
    return gens, plan


def _canonical(mats: list[np.ndarray]) -> tuple:
    """Least flattened tuple over basis permutations respecting vertex invariants."""
    k = mats[0].shape[0]
    inv = []
    for v in range(k):
        inv.append(tuple(x for m in mats for x in (m[v, v], m[v].sum(), m[:, v].sum())))
    classes: dict[tuple, list[int]] = {}
    for v in range(k):
        classes.setdefault(inv[v], []).append(v)
    keys = sorted(classes)
    best = best_perm = None
    for choice in itertools.product(*(itertools.permutations(classes[key]) for key in keys)):
        perm = [v for block in choice for v in block]
        cand = tuple(int(x) for m in mats for x in m[np.ix_(perm, perm)].ravel())
        if best is None or cand < best:
            best, best_perm = cand, perm
    return best, best_perm


def _positions(k):
    for t in range(k):
        for i in range(t):
            yield (t, i)
            yield (i, t)
        yield (t, t)


def enumerate_transitive_modules(ring: BasedRing, max_rank: int,
                                 entry_bound: int | None = None,
                                 require_apex: bool = True) -> EnumerationResult:
    """
    All transitive based modules of rank <= ``max_rank`` with generator entries
    <= ``entry_bound``, one canonical representative per permutation class.

    A module is transitive when the sum of all action matrices is strictly
    positive; with ``require_apex`` every basis element of a top two-sided
    cell of the ring must act by a nonzero matrix.
    """
    ring.check()
    N = ring.structure
    n = ring.rank
    if entry_bound is None:
        entry_bound = math.ceil(special_value(ring)) + 1
    gens, plan = _derivation_plan(N)
    cells = basis_cells(ring)
    apex = sorted({i for c in cells.top_cells() for i in cells.two_sided_cells[c]})
    known_set = {0, *gens}
    # relations among generators whose right-hand side only involves generators
    checkable = [(i, j, np.nonzero(N[i, j])[0]) for i in gens for j in gens
                 if set(np.nonzero(N[i, j])[0].tolist()) <= known_set]

    found: dict[tuple, BasedModule] = {}
    hit = False
    for k in range(1, max_rank + 1):
        # one search step per (entry, generator) so that relations prune as
        # soon as the entries they involve are known
        steps = [(a, b, g) for a, b in _positions(k) for g in gens]
        # plain lists: the partial checks run on tiny matrices where numpy
        # call overhead dominates
        mats = {0: [[int(r == c) for c in range(k)] for r in range(k)]}
        assigned = {0: [[True] * k for _ in range(k)]}
        for g in gens:
            mats[g] = [[0] * k for _ in range(k)]
            assigned[g] = [[False] * k for _ in range(k)]
        relevant = {g: [(i, j, [(int(m), int(N[i, j, m])) for m in sup],
                         g in sup.tolist())
                        for i, j, sup in checkable if g in (i, j) or g in sup.tolist()]
                    for g in gens}
        touched = {(a, b): sorted({(a, c) for c in range(k)} | {(r, b) for r in range(k)})
                   for a in range(k) for b in range(k)}

        def consistent(a, b, g):
            """0 if no relation is violated yet, 1 if v fails, 2 if every larger v fails too."""
            for i, j, support, g_on_right in relevant[g]:
                Mi, Mj, Ai, Aj = mats[i], mats[j], assigned[i], assigned[j]
                for r, c in touched[a, b]:
                    if not all(assigned[m][r][c] for m, _ in support):
                        continue
                    lhs, full = 0, True
                    for l in range(k):
                        if Ai[r][l] and Aj[l][c]:
                            lhs += Mi[r][l] * Mj[l][c]
                        else:
                            full = False
                    rhs = sum(coef * mats[m][r][c] for m, coef in support)
                    if lhs > rhs:
                        # lhs never decreases in v; rhs is constant unless g occurs in it
                        return 1 if g_on_right else 2
                    if full and lhs != rhs:
                        return 1
            return 0

        def finish():
            nonlocal hit
            full = {g: np.array(m, dtype=np.int64) for g, m in mats.items()}
            for i, j, kk in plan:
                rest = full[i] @ full[j] - sum(N[i, j, m] * full[m] for m in full
                                               if m != kk and N[i, j, m])
                q, r = np.divmod(rest, N[i, j, kk])
                if r.any() or (q < 0).any():
                    return
                full[kk] = q
            module = BasedModule(ring, [full[i].copy() for i in range(n)])
            try:
                module.check()
            except ValueError:
                return
            if not module.is_transitive():
                return
            if require_apex and any(not module.matrices[i].any() for i in apex):
                return
            form, perm = _canonical(module.matrices[1:] or module.matrices)
            key = (k, form)
            if key not in found:
                found[key] = BasedModule(
                    ring, [m[np.ix_(perm, perm)].copy() for m in module.matrices])
                if any(int(module.matrices[g].max()) >= entry_bound for g in gens):
                    hit = True

        def search(p):
            if p == len(steps):
                finish()
                return
            a, b, g = steps[p]
            assigned[g][a][b] = True
            for v in range(entry_bound + 1):
                mats[g][a][b] = v
                status = consistent(a, b, g)
                if status == 0:
                    search(p + 1)
                elif status == 2:
                    break
            mats[g][a][b] = 0
            assigned[g][a][b] = False

        search(0)

    modules = [found[key] for key in sorted(found)]
    if hit:
        log.warning("an accepted module reaches the entry bound %d; the list may be "
                    "incomplete", entry_bound)
    return EnumerationResult(ring, max_rank, entry_bound, modules, hit, gens)

