"""Spectrum sweeps with branch tracking, crossing refinement and the
discontinuity condition at Hamiltonian degeneracies."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment, minimize_scalar

from .liouvillian import devectorize, dissipator_superop, vectorize
from .spin_ops import DenseOperator
from .steadystate import DegenerateHamiltonianError, weak_limit_steady_state

REFINE_RTOL = 1e-10
COND_RTOL = 1e-8
LIMIT_EPS = 1e-5
LIMIT_CONSISTENCY = 1e-6
MIN_OVERLAP = 0.5
_CLUSTER_RTOL = 1e-9


@dataclass(eq=False)
class SpectrumBranches:
    """Eigen-decompositions along a grid, columns ordered by continuity."""

    grid: np.ndarray
    values: np.ndarray  # (n_grid, d)
    vectors: np.ndarray  # (n_grid, d, d); vectors[k][:, b] is branch b at grid[k]
    overlap_log: np.ndarray  # (n_grid - 1,) minimal matched overlap per step
    scale: float
    system: object = None

    @property
    def ambiguous(self) -> bool:
        return bool(np.any(self.overlap_log < MIN_OVERLAP))

    @property
    def n_branches(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class CrossingReport:
    x0: float
    pair: tuple[int, int]
    gap_min: float
    kind: str = "crossing"  # or "touching"
    c_norm: float | None = None
    flip_element: float | None = None
    condition_met: bool = False
    limit_consistent: bool | None = None
    vectors: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "x0": self.x0,
            "pair": list(self.pair),
            "gap_min": self.gap_min,
            "kind": self.kind,
            # NaN (limit could not be evaluated) is not valid JSON
            "c_norm": None if self.c_norm is None or np.isnan(self.c_norm) else self.c_norm,
            "flip_element": self.flip_element,
            "condition_met": self.condition_met,
            "limit_consistent": self.limit_consistent,
        }

    @classmethod
    def from_dict(cls, d: dict) -> CrossingReport:
        d = dict(d)
        d["pair"] = tuple(d["pair"])
        return cls(**d)


def crossings_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


def crossings_from_json(text: str) -> list[CrossingReport]:
    return [CrossingReport.from_dict(d) for d in json.loads(text)]


def _fix_phase(vecs: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vecs), axis=0)
    lead = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(lead) / lead)


def _clusters(vals: np.ndarray, tol: float):
    start = 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > tol:
            if k - start > 1:
                yield list(range(start, k))
            start = k


def _align_degenerate(vals, vecs, ref, tol):
    """Rotate exactly degenerate eigenvectors towards the reference basis."""
    vecs = vecs.copy()
    for cl in _clusters(vals, tol):
        sub = vecs[:, cl]
        proj = sub.conj().T @ ref
        weights = np.linalg.norm(proj, axis=0)
        chosen = np.sort(np.argsort(-weights, kind="stable")[: len(cl)])
        w, _, zh = np.linalg.svd(proj[:, chosen])
        vecs[:, cl] = sub @ (w @ zh)
    return vecs


def _eig(h: np.ndarray):
    vals, vecs = np.linalg.eigh(h)
    return vals, _fix_phase(vecs)


def _match(prev_vecs: np.ndarray, new_vecs: np.ndarray):
    overlap = np.abs(prev_vecs.conj().T @ new_vecs)
    rows, cols = linear_sum_assignment(-overlap)
    perm = cols[np.argsort(rows)]
    return perm, float(overlap[np.arange(len(perm)), perm].min())


def _hamiltonian_fn(system):
    return lambda x: system.hamiltonian(x).entries


def sweep_spectrum(system, grid) -> SpectrumBranches:
    """Diagonalize H(b_x) on ``grid`` and order eigenpairs by continuity.

    Branch labels are fixed by ascending eigenvalue at the left end of the
    grid (ties broken by the next grid point).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly ascending with >= 2 points")
    hfn = _hamiltonian_fn(system)
    scale = system.model.energy_scale
    tol = _CLUSTER_RTOL * scale
    raw = [_eig(hfn(x)) for x in grid]

    # first point: resolve degeneracies by looking one step ahead
    v1 = _align_degenerate(*raw[1], raw[1][1], tol)
    v0 = _align_degenerate(raw[0][0], raw[0][1], v1, tol)
    perm, _ = _match(v0, v1)
    order = np.lexsort((raw[1][0][perm], np.round(raw[0][0] / tol)))
    values = [raw[0][0][order]]
    vectors = [v0[:, order]]
    overlaps = []
    for k in range(1, len(grid)):
        vals, vecs = raw[k]
        vecs = _align_degenerate(vals, vecs, vectors[-1], tol)
        perm, min_ov = _match(vectors[-1], vecs)
        values.append(vals[perm])
        vectors.append(vecs[:, perm])
        overlaps.append(min_ov)
    return SpectrumBranches(grid, np.array(values), np.array(vectors),
                            np.array(overlaps), scale, system)


def _tracked_pair(hfn, x, ref, i, j):
    vals, vecs = _eig(hfn(x))
    perm, _ = _match(ref, vecs)
    return vals[perm], vecs[:, perm]


def _refine(hfn, a, b, ref_a, i, j, tol, max_iter=200):
    s_a = np.sign(np.real(np.diag(ref_a.conj().T @ hfn(a) @ ref_a))[[i, j]] @ [1, -1])
    x, gap, vecs = a, np.inf, ref_a
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        vals, vm = _tracked_pair(hfn, m, ref_a, i, j)
        g = vals[i] - vals[j]
        x, gap, vecs = m, abs(g), vm
        if gap < tol:
            break
        if np.sign(g) == s_a:
            a, ref_a = m, vm
        else:
            b = m
    return x, gap, vecs


def find_crossings(branches: SpectrumBranches, refine_tol: float | None = None,
                   touchings: bool = True) -> list[CrossingReport]:
    """Locate sign changes of tracked gaps and refine them by bisection.

    ``refine_tol`` defaults to 1e-10 times the largest |eigenvalue| seen.
    Gap minima below ``refine_tol`` without a sign change are reported with
    ``kind="touching"``.
    """
    vals = branches.values
    grid = branches.grid
    hfn = _hamiltonian_fn(branches.system)
    if refine_tol is None:
        refine_tol = REFINE_RTOL * max(np.max(np.abs(vals)), 1e-300)
    d = vals.shape[1]
    iu, ju = np.triu_indices(d, k=1)
    gaps = vals[:, iu] - vals[:, ju]  # (n_grid, n_pairs)
    reports = []

    for k in range(len(grid) - 1):
        g0, g1 = gaps[k], gaps[k + 1]
        hits = np.nonzero((g0 * g1 < 0) & (np.abs(g0) >= refine_tol) & (np.abs(g1) >= refine_tol))[0]
        for p in hits:
            i, j = int(iu[p]), int(ju[p])
            x0, gmin, vecs = _refine(hfn, grid[k], grid[k + 1], branches.vectors[k], i, j, refine_tol)
            if gmin < refine_tol:
                reports.append(CrossingReport(float(x0), (i, j), float(gmin),
                                              vectors=vecs[:, [i, j]]))
        # crossing exactly on an interior grid point
        if 0 < k:
            gm = gaps[k - 1]
            exact = np.nonzero((np.abs(g0) < refine_tol) & (gm * g1 < 0))[0]
            for p in exact:
                i, j = int(iu[p]), int(ju[p])
                reports.append(CrossingReport(float(grid[k]), (i, j), float(abs(g0[p])),
                                              vectors=branches.vectors[k][:, [i, j]]))

    if touchings:
        reports.extend(_find_touchings(branches, gaps, iu, ju, refine_tol, hfn))
    reports.sort(key=lambda r: (r.x0, r.pair))
    return reports


def _find_touchings(branches, gaps, iu, ju, refine_tol, hfn):
    grid = branches.grid
    absg = np.abs(gaps)
    step = np.max(np.diff(grid))
    out = []
    for p in range(gaps.shape[1]):
        g = absg[:, p]
        if np.all(g < refine_tol) or np.any(gaps[:-1, p] * gaps[1:, p] < 0):
            continue
        for k in range(len(grid)):
            left = g[k - 1] if k > 0 else np.inf
            right = g[k + 1] if k + 1 < len(grid) else np.inf
            if not (g[k] <= left and g[k] <= right):
                continue
            # cheap screen: the gap can only reach zero if it is within one
            # grid step worth of slope of zero
            slope = max(abs(g[k] - left) if np.isfinite(left) else 0.0,
                        abs(g[k] - right) if np.isfinite(right) else 0.0)
            if g[k] > 2 * slope + refine_tol:
                continue
            i, j = int(iu[p]), int(ju[p])
            ref = branches.vectors[k]
            lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]

            def gap_at(x):
                v, _ = _tracked_pair(hfn, x, ref, i, j)
                return abs(v[i] - v[j])

            res = minimize_scalar(gap_at, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-12 * max(1.0, step)})
            best_x, best = (res.x, res.fun) if res.fun < g[k] else (grid[k], g[k])
            if best < refine_tol:
                _, vecs = _tracked_pair(hfn, best_x, ref, i, j)
                out.append(CrossingReport(float(best_x), (i, j), float(best), kind="touching",
                                          vectors=vecs[:, [i, j]]))
    return out


def _check_orthonormal(eigvecs: np.ndarray) -> None:
    d = eigvecs.shape[0]
    if eigvecs.shape != (d, d) or not np.allclose(eigvecs.conj().T @ eigvecs, np.eye(d), atol=1e-10):
        raise ValueError("eigvecs must be a complete orthonormal set")


def project_diagonal(A: DenseOperator, eigvecs: np.ndarray) -> DenseOperator:
    """Keep only the diagonal of A in the given eigenbasis."""
    _check_orthonormal(eigvecs)
    inner = eigvecs.conj().T @ A.entries @ eigvecs
    return DenseOperator((eigvecs * np.diag(inner)) @ eigvecs.conj().T, A.basis_tag)


def project_coherence(A: DenseOperator, eigvecs: np.ndarray, i: int, j: int) -> DenseOperator:
    """Keep only the (i, j) and (j, i) elements of A in the eigenbasis."""
    if i == j:
        raise ValueError("project_coherence needs i != j")
    _check_orthonormal(eigvecs)
    return DenseOperator(_coherence(A.entries, eigvecs[:, i], eigvecs[:, j]), A.basis_tag)


def _coherence(a: np.ndarray, vi: np.ndarray, vj: np.ndarray) -> np.ndarray:
    aij = vi.conj() @ a @ vj
    aji = vj.conj() @ a @ vi
    return aij * np.outer(vi, vj.conj()) + aji * np.outer(vj, vi.conj())


def flip_condition(eigvecs: np.ndarray, i: int, j: int, n_sites: int | None = None,
                   jz: DenseOperator | None = None) -> float:
    """|<lambda_i| J^z |lambda_j>|."""
    if jz is None:
        from .spin_ops import collective
        jz = collective("z", n_sites)
    return float(abs(eigvecs[:, i].conj() @ jz.entries @ eigvecs[:, j]))


def _pair_vectors(system, report: CrossingReport, x: float) -> tuple[np.ndarray, np.ndarray]:
    vals, vecs = _eig(system.hamiltonian(x).entries)
    if report.vectors is not None:
        overlap = np.abs(vecs.conj().T @ report.vectors)
        a, b = int(np.argmax(overlap[:, 0])), int(np.argmax(overlap[:, 1]))
        if a == b:
            raise ValueError("could not separate crossing branches near x0")
    else:
        # no stored vectors (e.g. report read back from JSON): take the
        # closest adjacent pair at x0, which is the crossing pair for a
        # two-fold crossing
        h0 = np.linalg.eigvalsh(system.hamiltonian(report.x0).entries)
        a = int(np.argmin(np.diff(h0)))
        b = a + 1
    return vecs[:, a], vecs[:, b]


def weak_limit_at(system, x0: float, eps: float | None = None):
    """Two-sided gamma -> 0 steady-state limits at ``x0``.

    Each side is linearly extrapolated from x0 +- eps and x0 +- 2 eps, which
    removes the O(eps) drift of the one-sided values.
    """
    if eps is None:
        eps = LIMIT_EPS * system.model.energy_scale
    jumps = system.jumps(1.0)

    def rho(x):
        return weak_limit_steady_state(system.hamiltonian(x), jumps).rho.entries

    left = 2 * rho(x0 - eps) - rho(x0 - 2 * eps)
    right = 2 * rho(x0 + eps) - rho(x0 + 2 * eps)
    return left, right


def discontinuity_norm(system, crossing: CrossingReport, eps: float | None = None) -> CrossingReport:
    """Evaluate C_ij = ||P^Delta_ij L_1 lim rho_ss||_2 at a refined crossing.

    Returns a copy of ``crossing`` with ``c_norm``, ``flip_element``,
    ``condition_met`` and ``limit_consistent`` filled in.  L_1 is the
    dissipator at unit scale.
    """
    if eps is None:
        eps = LIMIT_EPS * system.model.energy_scale
    # shrink eps if a neighbouring degeneracy sits inside the stencil
    for attempt in range(3):
        try:
            left, right = weak_limit_at(system, crossing.x0, eps)
            break
        except DegenerateHamiltonianError:
            eps /= 10
    else:
        return dataclasses.replace(crossing, c_norm=float("nan"), condition_met=False,
                                   limit_consistent=None)
    ref = np.linalg.norm(left)
    consistent = bool(np.linalg.norm(left - right) <= LIMIT_CONSISTENCY * ref)
    lim = 0.5 * (left + right)

    l1 = dissipator_superop(system.jumps(1.0))
    image = devectorize(l1 @ vectorize(lim)).entries
    vi, vj = _pair_vectors(system, crossing, crossing.x0 - eps)
    c = float(np.linalg.norm(_coherence(image, vi, vj)))
    cond_tol = COND_RTOL * float(np.linalg.norm(l1, 2))
    jz = system.observable("z")
    flip = float(abs(vi.conj() @ jz.entries @ vj))
    return dataclasses.replace(crossing, c_norm=c, flip_element=flip,
                               condition_met=c > cond_tol, limit_consistent=consistent)


def l1_norm(system) -> float:
    return float(np.linalg.norm(dissipator_superop(system.jumps(1.0)), 2))
