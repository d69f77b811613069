"""Independent oracles for the frozen [derived] values used in the tests.

Run ``python3 tests/oracles/derive.py`` to regenerate.  Nothing here imports
the package: operators are rebuilt from np.kron, steady states are solved
symbolically, and crossings are located inside symmetry blocks where they
become plain sign changes of sorted eigenvalue differences.
"""

import itertools

import numpy as np
import sympy as sp
from scipy.optimize import brentq

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
SM = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|


def site(op, k, n):
    out = np.eye(1)
    for j in range(n):
        out = np.kron(out, op if j == k else np.eye(2))
    return out


def chain(n, xy, zz, bx):
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for k in range(n - 1):
        h += xy * (site(X, k, n) @ site(X, k + 1, n) + site(Y, k, n) @ site(Y, k + 1, n))
        h += zz * site(Z, k, n) @ site(Z, k + 1, n)
    for k in range(n):
        h += bx * site(X, k, n)
    return h


def bloch_population():
    """1 spin, H = B sigma^x, jump sigma^- with factor-2 rate g."""
    B, g = sp.symbols("B g", positive=True)
    r = sp.Matrix(2, 2, sp.symbols("r00 r01 r10 r11"))
    H = B * sp.Matrix([[0, 1], [1, 0]])
    c = sp.Matrix([[0, 1], [0, 0]])
    rhs = -sp.I * (H * r - r * H) + g * (2 * c * r * c.H - c.H * c * r - r * c.H * c)
    eqs = list(rhs) + [r[0, 0] + r[1, 1] - 1]
    sol = sp.solve(eqs, list(r), dict=True)[0]
    p1 = sp.simplify(sol[r[1, 1]])
    return p1, p1.subs({B: sp.Rational(3, 10), g: sp.Rational(1, 5)})


def decay_spectrum():
    """Eigenvalues of the H = 0, sigma^- (rate 1) Liouvillian, exactly."""
    r = sp.symbols("r0:4")
    rho = sp.Matrix([[r[0], r[2]], [r[1], r[3]]])  # column stacking
    c = sp.Matrix([[0, 1], [0, 0]])
    out = 2 * c * rho * c.T - c.T * c * rho - rho * c.T * c
    L = sp.Matrix([[sp.diff(out[i % 2, i // 2], rk) for rk in r] for i in range(4)])
    return sorted(L.eigenvals(multiple=True))


def orbit_counts():
    def orbits(n, maps):
        seen, count = set(), 0
        for s in itertools.product((0, 1), repeat=n):
            if s in seen:
                continue
            count += 1
            stack = [s]
            while stack:
                u = stack.pop()
                if u in seen:
                    continue
                seen.add(u)
                stack.extend(m(u) for m in maps)
        return count

    shift = lambda s: s[-1:] + s[:-1]  # noqa: E731
    flip = lambda s: s[::-1]  # noqa: E731
    return orbits(3, [shift]), orbits(6, [shift, flip])


def block_crossings(n, xy, zz, lo, hi, points=4001):
    """Crossings between eigenvalues of different (reflection, flip) blocks.

    Inside one block the spectrum is generically nondegenerate, so every
    crossing of the full problem is a sign change of lam_a(x) - lam_b(x)
    with a, b taken from different blocks.
    """
    d = 2 ** n
    R = np.zeros((d, d))
    F = np.zeros((d, d))
    for b in range(d):
        bits = [(b >> (n - 1 - k)) & 1 for k in range(n)]
        R[int("".join(map(str, bits[::-1])), 2), b] = 1
        F[(d - 1) ^ b, b] = 1
    blocks = []
    for r, f in itertools.product((1, -1), repeat=2):
        P = (np.eye(d) + r * R) @ (np.eye(d) + f * F) / 4
        w, v = np.linalg.eigh(P)
        blocks.append(v[:, w > 0.5])

    def spec(x, basis):
        return np.linalg.eigvalsh(basis.conj().T @ chain(n, xy, zz, x) @ basis)

    grid = np.linspace(lo, hi, points)
    found = []
    for a, b in itertools.combinations(range(4), 2):
        sa = np.array([spec(x, blocks[a]) for x in grid])
        sb = np.array([spec(x, blocks[b]) for x in grid])
        for i in range(sa.shape[1]):
            for j in range(sb.shape[1]):
                diff = sa[:, i] - sb[:, j]
                for k in np.nonzero(diff[:-1] * diff[1:] < 0)[0]:
                    f = lambda x: spec(x, blocks[a])[i] - spec(x, blocks[b])[j]  # noqa: E731
                    found.append(brentq(f, grid[k], grid[k + 1], xtol=1e-14))
    return sorted(found)


if __name__ == "__main__":
    p1, val = bloch_population()
    print("bloch p1 =", p1, "; at B=0.3, g=0.2:", val, float(val))
    print("decay spectrum:", decay_spectrum())
    print("orbits: T on N=3, <T,R> on N=6:", orbit_counts())
    print("ising N=2 open crossings in [0.01, 2]:", block_crossings(2, 0.0, 1.0, 0.01, 2.0))
    print("ising N=4 open crossings in [0.05, 3]:",
          [f"{x:.12f}" for x in block_crossings(4, 0.0, 1.0, 0.05, 3.0)])
    print("xxz N=4 open (0.25, 1) crossings in [0.1, 0.8]:",
          [f"{x:.12f}" for x in block_crossings(4, 0.25, 1.0, 0.1, 0.8)])
