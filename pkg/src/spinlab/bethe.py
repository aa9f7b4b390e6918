"""Bethe equations, transfer-matrix eigenvalues, and a multi-start solver.

Four families of Bethe equations are handled, in the polynomial-cleared form
(both sides multiplied out so that the residual is polynomial in the roots):

  xxx        ((l_k+1)/l_k)^L = -prod_j (l_k-l_j+1)/(l_k-l_j-1)
             F_k = (l_k+1)^L prod_{j=1}^M (l_k-l_j-1)
                   + l_k^L  prod_{j=1}^M (l_k-l_j+1)
             (the j = k factors contribute the constants -1 and +1, which is
             exactly the sign absorbed by writing the right side as a full
             product).

  xxz        ((q - l_k/q)/(1 - l_k))^L = prod_{j!=k} (l_k/q - l_j q)/(l_k q - l_j/q)
             F_k = (q - l_k/q)^L prod_{j=1}^M (l_k q - l_j/q)
                   + (1 - l_k)^L prod_{j=1}^M (l_k/q - l_j q)
             (including j = k flips the relative sign, since the diagonal
             factors are +-l_k (q - 1/q)).

  polaron    X_i^L = prod_{k!=i} (X_i X_k - qbar X_i + 1)/(X_i X_k - qbar X_k + 1)
             F_i = X_i^L prod_{k!=i} (X_i X_k - qbar X_k + 1)
                   - prod_{k!=i} (X_i X_k - qbar X_i + 1),   qbar = q + 1/q.

  xxz_coord  same as polaron with an extra (-1)^(M-1) on the second term.

Residuals reported to callers are normalized by max(|term1|, |term2|, 1) so
that "residual < tol" is scale-free; Newton iterates on the raw polynomials,
whose Jacobian is assembled analytically factor by factor.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import lax
from .lax import ModelSpec, SingularRootError


# ---------------------------------------------------------------------------
# residuals and Jacobians


def _products_with_gradients(xs, i, J, phi, dphi_dxi, dphi_dxj):
    """Value and gradient of prod_{j in J} phi(x_i, x_j).

    phi(u, w) is holomorphic in both slots; dphi_dxi/dphi_dxj are its two
    partials.  The gradient accounts for j = i factors, where both slots
    carry the same variable.  O(|J|^2), fine for the small M used here.
    """
    xi = xs[i]
    vals = [phi(xi, xs[j]) for j in J]
    prod = 1.0 + 0.0j
    for v in vals:
        prod *= v
    grad = np.zeros(len(xs), dtype=complex)
    for pos, j in enumerate(J):
        rest = 1.0 + 0.0j
        for p2, v in enumerate(vals):
            if p2 != pos:
                rest *= v
        d_i = dphi_dxi(xi, xs[j])
        d_j = dphi_dxj(xi, xs[j])
        if j == i:
            grad[i] += (d_i + d_j) * rest
        else:
            grad[i] += d_i * rest
            grad[j] += d_j * rest
    return prod, grad


def _family_terms(model, M):
    """Per-family data: for each of the two terms of F_i, the prefactor
    pref(x_i) with derivative, the pair function phi with partials, the
    index set builder, and an overall constant."""
    L = model.L
    if model.family == "xxx":
        return [
            (lambda x: (x + 1.0) ** L, lambda x: L * (x + 1.0) ** (L - 1),
             lambda u, w: u - w - 1.0, lambda u, w: 1.0, lambda u, w: -1.0,
             lambda i: range(M), 1.0),
            (lambda x: x ** L, lambda x: L * x ** (L - 1),
             lambda u, w: u - w + 1.0, lambda u, w: 1.0, lambda u, w: -1.0,
             lambda i: range(M), 1.0),
        ]
    q = complex(model.q)
    if model.family == "xxz":
        return [
            (lambda x: (q - x / q) ** L,
             lambda x: -L / q * (q - x / q) ** (L - 1),
             lambda u, w: u * q - w / q, lambda u, w: q, lambda u, w: -1.0 / q,
             lambda i: range(M), 1.0),
            (lambda x: (1.0 - x) ** L, lambda x: -L * (1.0 - x) ** (L - 1),
             lambda u, w: u / q - w * q, lambda u, w: 1.0 / q, lambda u, w: -q,
             lambda i: range(M), 1.0),
        ]
    qbar = q + 1.0 / q
    sign2 = -1.0 if model.family == "polaron" else -((-1.0) ** (M - 1))
    return [
        (lambda x: x ** L, lambda x: L * x ** (L - 1),
         lambda u, w: u * w - qbar * w + 1.0,
         lambda u, w: w, lambda u, w: u - qbar,
         lambda i: [j for j in range(M) if j != i], 1.0),
        (lambda x: 1.0 + 0.0j, lambda x: 0.0 + 0.0j,
         lambda u, w: u * w - qbar * u + 1.0,
         lambda u, w: w - qbar, lambda u, w: u,
         lambda i: [j for j in range(M) if j != i], sign2),
    ]


def _residual_jacobian(model, M, roots):
    """Raw cleared residual F (length M), its analytic Jacobian (MxM), and
    the per-equation normalizations max(|term1|, |term2|, 1)."""
    xs = np.asarray(roots, dtype=complex)
    if xs.shape != (M,):
        raise ValueError("expected %d roots" % M)
    terms = _family_terms(model, M)
    F = np.zeros(M, dtype=complex)
    J = np.zeros((M, M), dtype=complex)
    scale = np.ones(M)
    for i in range(M):
        mags = []
        for pref, dpref, phi, dpi, dpj, idx, const in terms:
            prod, grad = _products_with_gradients(xs, i, list(idx(i)), phi, dpi, dpj)
            val = const * pref(xs[i]) * prod
            F[i] += val
            J[i] += const * pref(xs[i]) * grad
            J[i, i] += const * dpref(xs[i]) * prod
            mags.append(abs(val))
        # Relative normalization: the equation says the two terms cancel, so
        # the meaningful residual is |t1 + t2| / max(|t1|, |t2|).  A floor of
        # 1 here would let near-singular configurations (both terms ~ c^L
        # small, e.g. root pairs collapsing onto (0, -1) for XXX) pass with a
        # tiny absolute residual while the equations are badly violated.
        scale[i] = max(max(mags), 1e-300)
    return F, J, scale


def bethe_residual(model, M, roots):
    """Normalized polynomial-cleared Bethe-equation residuals (length M)."""
    F, _, scale = _residual_jacobian(model, M, list(roots))
    return F / scale


def lambda_eigenvalue(model, lam, roots):
    """Transfer-matrix eigenvalue Lambda(lam) on the Bethe state with the
    given roots (closed product form; simple poles at lam = root)."""
    if model.family not in ("xxx", "xxz"):
        raise ValueError("transfer eigenvalue defined for lattice families only")
    roots = [complex(r) for r in roots]
    for r in roots:
        if abs(lam - r) < 1e-12:
            raise SingularRootError(
                "evaluation at Bethe root -- use limit check instead")
    alpha, delta = lax.vacuum_eigenvalues(model, lam)
    p1 = 1.0 + 0.0j
    p2 = 1.0 + 0.0j
    if model.family == "xxx":
        for r in roots:
            p1 *= lax.f_xxx(r, lam)
            p2 *= lax.f_xxx(lam, r)
    else:
        for r in roots:
            p1 *= lax.f_xxz(r, lam, model.q)
            p2 *= lax.f_xxz(lam, r, model.q)
    return alpha * p1 + delta * p2


# ---------------------------------------------------------------------------
# energies and cross-model maps


def polaron_energy(q, roots):
    """E = sum_k (X_k + 1/X_k) - M (q + 1/q)."""
    roots = [complex(r) for r in roots]
    for x in roots:
        if x == 0:
            raise SingularRootError("zero root in the polaron energy sum")
    q = complex(q)
    return sum(x + 1.0 / x for x in roots) - len(roots) * (q + 1.0 / q)


def xxz_to_polaron_map(q, lam):
    """X = (q - lam/q) / (1 - lam); the coordinate variable of the spectral
    parameter lam.  Pole at lam = 1."""
    lam = complex(lam)
    if abs(lam - 1.0) < 1e-14:
        raise SingularRootError("map undefined at lam = 1")
    q = complex(q)
    return (q - lam / q) / (1.0 - lam)


def polaron_to_xxz_map(q, X):
    """Inverse of xxz_to_polaron_map: lam = q (X - q) / (q X - 1)."""
    X = complex(X)
    q = complex(q)
    if abs(q * X - 1.0) < 1e-14:
        raise SingularRootError("inverse map undefined at X = 1/q")
    return q * (X - q) / (q * X - 1.0)


# ---------------------------------------------------------------------------
# multi-start damped Newton solver


@dataclass(frozen=True)
class BetheRootSet:
    model: ModelSpec
    M: int
    roots: tuple                # canonically sorted by (real, imag)
    residual: float             # max normalized |F_k|
    provenance: str = "manual"

    def energy(self):
        if self.model.family == "xxx":
            return lax.xxx_energy_from_roots(self.model.L, self.roots)
        if self.model.family in ("polaron", "xxz_coord"):
            return polaron_energy(self.model.q, self.roots)
        raise ValueError("no closed-form energy for family %r"
                         % (self.model.family,))

    def to_json_dict(self):
        d = {"model": self.model.family, "L": self.model.L, "M": self.M,
             "roots": [[r.real, r.imag] for r in self.roots],
             "residual": self.residual}
        if self.model.q is not None:
            d["q"] = [complex(self.model.q).real, complex(self.model.q).imag]
        return d


@dataclass(frozen=True)
class SolveConfig:
    starts: int = 200
    max_iter: int = 80
    damping_shrink: float = 0.5     # backtracking factor on the Newton step
    min_step: float = 1e-3          # smallest accepted fraction of the step
    fingerprint_tol: float = 1e-7
    residual_tol: float = 1e-10
    distinct_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        for name in ("damping_shrink", "min_step", "fingerprint_tol",
                     "residual_tol", "distinct_tol"):
            if getattr(self, name) <= 0:
                raise ValueError("%s must be positive" % name)
        if self.starts < 1 or self.max_iter < 1:
            raise ValueError("starts and max_iter must be at least 1")


def _start_points(model, M, rng):
    """One random initial root vector, drawn from documented heuristic clouds.

    xxx:      points near the one-magnon locus lam = 1/(w - 1), |w| = 1,
              mixed with a broad Gaussian cloud.
    xxz:      points near lam ~ q^{2n}, n in -2..2, plus unit-circle samples.
    polaron / xxz_coord: points near the unit circle (the M = 1 roots are
              the L-th roots of unity).
    """
    noise = 0.3 * (rng.standard_normal(M) + 1j * rng.standard_normal(M))
    kind = rng.integers(3)
    if model.family == "xxx":
        if kind == 0:
            theta = rng.uniform(0.15, 2 * np.pi - 0.15, M)
            base = 1.0 / (np.exp(1j * theta) - 1.0)
        elif kind == 1:
            base = rng.uniform(-3.0, 2.0, M) + 0.0j
        else:
            base = np.zeros(M, dtype=complex)
            noise = 1.5 * (rng.standard_normal(M) + 1j * rng.standard_normal(M))
        return base + noise
    if model.family == "xxz":
        if kind == 0:
            n = rng.integers(-2, 3, M)
            base = complex(model.q) ** (2.0 * n)
        elif kind == 1:
            base = np.exp(1j * rng.uniform(0.0, 2 * np.pi, M))
        else:
            base = np.zeros(M, dtype=complex)
            noise = 1.5 * (rng.standard_normal(M) + 1j * rng.standard_normal(M))
        return base + noise
    base = np.exp(1j * rng.uniform(0.0, 2 * np.pi, M))
    if kind == 2:
        noise = 0.8 * (rng.standard_normal(M) + 1j * rng.standard_normal(M))
    return base + noise


def _newton(model, M, x0, cfg):
    """Damped Newton on the raw cleared residual; returns roots or None."""
    x = np.array(x0, dtype=complex)
    for _ in range(cfg.max_iter):
        F, J, scale = _residual_jacobian(model, M, x)
        if np.max(np.abs(F) / scale) < cfg.residual_tol:
            return x
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        t = 1.0
        base = np.linalg.norm(F / scale)
        while t >= cfg.min_step:
            Ft, _, st = _residual_jacobian(model, M, x + t * step)
            if np.linalg.norm(Ft / st) < base:
                break
            t *= cfg.damping_shrink
        else:
            return None
        x = x + t * step
    F, _, scale = _residual_jacobian(model, M, x)
    if np.max(np.abs(F) / scale) < cfg.residual_tol:
        return x
    return None


def _spurious(model, roots, tol):
    """Roots introduced by clearing denominators, or degenerate sets."""
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < tol:
                return True
    if model.family == "xxx":
        bad = (0.0, -1.0)
    elif model.family == "xxz":
        bad = (1.0, 0.0)
    else:
        bad = (0.0,)
    return any(abs(r - b) < tol for r in roots for b in bad)


def _fingerprint(roots):
    """Elementary symmetric polynomials e_1..e_M -- permutation invariant."""
    coeffs = np.poly(np.asarray(roots, dtype=complex))
    return coeffs[1:]


def _canonical_sort(roots):
    arr = np.asarray(roots, dtype=complex)
    order = np.lexsort((np.round(arr.imag, 9), np.round(arr.real, 9)))
    return tuple(arr[order])


def solve_bethe(model, M, cfg=None):
    """Multi-start damped Newton over the cleared Bethe equations.

    Returns deduplicated BetheRootSet objects sorted by residual (ties broken
    by the canonical root order), with degenerate and cleared-denominator
    solutions filtered out.  Best-effort: finding every solution is not
    guaranteed, but every returned set verifies.
    """
    if cfg is None:
        cfg = SolveConfig()
    if M < 1:
        raise ValueError("need at least one magnon")
    rng = np.random.default_rng(cfg.seed)
    found = {}
    for _ in range(cfg.starts):
        x0 = _start_points(model, M, rng)
        x = _newton(model, M, x0, cfg)
        if x is None or _spurious(model, x, cfg.distinct_tol):
            continue
        roots = _canonical_sort(x)
        fp = _fingerprint(roots)
        key = None
        for k in found:
            ref = np.asarray(k)
            denom = np.maximum(np.abs(ref), 1.0)
            if np.max(np.abs(fp - ref) / denom) < cfg.fingerprint_tol:
                key = k
                break
        res = float(np.max(np.abs(bethe_residual(model, M, roots))))
        cand = BetheRootSet(model, M, roots, res,
                            provenance="solver seed=%d" % cfg.seed)
        if key is None:
            found[tuple(fp)] = cand
        elif res < found[key].residual:
            found[key] = cand
    out = sorted(found.values(),
                 key=lambda s: (s.residual,
                                [(r.real, r.imag) for r in s.roots]))
    return out
