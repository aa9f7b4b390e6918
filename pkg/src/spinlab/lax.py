"""R-matrices, Lax operators, monodromy and transfer matrices, Hamiltonians.

Two model families are supported on a closed chain of L sites:

  XXX  -- rational model, additive spectral parameter.  The R-matrix is
          R(d) = d*I + P and the Lax operator at site k is L_{a,k}(lam) =
          R_{a,k}(lam); inhomogeneities enter additively as lam + xi_k.

  XXZ  -- trigonometric model, multiplicative spectral parameter lam and
          deformation q.  The building block is the GL_q(2) upper-triangular
          Hecke matrix Rhat with Rhat^2 = (q - 1/q) Rhat + I, its baxterized
          companion Rhat(mu) = mu^{-1/2} Rhat - mu^{1/2} Rhat^{-1}, and the
          diagonally twisted symmetric form used for the monodromy matrix
          throughout; inhomogeneities enter multiplicatively as lam * xi_k.

The monodromy matrix T_a(lam) = L_{a,1}(lam) ... L_{a,L}(lam) is a 2x2 matrix
in the auxiliary space whose entries A, B, C, D are global chain operators.
They are applied to state vectors by an auxiliary-space sweep in O(L 2^L)
without ever forming a dense matrix.

Square roots of the multiplicative spectral parameter always use the
principal branch.
"""

from dataclasses import dataclass, field

import numpy as np

from . import hilbert
from .hilbert import PERM4, SIGMA_MINUS, SIGMA_PLUS


class SingularRootError(ValueError):
    """Raised when a root configuration hits a pole of an analytic formula."""


# ---------------------------------------------------------------------------
# model specification


@dataclass(frozen=True)
class ModelSpec:
    family: str                 # 'xxx', 'xxz', 'polaron' or 'xxz_coord'
    L: int
    q: complex = None
    xi: tuple = None            # inhomogeneities; None means homogeneous

    def __post_init__(self):
        if self.family not in ("xxx", "xxz", "polaron", "xxz_coord"):
            raise ValueError("unknown model family %r" % (self.family,))
        hilbert.check_sites(self.L)
        if self.family in ("xxz", "polaron", "xxz_coord"):
            if self.q is None or self.q == 0:
                raise ValueError("family %r needs a nonzero deformation q"
                                 % (self.family,))
        if self.family == "xxz":
            q = complex(self.q)
            for m in range(1, self.L + 1):
                if abs(q ** (2 * m) - 1.0) <= 1e-6:
                    raise ValueError("q=%r is (numerically) a root of unity; "
                                     "denominators q^{2m}-1 vanish" % (self.q,))
        if self.xi is not None:
            xi = tuple(complex(x) for x in self.xi)
            if len(xi) != self.L:
                raise ValueError("need one inhomogeneity per site")
            object.__setattr__(self, "xi", xi)

    def site_argument(self, lam, k):
        """Spectral argument at site k: additive for XXX, multiplicative for XXZ."""
        if self.xi is None:
            return lam
        if self.family == "xxx":
            return lam + self.xi[k - 1]
        return lam * self.xi[k - 1]


def xxx(L, xi=None):
    return ModelSpec("xxx", L, xi=xi)


def xxz(L, q, xi=None):
    return ModelSpec("xxz", L, q=q, xi=xi)


def polaron(L, q):
    """Fermionic hopping chain with density-density coupling q + 1/q.

    The Bethe equations are written in the momentum-like variables X_k;
    there is no Lax matrix in this family, so only the `bethe` and `polaron`
    modules accept it.
    """
    return ModelSpec("polaron", L, q=q)


def xxz_coord(L, q):
    """XXZ chain parametrized by the coordinate-ansatz variables X_k.

    Same local physics as 'xxz' but the Bethe equations carry an extra
    (-1)^(M-1) twist relative to the 'polaron' family.
    """
    return ModelSpec("xxz_coord", L, q=q)


def _require_lattice(model):
    if model.family not in ("xxx", "xxz"):
        raise ValueError("family %r has no Lax/monodromy construction"
                         % (model.family,))


# ---------------------------------------------------------------------------
# vacuum eigenvalue functions and the f/g amplitudes of the commutation algebra


def a_xxx(lam):
    return lam + 1.0


def d_xxx(lam):
    return lam


def a_xxz(lam, q):
    """Twisted-normalization a(lam) = lam^{-1/2} q - lam^{1/2} / q."""
    r = np.sqrt(complex(lam))
    return q / r - r / q


def d_xxz(lam, q):
    """Twisted-normalization d(lam) = lam^{-1/2} - lam^{1/2}."""
    r = np.sqrt(complex(lam))
    return 1.0 / r - r


def f_xxx(lam, mu):
    return (lam - mu + 1.0) / (lam - mu)


def g_xxx(lam, mu):
    return 1.0 / (lam - mu)


def f_xxz(lam, mu, q):
    return (mu * q - lam / q) / (mu - lam)


def g_xxz(lam, mu, q):
    return np.sqrt(complex(lam) * complex(mu)) * (q - 1.0 / q) / (mu - lam)


def vacuum_eigenvalues(model, lam):
    """(alpha(lam), delta(lam)) -- eigenvalues of A and D on the pseudovacuum."""
    _require_lattice(model)
    alpha, delta = 1.0 + 0.0j, 1.0 + 0.0j
    for k in range(1, model.L + 1):
        arg = model.site_argument(lam, k)
        if model.family == "xxx":
            alpha *= a_xxx(arg)
            delta *= d_xxx(arg)
        else:
            alpha *= a_xxz(arg, model.q)
            delta *= d_xxz(arg, model.q)
    return alpha, delta


# ---------------------------------------------------------------------------
# R-matrices (4x4, basis |s1 s2> with index 2 s1 + s2)


def r_xxx(d):
    """Rational R-matrix R(d) = d*I + P."""
    return d * np.eye(4, dtype=complex) + PERM4


def rhat_q(q):
    """Constant GL_q(2) Hecke matrix Rhat: Rhat^2 = (q - 1/q) Rhat + I."""
    lam = q - 1.0 / q
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = q
    m[3, 3] = q
    m[1, 1] = lam
    m[1, 2] = 1.0
    m[2, 1] = 1.0
    return m


def rhat_baxterized(mu, q):
    """Baxterized braid-form matrix
    Rhat(mu) = mu^{-1/2} Rhat - mu^{1/2} Rhat^{-1}
             = (mu^{-1/2} - mu^{1/2}) Rhat + mu^{1/2} (q - 1/q) I."""
    if mu == 0:
        raise SingularRootError("baxterized R-matrix undefined at mu = 0")
    r = np.sqrt(complex(mu))
    return (1.0 / r - r) * rhat_q(q) + r * (q - 1.0 / q) * np.eye(4, dtype=complex)


def r_xxz_twisted(lam, q):
    """Symmetric (diagonally twisted) vertex R-matrix of the XXZ chain:
    corners a(lam), middle diagonal d(lam), off-diagonal q - 1/q."""
    if lam == 0:
        raise SingularRootError("twisted R-matrix undefined at lam = 0")
    a = a_xxz(lam, q)
    d = d_xxz(lam, q)
    b = q - 1.0 / q
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = a
    m[3, 3] = a
    m[1, 1] = d
    m[2, 2] = d
    m[1, 2] = b
    m[2, 1] = b
    return m


def r_xxz_vertex_untwisted(lam, q):
    """Vertex-form R(lam) = Rhat(lam) P before the diagonal twist."""
    return rhat_baxterized(lam, q) @ PERM4


def twist_conjugate(lam, mat):
    """Apply the diagonal twist (lam^U x I) mat (lam^{-U} x I), U = diag(1/4, -1/4)."""
    r = complex(lam) ** 0.25
    d = np.kron(np.diag([r, 1.0 / r]), np.eye(2)).astype(complex)
    dinv = np.kron(np.diag([1.0 / r, r]), np.eye(2)).astype(complex)
    return d @ mat @ dinv


# ---------------------------------------------------------------------------
# Yang-Baxter checks on C^2 x C^2 x C^2


def _embed(mat, pos):
    """Embed a 4x4 two-factor matrix at adjacent positions of a 3-factor space.

    pos = 0 places it on factors (1,2), pos = 1 on factors (2,3).
    """
    if pos == 0:
        return np.kron(mat, np.eye(2))
    return np.kron(np.eye(2), mat)


def _embed13(mat):
    """Embed a 4x4 matrix on factors (1,3) of a 3-factor space."""
    big = np.zeros((8, 8), dtype=complex)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for ap in range(2):
                    for cp in range(2):
                        big[4 * a + 2 * b + c, 4 * ap + 2 * b + cp] = mat[2 * a + c, 2 * ap + cp]
    return big


def check_ybe_vertex_xxx(lam, mu):
    """Residual of R_12(lam-mu) R_13(lam) R_23(mu) = R_23(mu) R_13(lam) R_12(lam-mu)."""
    r12 = _embed(r_xxx(lam - mu), 0)
    r13 = _embed13(r_xxx(lam))
    r23 = _embed(r_xxx(mu), 1)
    return np.abs(r12 @ r13 @ r23 - r23 @ r13 @ r12).max()


def check_ybe_braid_xxz(lam, mu, q):
    """Residual of the braid-form equation
    Rhat_12(lam) Rhat_23(lam*mu) Rhat_12(mu) = Rhat_23(mu) Rhat_12(lam*mu) Rhat_23(lam)."""
    r12l = _embed(rhat_baxterized(lam, q), 0)
    r12m = _embed(rhat_baxterized(mu, q), 0)
    r12lm = _embed(rhat_baxterized(lam * mu, q), 0)
    r23l = _embed(rhat_baxterized(lam, q), 1)
    r23m = _embed(rhat_baxterized(mu, q), 1)
    r23lm = _embed(rhat_baxterized(lam * mu, q), 1)
    return np.abs(r12l @ r23lm @ r12m - r23m @ r12lm @ r23l).max()


def check_ybe(form, model, lam, mu):
    """Dispatch: 'vertex' (XXX) or 'braid' (XXZ) Yang-Baxter residual."""
    if form == "vertex" and model.family == "xxx":
        return check_ybe_vertex_xxx(lam, mu)
    if form == "braid" and model.family == "xxz":
        return check_ybe_braid_xxz(lam, mu, model.q)
    raise ValueError("unsupported YBE form %r for family %r" % (form, model.family))


# ---------------------------------------------------------------------------
# monodromy matrix by auxiliary-space sweep

ENTRY_INDEX = {"A": (0, 0), "B": (0, 1), "C": (1, 0), "D": (1, 1)}


def _site_blocks(model, lam, k):
    """2x2 auxiliary-space block decomposition of the Lax matrix at site k.

    blocks[i][j] is the 2x2 one-site operator sitting at auxiliary entry (i,j).
    """
    _require_lattice(model)
    arg = model.site_argument(lam, k)
    if model.family == "xxx":
        return [[np.diag([arg + 1.0, arg]).astype(complex), SIGMA_MINUS],
                [SIGMA_PLUS, np.diag([arg, arg + 1.0]).astype(complex)]]
    if arg == 0:
        raise SingularRootError("XXZ Lax matrix undefined at lam*xi = 0")
    a = a_xxz(arg, model.q)
    d = d_xxz(arg, model.q)
    b = model.q - 1.0 / model.q
    return [[np.diag([a, d]).astype(complex), b * SIGMA_MINUS],
            [b * SIGMA_PLUS, np.diag([d, a]).astype(complex)]]


def monodromy_apply(model, entry, lam, v):
    """Apply entry A, B, C or D of the monodromy matrix T_a(lam) to v.

    T = L_{a,1} ... L_{a,L}, so the site-L factor acts first: the auxiliary
    pair (w_0, w_1) is initialized to the j-th column and the site-local
    blocks are applied from site L down to site 1; entry (i, j) is w_i.
    """
    i, j = ENTRY_INDEX[entry]
    v = np.asarray(v, dtype=complex)
    if v.shape != (1 << model.L,):
        raise ValueError("state vector has wrong length for L=%d" % model.L)
    zero = np.zeros_like(v)
    w = [v.copy() if j == 0 else zero.copy(), v.copy() if j == 1 else zero.copy()]
    for k in range(model.L, 0, -1):
        blocks = _site_blocks(model, lam, k)
        new = []
        for row in range(2):
            acc = np.zeros_like(v)
            for col in range(2):
                if w[col].any():
                    acc += hilbert.apply_one_site(model.L, blocks[row][col], k, w[col])
            new.append(acc)
        w = new
    return w[i]


def transfer_apply(model, lam, v):
    """tau(lam) v = A(lam) v + D(lam) v."""
    return monodromy_apply(model, "A", lam, v) + monodromy_apply(model, "D", lam, v)


# ---------------------------------------------------------------------------
# Hamiltonians

# S.S two-site matrix: sum_alpha S^alpha x S^alpha = P/2 - I/4
HEIS4 = 0.5 * PERM4 - 0.25 * np.eye(4, dtype=complex)


def hamiltonian_apply(model, v):
    """Closed-chain Hamiltonian.

    XXX:  H = sum_k S_k . S_{k+1}  (periodic, spectrum offset L/4 included).
    XXZ:  H = sum_k Rhat^{(q)}_{k,k+1}  (periodic, no -qL offset here).
    """
    _require_lattice(model)
    v = np.asarray(v, dtype=complex)
    L = model.L
    out = np.zeros_like(v)
    local = HEIS4 if model.family == "xxx" else rhat_q(model.q)
    for k in range(1, L + 1):
        k2 = 1 if k == L else k + 1
        out += hilbert.apply_two_site(L, local, k, k2, v)
    return out


def xxx_energy_from_roots(L, roots):
    """Closed-form XXX energy E = L/4 + sum_i 1/(2 lam_i (lam_i + 1)).

    Equals the logarithmic-derivative formula on-shell but stays finite at
    lam_i = -1/2, which is a legitimate Bethe root (e.g. L=4, M=1).
    """
    e = L / 4.0 + 0.0j
    for lam in roots:
        if lam == 0 or lam == -1.0:
            raise SingularRootError("root at a pole of the energy formula")
        e += 1.0 / (2.0 * lam * (lam + 1.0))
    return e


def lambda_derivative_energy(model, roots):
    """XXX energy from the transfer-matrix eigenvalue:
    E = (1/2) Lambda'(lam*) / Lambda(lam*) - L/4, computed analytically at
    lam* = 0, the point where L(lam) = lam*Id + P reduces to the permutation
    (a(0) = 1, d(0) = 0), so that tau(0) is the translation operator.

    Raises SingularRootError when some root lies at 0 or -1, where a factor
    of the closed-form eigenvalue has a pole or zero at lam* = 0; use
    xxx_energy_from_roots there instead (it has the same singularities, but
    callers may prefer to catch and report).
    """
    if model.family != "xxx":
        raise ValueError("logarithmic-derivative energy implemented for XXX only")
    L = model.L
    if L < 2:
        raise ValueError("need at least two sites")
    roots = [complex(r) for r in roots]
    for r in roots:
        if abs(r) < 1e-12 or abs(r + 1.0) < 1e-12:
            raise SingularRootError("singular root configuration: root at 0 or -1")
    # Lambda(lam) = (lam+1)^L prod (r-lam+1)/(r-lam) + lam^L prod (lam-r+1)/(lam-r).
    # At lam = 0 the second term and its derivative vanish (L >= 2), so only
    # the first term contributes to the logarithmic derivative.
    t1 = 1.0 + 0.0j
    dlog1 = complex(L)
    for r in roots:
        t1 *= (r + 1.0) / r
        dlog1 += -1.0 / (r + 1.0) + 1.0 / r
    if abs(t1) < 1e-300:
        raise SingularRootError("transfer eigenvalue vanishes at lam = 0")
    return 0.5 * dlog1 - L / 4.0


# ---------------------------------------------------------------------------
# dense helpers (small L oracles)


def dense_monodromy_entry(model, entry, lam):
    return hilbert.dense_operator(model.L, lambda v: monodromy_apply(model, entry, lam, v))


def dense_transfer(model, lam):
    return hilbert.dense_operator(model.L, lambda v: transfer_apply(model, lam, v))


def dense_hamiltonian(model):
    return hilbert.dense_operator(model.L, lambda v: hamiltonian_apply(model, v))
