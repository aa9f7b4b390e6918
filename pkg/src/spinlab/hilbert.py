"""Computational basis for a spin-1/2 chain, local operators and lattice fermions.

Basis convention for a chain of L sites:
  - basis index b runs over 0 .. 2^L - 1,
  - bit (L-k) of b stores the state of site k (k = 1..L),
  - bit value 0 means spin-up |0>_k (first basis vector of C^2), 1 means spin-down,
  - hence the all-up pseudovacuum sits at index 0 and site 1 is the most
    significant bit.

Fermions are defined through the Jordan-Wigner transformation
  psi_k    = (prod_{j<k} sigma^z_j) sigma^+_k       (annihilates a down spin)
  psibar_k = (prod_{j<k} sigma^z_j) sigma^-_k       (creates a down spin)
so the string sign of an operator at site k is (-1)^(number of down spins at
sites j < k).

All operations are pure: they return new amplitude arrays and never mutate
their input.
"""

import numpy as np

MAX_SITES = 16

# Pauli matrices in the (up, down) basis
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)    # down -> up
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)   # up -> down
ID2 = np.eye(2, dtype=complex)

# permutation of two C^2 factors, basis |s1 s2> with index 2*s1 + s2
PERM4 = np.zeros((4, 4), dtype=complex)
for _a in range(2):
    for _b in range(2):
        PERM4[2 * _b + _a, 2 * _a + _b] = 1.0


def check_sites(L):
    if not (2 <= L <= MAX_SITES):
        raise ValueError("chain length L=%r outside supported range 2..%d" % (L, MAX_SITES))


def dim(L):
    return 1 << L


def vacuum(L):
    """All-spin-up pseudovacuum |0>."""
    check_sites(L)
    v = np.zeros(1 << L, dtype=complex)
    v[0] = 1.0
    return v


def index_of_down_sites(L, sites):
    """Basis index of the state with down spins exactly at the given sites."""
    idx = 0
    for k in sites:
        if not (1 <= k <= L):
            raise ValueError("site %r out of range 1..%d" % (k, L))
        idx |= 1 << (L - k)
    return idx


def popcount(a):
    """Number of set bits, elementwise, for a nonnegative integer array."""
    a = np.asarray(a).copy()
    c = np.zeros_like(a)
    while a.any():
        c += a & 1
        a >>= 1
    return c


def down_counts(L):
    """Array of down-spin (magnon) counts for every basis index."""
    return popcount(np.arange(1 << L))


def magnon_sector(L, M):
    """Sorted basis indices with exactly M down spins."""
    idx = np.arange(1 << L)
    return idx[popcount(idx) == M]


def apply_one_site(L, mat, k, vec):
    """Apply a 2x2 matrix at site k."""
    check_sites(L)
    if not (1 <= k <= L):
        raise ValueError("site %r out of range 1..%d" % (k, L))
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (2, 2):
        raise ValueError("one-site operator must be 2x2, got %r" % (mat.shape,))
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != (1 << L,):
        raise ValueError("state vector has wrong length")
    pos = L - k
    idx = np.arange(1 << L)
    bit = (idx >> pos) & 1
    out = np.zeros_like(vec)
    for new in range(2):
        for old in range(2):
            a = mat[new, old]
            if a == 0:
                continue
            src = idx[bit == old]
            tgt = (src & ~(1 << pos)) | (new << pos)
            out[tgt] += a * vec[src]
    return out


def apply_two_site(L, mat, k1, k2, vec):
    """Apply a 4x4 matrix on the ordered pair of sites (k1, k2).

    The local index is 2*s_{k1} + s_{k2}.  The pair may wrap around the
    boundary, e.g. (L, 1).
    """
    check_sites(L)
    for k in (k1, k2):
        if not (1 <= k <= L):
            raise ValueError("site %r out of range 1..%d" % (k, L))
    if k1 == k2:
        raise ValueError("two-site operator needs distinct sites")
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (4, 4):
        raise ValueError("two-site operator must be 4x4, got %r" % (mat.shape,))
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != (1 << L,):
        raise ValueError("state vector has wrong length")
    p1, p2 = L - k1, L - k2
    idx = np.arange(1 << L)
    loc = 2 * ((idx >> p1) & 1) + ((idx >> p2) & 1)
    clear = ~((1 << p1) | (1 << p2))
    out = np.zeros_like(vec)
    for new in range(4):
        n1, n2 = new >> 1, new & 1
        put = (n1 << p1) | (n2 << p2)
        for old in range(4):
            a = mat[new, old]
            if a == 0:
                continue
            src = idx[loc == old]
            out[(src & clear) | put] += a * vec[src]
    return out


def apply_local(L, mat, sites, vec):
    """Dispatch on arity: sites is (k,) for one-site or (k1, k2) for two-site."""
    sites = tuple(sites)
    if len(sites) == 1:
        return apply_one_site(L, mat, sites[0], vec)
    if len(sites) == 2:
        return apply_two_site(L, mat, sites[0], sites[1], vec)
    raise ValueError("only one- and two-site operators are supported")


def _string_signs(L, k, indices):
    """Jordan-Wigner string sign (-1)^(# down spins at sites j < k)."""
    mask = ((1 << L) - 1) & ~((1 << (L - k + 1)) - 1)
    return 1.0 - 2.0 * (popcount(indices & mask) & 1)


def apply_create(L, k, vec):
    """psibar_k = (prod_{j<k} sigma^z_j) sigma^-_k : flips site k up -> down."""
    check_sites(L)
    if not (1 <= k <= L):
        raise ValueError("site %r out of range 1..%d" % (k, L))
    vec = np.asarray(vec, dtype=complex)
    pos = L - k
    idx = np.arange(1 << L)
    src = idx[((idx >> pos) & 1) == 0]
    out = np.zeros_like(vec)
    out[src | (1 << pos)] = _string_signs(L, k, src) * vec[src]
    return out


def apply_annihilate(L, k, vec):
    """psi_k = (prod_{j<k} sigma^z_j) sigma^+_k : flips site k down -> up."""
    check_sites(L)
    if not (1 <= k <= L):
        raise ValueError("site %r out of range 1..%d" % (k, L))
    vec = np.asarray(vec, dtype=complex)
    pos = L - k
    idx = np.arange(1 << L)
    src = idx[((idx >> pos) & 1) == 1]
    out = np.zeros_like(vec)
    out[src ^ (1 << pos)] = _string_signs(L, k, src) * vec[src]
    return out


def apply_number(L, k, vec):
    """N_k = psibar_k psi_k : projector onto down spin at site k (string cancels)."""
    check_sites(L)
    vec = np.asarray(vec, dtype=complex)
    pos = L - k
    idx = np.arange(1 << L)
    out = vec.copy()
    out[((idx >> pos) & 1) == 0] = 0.0
    return out


def apply_fermion(L, k, kind, vec):
    """kind: 'create' for psibar_k, 'annihilate' for psi_k."""
    if kind == "create":
        return apply_create(L, k, vec)
    if kind == "annihilate":
        return apply_annihilate(L, k, vec)
    raise ValueError("unknown fermion kind %r" % (kind,))


def inner(u, v):
    """Hermitian inner product <u, v>."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError("state vectors live on different bases")
    return np.vdot(u, v)


def norm(v):
    return np.linalg.norm(v)


def collinearity(u, v):
    """|<u,v>| / (|u| |v|); 0 if either vector is numerically null."""
    nu, nv = norm(u), norm(v)
    if nu < 1e-14 or nv < 1e-14:
        return 0.0
    return abs(inner(u, v)) / (nu * nv)


def dense_operator(L, apply_fn):
    """Dense 2^L x 2^L matrix of a linear map given by its action on vectors."""
    n = 1 << L
    mat = np.zeros((n, n), dtype=complex)
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1.0
        mat[:, j] = apply_fn(e)
    return mat


def permutation_via_fermions(L, k, vec):
    """P_{k,k+1} assembled from fermions:
    I + psibar_{k+1} psi_k + psibar_k psi_{k+1} - N_k - N_{k+1} + 2 N_k N_{k+1}.
    """
    k2 = k + 1
    out = vec.astype(complex).copy()
    out += apply_create(L, k2, apply_annihilate(L, k, vec))
    out += apply_create(L, k, apply_annihilate(L, k2, vec))
    out -= apply_number(L, k, vec)
    out -= apply_number(L, k2, vec)
    out += 2.0 * apply_number(L, k, apply_number(L, k2, vec))
    return out


def verify_fermion_identities(L, seed=0):
    """Residuals of the Jordan-Wigner identity suite, as dense operators.

    Returns a dict of max elementwise residuals:
      xx:      psibar_{k+1}psi_k + psibar_k psi_{k+1} + psibar_k psibar_{k+1}
               + psi_{k+1}psi_k                        = sigma^x_k sigma^x_{k+1}
      yy:      same with minus on the pair terms       = sigma^y_k sigma^y_{k+1}
      z:       [psi_k, psibar_k]                       = sigma^z_k
      zz:      (1-2N_k)(1-2N_{k+1})                    = sigma^z_k sigma^z_{k+1}
      anticom: {psibar_i, psi_j} = delta_ij, {psi,psi} = {psibar,psibar} = 0
      perm:    fermionic P_{k,k+1} = permutation matrix
      nilpotent: psi_k^2 = psibar_k^2 = 0
    """
    check_sites(L)
    rng = np.random.default_rng(seed)
    del rng  # identities are checked as dense operators; no randomness needed
    res = {"xx": 0.0, "yy": 0.0, "z": 0.0, "zz": 0.0,
           "anticom": 0.0, "perm": 0.0, "nilpotent": 0.0}

    def op(fn):
        return dense_operator(L, fn)

    create = [None] + [op(lambda v, k=k: apply_create(L, k, v)) for k in range(1, L + 1)]
    annih = [None] + [op(lambda v, k=k: apply_annihilate(L, k, v)) for k in range(1, L + 1)]

    for k in range(1, L):
        pair = create[k + 1] @ annih[k] + create[k] @ annih[k + 1]
        off = create[k] @ create[k + 1] + annih[k + 1] @ annih[k]
        sx = op(lambda v, k=k: apply_one_site(L, SIGMA_X, k, apply_one_site(L, SIGMA_X, k + 1, v)))
        sy = op(lambda v, k=k: apply_one_site(L, SIGMA_Y, k, apply_one_site(L, SIGMA_Y, k + 1, v)))
        res["xx"] = max(res["xx"], np.abs(pair + off - sx).max())
        res["yy"] = max(res["yy"], np.abs(pair - off - sy).max())
        szz = op(lambda v, k=k: apply_one_site(L, SIGMA_Z, k, apply_one_site(L, SIGMA_Z, k + 1, v)))
        nk = create[k] @ annih[k]
        nk1 = create[k + 1] @ annih[k + 1]
        eye = np.eye(1 << L)
        res["zz"] = max(res["zz"], np.abs((eye - 2 * nk) @ (eye - 2 * nk1) - szz).max())
        pf = op(lambda v, k=k: permutation_via_fermions(L, k, v))
        pm = op(lambda v, k=k: apply_two_site(L, PERM4, k, k + 1, v))
        res["perm"] = max(res["perm"], np.abs(pf - pm).max())

    for k in range(1, L + 1):
        sz = op(lambda v, k=k: apply_one_site(L, SIGMA_Z, k, v))
        res["z"] = max(res["z"], np.abs(annih[k] @ create[k] - create[k] @ annih[k] - sz).max())
        res["nilpotent"] = max(res["nilpotent"],
                               np.abs(annih[k] @ annih[k]).max(),
                               np.abs(create[k] @ create[k]).max())

    eye = np.eye(1 << L)
    for i in range(1, L + 1):
        for j in range(1, L + 1):
            acp = create[i] @ annih[j] + annih[j] @ create[i]
            target = eye if i == j else 0.0
            res["anticom"] = max(res["anticom"],
                                 np.abs(acp - target).max(),
                                 np.abs(annih[i] @ annih[j] + annih[j] @ annih[i]).max(),
                                 np.abs(create[i] @ create[j] + create[j] @ create[i]).max())
    return res
