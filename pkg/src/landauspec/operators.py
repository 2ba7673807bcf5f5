"""Truncated operator matrices and explicit eigenvalue formulas.

The perturbed magnetic Hamiltonian is assembled in the level basis whose
matrix elements are pairings of the pulled-back symbol against tensor
products of Wigner pair kernels, with unit-modulus phases i^(k-l-q+r).
Radial symbols get dedicated fast paths: their operators are diagonal in
the Hermite basis and the eigenvalues reduce to half-line Laguerre-type
integrals, evaluated in log space wherever values dive below the double
underflow threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from . import quadrature, symbols
from .specfun import laguerre, laguerre_fn_iter
from .wigner import wigner_pair_diagonal_sweep


class TruncationError(RuntimeError):
    """The requested spectral data is not resolved at this truncation."""


@dataclass(frozen=True)
class TruncatedOperator:
    """Finite Hermitian matrix in a named orthonormal basis."""

    basis: str                           # 'hermite' | 'landau'
    matrix: np.ndarray = field(repr=False)
    b: float = 0.0
    levels: int = 0                      # landau basis: number of levels Q
    radial: int = 0                      # landau basis: radial indices K per level
    provenance: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def hermiticity_defect(self):
        return float(np.abs(self.matrix - self.matrix.conj().T).max())


@dataclass
class SpectrumReport:
    """Sorted eigenvalues with per-gap counts for the level basis."""

    eigenvalues: np.ndarray
    basis: str
    b: float = 0.0
    levels: int = 0
    radial: int = 0
    cluster_tol: float = 0.0
    windows: list = field(default_factory=list)   # dicts: q, side, lo, hi, count
    provenance: dict = field(default_factory=dict)

    def gap_count(self, q, side):
        for w in self.windows:
            if w["q"] == q and w["side"] == side:
                return w["count"]
        raise KeyError(f"no window for level {q} side {side!r}")

    def recount(self):
        """Recompute every window count from the raw eigenvalues."""
        return [
            dict(w, count=_count_open(self.eigenvalues, w["lo"], w["hi"], self.cluster_tol))
            for w in self.windows
        ]

    def clusters(self):
        """(value, multiplicity) pairs, grouping eigenvalues within cluster_tol."""
        out = []
        for lam in self.eigenvalues:
            if out and abs(lam - out[-1][0]) <= self.cluster_tol:
                v, m = out[-1]
                out[-1] = ((v * m + lam) / (m + 1), m + 1)
            else:
                out.append((lam, 1))
        return out


def _count_open(eigs, lo, hi, tol):
    return int(np.count_nonzero((eigs > lo + tol) & (eigs < hi - tol)))


# ---------------------------------------------------------------------------
# dense matrices in the Hermite basis


def kernel_pair_matrix(v, n, order=None):
    """Matrix of pairings <v, Psi_{k,l}> for k, l < n, by tensor quadrature.

    One Laguerre recurrence sweep per diagonal supplies all pair-kernel
    values; for real symbols only the lower triangle is integrated.
    """
    order = order or max(quadrature.DEFAULT_ORDER_R2, 2 * n + 16)
    rule = quadrature.gauss_hermite(order)
    p = rule.nodes
    fw = rule.flat_weights
    x = p[:, None]
    xi = p[None, :]
    weighted = np.asarray(v.evaluate(x, xi)) * fw[:, None] * fw[None, :]
    M = np.zeros((n, n), dtype=complex)
    for d in range(n):
        # conjugated values conj(Psi_{m+d, m}) = Psi_{m, m+d}
        for m, val in wigner_pair_diagonal_sweep(n - d, x, xi, d, conjugate=True):
            M[m + d, m] = np.einsum("ij,ij->", weighted, val)
        if d == 0:
            continue
        if v.real:
            idx = np.arange(n - d)
            M[idx, idx + d] = np.conj(M[idx + d, idx])
        else:
            for m, val in wigner_pair_diagonal_sweep(n - d, x, xi, d, conjugate=False):
                M[m, m + d] = np.einsum("ij,ij->", weighted, val)
    return M


def weyl_matrix(v, n, order=None, check=False):
    """Truncated Weyl operator of a 2-D symbol in the Hermite basis.

    Entry (k, l) is <op(v) psi_l, psi_k> = <v, Psi_{k,l}>; Hermitian for real
    symbols.  With check=True the assembly is repeated at double order and a
    disagreement raises QuadratureAccuracyError.
    """
    if n < 1:
        raise ValueError("need at least one basis function")
    order = order or max(quadrature.DEFAULT_ORDER_R2, 2 * n + 16)
    M = kernel_pair_matrix(v, n, order=order)
    if check:
        M2 = kernel_pair_matrix(v, n, order=2 * order)
        defect = np.abs(M2 - M).max()
        if defect > 1e-9 * max(1.0, np.abs(M2).max()):
            raise quadrature.QuadratureAccuracyError(
                f"pairing matrix moved by {defect:.3e} under order doubling")
        M = M2
    return TruncatedOperator("hermite", M, provenance={
        "basis": "hermite", "size": n, "order": order})


def hilbert_schmidt_check(v, n, order=None):
    """(sum of squared entries of the truncation, scaled squared symbol norm).

    The truncated Frobenius mass converges upward to (2 pi)^(-1) ||v||^2.
    """
    M = weyl_matrix(v, n, order=order).matrix
    mat = float(np.sum(np.abs(M) ** 2))
    sym = float(np.real(quadrature.integrate_r2(
        lambda x, xi: np.abs(v.evaluate(x, xi)) ** 2,
        order=order or max(quadrature.DEFAULT_ORDER_R2, 2 * n + 16))))
    return mat, sym / (2.0 * np.pi)


def banded_structure_check(v, n, order=None):
    """(max |entry| inside the declared angular band, max outside)."""
    width = v.bandwidth
    M = weyl_matrix(v, n, order=order).matrix
    k = np.arange(n)
    inside = np.abs(k[:, None] - k[None, :]) <= width
    a = np.abs(M)
    max_in = float(a[inside].max())
    max_out = float(a[~inside].max()) if (~inside).any() else 0.0
    return max_in, max_out


# ---------------------------------------------------------------------------
# radial fast paths: explicit eigenvalue sequences


def weyl_radial_eigs(profile, count, order=None):
    """Eigenvalues mu_k, k < count, of the Weyl operator with a radial symbol.

    mu_k = ((-1)^k / 2) int_0^inf R(t/2) L_k(t) e^(-t/2) dt, evaluated in the
    weighted form (-1)^k int R(u) Lcal_k(2u) du with |Lcal_k| <= 1; a single
    degree sweep serves every k at once.  Compact support switches to a
    finite Gauss-Legendre panel.
    """
    if profile.compact_support:
        bound = profile.support_bound
        rule = quadrature.gauss_legendre_panel(
            order or max(200, count // 2 + 64), 0.0, bound)
        u = rule.nodes
        c = rule.weights * np.atleast_1d(profile(u))
    else:
        rule = quadrature.gauss_laguerre(order or max(quadrature.DEFAULT_ORDER_HALFLINE,
                                                      count // 2 + 400))
        u = rule.nodes
        c = rule.flat_weights * np.atleast_1d(profile(u))
    mu = np.empty(count)
    for k, val in enumerate(laguerre_fn_iter(0.0, 2.0 * u, count - 1)):
        mu[k] = (-1.0) ** k * np.dot(c, val)
    return mu


def weyl_radial_eigs_fourier(profile_hat, count, order=None):
    """Same eigenvalues from the Fourier side: mu_k = int Rhat(2t) Lcal_k(t) dt."""
    if profile_hat.compact_support:
        bound = profile_hat.support_bound / 2.0
        rule = quadrature.gauss_legendre_panel(
            order or max(200, count // 2 + 64), 0.0, bound)
        t = rule.nodes
        c = rule.weights * np.atleast_1d(profile_hat(2.0 * t))
    else:
        rule = quadrature.gauss_laguerre(order or max(quadrature.DEFAULT_ORDER_HALFLINE,
                                                      count // 2 + 400))
        t = rule.nodes
        c = rule.flat_weights * np.atleast_1d(profile_hat(2.0 * t))
    mu = np.empty(count)
    for k, val in enumerate(laguerre_fn_iter(0.0, t, count - 1)):
        mu[k] = np.dot(c, val)
    return mu


_LAPLACE_MIN_K = 20
_LAPLACE_GH_ORDER = 160


def _exp_decay_params(profile, scale):
    """(amplitude, gamma_eff, beta) when R(scale t) = A exp(-gamma_eff t^beta)."""
    if profile.kind == "gaussian":
        return profile.amplitude, profile.rate * profile.arg_scale * scale, 1.0
    if profile.kind == "exp_beta":
        return (profile.amplitude,
                profile.gamma * (profile.arg_scale * scale) ** profile.beta,
                profile.beta)
    return None


def _gamma_weight_log_moment(profile, k, scale, order=None):
    """ln of int_0^inf R(scale * t) t^k e^(-t) dt / k! for positive profiles."""
    if profile.compact_support:
        bound = profile.support_bound / scale
        rule = quadrature.gauss_legendre_panel(order or max(240, (k + 120) // 2), 0.0, bound)
        t = rule.nodes
        with np.errstate(divide="ignore"):
            terms = np.log(rule.weights) + profile.log_value(scale * t) \
                + k * np.log(t) - t
        return float(logsumexp(terms)) - gammaln(k + 1.0)
    exp_params = _exp_decay_params(profile, scale)
    if exp_params is not None and exp_params[2] >= 1.0 and k >= _LAPLACE_MIN_K:
        return _laplace_log_moment(exp_params, k)
    rule = quadrature.gauss_laguerre(order or max(256, 64 + k // 4), float(k))
    t = rule.nodes
    terms = np.log(rule.flat_weights) + profile.log_value(scale * t) + k * np.log(t) - t
    return float(logsumexp(terms)) - gammaln(k + 1.0)


def _laplace_log_moment(exp_params, k):
    """Saddle-centered Gauss-Hermite for A exp(-gam t^beta) factors, beta >= 1.

    The integrand exp(k ln t - t - gam t^beta) concentrates near its maximum
    t*, far below the alpha = k Laguerre nodes once the extra decay is strong;
    the matched-curvature Hermite rule stays machine-accurate for k >= 20.
    """
    amp, gam, beta = exp_params
    t = math.sqrt(k + 1.0) if beta > 1.0 else k / (1.0 + gam)
    for _ in range(200):
        p1 = k / t - 1.0 - gam * beta * t ** (beta - 1.0)
        p2 = -k / t ** 2 - gam * beta * (beta - 1.0) * t ** (beta - 2.0)
        t_new = t - p1 / p2
        if t_new <= 0:
            t_new = 0.5 * t
        if abs(t_new - t) < 1e-14 * t:
            t = t_new
            break
        t = t_new
    sigma = 1.0 / math.sqrt(k / t ** 2 + gam * beta * (beta - 1.0) * t ** (beta - 2.0))
    rule = quadrature.gauss_hermite(_LAPLACE_GH_ORDER)
    tt = t + sigma * rule.nodes
    good = tt > 0
    tt = tt[good]
    phi = k * np.log(tt) - tt - gam * tt ** beta
    return float(logsumexp(phi + np.log(rule.flat_weights[good] * sigma))) \
        + math.log(amp) - gammaln(k + 1.0)


def _gamma_weight_moment(profile, k, scale, order=None):
    """int_0^inf R(scale * t) t^k e^(-t) dt / k! in linear space (signed profiles)."""
    exp_params = _exp_decay_params(profile, scale)
    if exp_params is not None and exp_params[2] >= 1.0 and k >= _LAPLACE_MIN_K \
            and exp_params[0] > 0:
        return math.exp(_laplace_log_moment(exp_params, k))
    if profile.compact_support:
        bound = profile.support_bound / scale
        rule = quadrature.gauss_legendre_panel(order or max(240, (k + 120) // 2), 0.0, bound)
        t = rule.nodes
        density = np.exp(k * np.log(t) - t - gammaln(k + 1.0))
        return float(np.dot(rule.weights, np.atleast_1d(profile(scale * t)) * density))
    rule = quadrature.gauss_laguerre(order or max(256, 64 + k // 4), float(k))
    t = rule.nodes
    # flat weights carry no envelope; t^k e^-t / k! re-attached in log form
    density = np.exp(np.log(rule.flat_weights) + k * np.log(t) - t - gammaln(k + 1.0))
    return float(np.dot(density, np.atleast_1d(profile(scale * t))))


def antiwick_radial_eigs(profile, count, order=None, log_scale=False):
    """Eigenvalues of the anti-Wick operator with a radial symbol.

    mu_k = int_0^inf R(2t) t^k e^(-t) / k! dt.  With log_scale=True the
    natural logs are returned (positive profiles only), exact far below the
    underflow threshold.
    """
    if log_scale:
        return np.array([_gamma_weight_log_moment(profile, k, 2.0, order=order)
                         for k in range(count)])
    return np.array([_gamma_weight_moment(profile, k, 2.0, order=order)
                     for k in range(count)])


def toeplitz_radial_eigs(zeta, q, b, count, order=None, log_scale=False):
    """Diagonal of the level-q compression of a radial multiplier zeta.

    nu_k = (m!/M!) int_0^inf R(2t/b) t^(|k-q|) [L_m^(|k-q|)(t)]^2 e^(-t) dt
    with m = min(k, q), M = max(k, q); for q = 0 this is the plain Gamma-
    weight moment.  log_scale returns ln nu_k for positive profiles.
    """
    if b <= 0:
        raise ValueError("field strength must be positive")
    scale = 2.0 / b
    if q == 0:
        if log_scale:
            return np.array([_gamma_weight_log_moment(zeta, k, scale, order=order)
                             for k in range(count)])
        return np.array([_gamma_weight_moment(zeta, k, scale, order=order)
                         for k in range(count)])
    out = np.empty(count)
    for k in range(count):
        m = min(k, q)
        d = abs(k - q)
        rule = quadrature.gauss_laguerre(order or max(160, 64 + d // 4 + 2 * m), float(d))
        t = rule.nodes
        lag = laguerre(m, float(d), t)
        if log_scale:
            with np.errstate(divide="ignore"):
                terms = np.log(rule.flat_weights) + zeta.log_value(scale * t) \
                    + d * np.log(t) - t + 2.0 * np.log(np.abs(lag))
            out[k] = logsumexp(terms) + gammaln(m + 1.0) - gammaln(m + d + 1.0)
        else:
            density = np.exp(np.log(rule.flat_weights) + d * np.log(t) - t
                             + gammaln(m + 1.0) - gammaln(m + d + 1.0))
            out[k] = np.dot(density, np.atleast_1d(zeta(scale * t)) * lag * lag)
    return out


# ---------------------------------------------------------------------------
# positivity criteria for radial symbols


@dataclass(frozen=True)
class SignReport:
    coefficients: np.ndarray
    all_nonneg: bool
    first_negative_index: int = -1


def _sign_report(values, tol=None):
    values = np.asarray(values)
    if tol is None:
        tol = 1e-10 * max(1.0, float(np.abs(values).max()))
    neg = np.nonzero(values < -tol)[0]
    if neg.size:
        return SignReport(values, False, int(neg[0]))
    return SignReport(values, True)


def positivity_laguerre_weyl(profile, count, order=None, tol=None):
    """Nonnegativity of the Weyl operator via its Laguerre coefficients.

    The operator is nonnegative exactly when every coefficient
    c_k = 2 mu_k is nonnegative.
    """
    return _sign_report(2.0 * weyl_radial_eigs(profile, count, order=order), tol=tol)


def positivity_laguerre_antiwick(profile, count, order=None, tol=None):
    """Nonnegativity of the anti-Wick operator via its Gamma-weight moments."""
    return _sign_report(antiwick_radial_eigs(profile, count, order=order), tol=tol)


# ---------------------------------------------------------------------------
# the perturbed Hamiltonian in the level basis


def landau_levels(b, q_count):
    return b * (2.0 * np.arange(q_count) + 1.0)


def assemble_hv(V, levels, radial, sign=+1, order=None):
    """Truncated matrix of H = diag(Landau levels) + sign * op(V).

    Separable symbols factor each 4-D pairing into two 2-D pairing matrices;
    generic symbols are integrated by full 4-D tensor quadrature, capped at
    levels * radial <= 48 per side.  The i^(k-l-q+r) phases enter as a
    diagonal unitary conjugation, so they never change the spectrum but are
    kept so the matrix is literally the one in the level basis.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    b = V.b
    Q, K = int(levels), int(radial)
    dim = Q * K
    if V.separable:
        M0 = np.zeros((Q, K, Q, K), dtype=complex)
        for c, A, B in V.terms:
            PA = kernel_pair_matrix(A, Q, order=order)
            PB = kernel_pair_matrix(B, K, order=order)
            M0 += c * np.einsum("qr,kl->qkrl", PA, PB)
        M0 = M0.reshape(dim, dim)
    else:
        if dim > 48:
            raise ValueError("generic 4-D quadrature is capped at levels*radial <= 48")
        M0 = _assemble_generic(V, Q, K, order=order)
    pow4 = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])
    D = pow4[(np.arange(K)[None, :] - np.arange(Q)[:, None]) % 4].reshape(dim)  # i^(k-q)
    M = D[:, None] * M0 * np.conj(D)[None, :]
    lam = np.repeat(landau_levels(b, Q), K)
    H = np.diag(lam).astype(complex) + sign * M
    # truncation trust region: couplings on the truncation boundary bound
    # what was discarded; eigenvalues closer to a level than 10x that are
    # not to be trusted for gap counting
    boundary = 0.0
    if dim:
        A = np.abs(M0.reshape(Q, K, Q, K))
        boundary = max(float(A[:, K - 1, :, :].max()), float(A[:, :, :, K - 1].max()),
                       float(A[Q - 1].max()), float(A[:, :, Q - 1, :].max()))
    return TruncatedOperator("landau", H, b=b, levels=Q, radial=K, provenance={
        "basis": "landau", "levels": Q, "radial": K, "sign": sign,
        "order": order, "max_coupling": float(np.abs(M0).max()) if dim else 0.0,
        "trust_radius": 10.0 * boundary})


def _assemble_generic(V, Q, K, order=None):
    rule = quadrature.gauss_hermite(order or max(quadrature.DEFAULT_ORDER_R4,
                                                 2 * max(Q, K) + 16))
    p = rule.nodes
    fw = rule.flat_weights
    n = len(p)
    vals = V.evaluate_pulled(p[:, None, None, None], p[None, :, None, None],
                             p[None, None, :, None], p[None, None, None, :])
    vals = vals * fw[:, None, None, None] * fw[None, :, None, None] \
        * fw[None, None, :, None] * fw[None, None, None, :]
    G1 = np.empty((Q, Q, n, n), dtype=complex)   # conj(Psi_{q,r}(x, xi))
    for d in range(Q):
        for m, val in wigner_pair_diagonal_sweep(Q - d, p[:, None], p[None, :], d,
                                                 conjugate=True):
            G1[m + d, m] = val
            if d:
                G1[m, m + d] = np.conj(val)
    G2 = np.empty((K, K, n, n), dtype=complex)
    if K == Q:
        G2 = G1
    else:
        for d in range(K):
            for m, val in wigner_pair_diagonal_sweep(K - d, p[:, None], p[None, :], d,
                                                     conjugate=True):
                G2[m + d, m] = val
                if d:
                    G2[m, m + d] = np.conj(val)
    half = np.einsum("xyuv,qrxu->qryv", vals, G1)
    M0 = np.einsum("qryv,klyv->qkrl", half, G2)
    return M0.reshape(Q * K, Q * K)


def eig_hermitian(T, provenance=None):
    """Full symmetric eigendecomposition of a truncated operator.

    Checks hermiticity against 1e-10 of the Frobenius norm, clusters
    degenerate eigenvalues at the same scale, and for the level basis
    populates the spectral-gap window counts.
    """
    M = T.matrix
    norm = float(np.linalg.norm(M)) or 1.0
    defect = T.hermiticity_defect()
    if defect > 1e-10 * norm:
        raise ValueError(f"matrix is not Hermitian: defect {defect:.3e}")
    eigs = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    tol = 1e-10 * norm
    windows = []
    if T.basis == "landau" and T.levels:
        lam = landau_levels(T.b, T.levels + 1)
        for q in range(T.levels):
            lo = lam[q - 1] if q >= 1 else -np.inf
            windows.append({
                "q": q, "side": "-", "lo": lo, "hi": lam[q],
                "count": _count_open(eigs, lo, lam[q], tol)})
            windows.append({
                "q": q, "side": "+", "lo": lam[q], "hi": lam[q + 1],
                "count": _count_open(eigs, lam[q], lam[q + 1], tol)})
    return SpectrumReport(eigs, T.basis, b=T.b, levels=T.levels, radial=T.radial,
                          cluster_tol=tol, windows=windows,
                          provenance=dict(T.provenance, **(provenance or {})))


# ---------------------------------------------------------------------------
# prescribed gap eigenvalues


def prescribed_gap_symbol(b, multiplicities, level_scales, index_scales):
    """Separable Schwartz symbol whose negative perturbation fills the gaps
    below chosen Landau levels with exactly the prescribed eigenvalue counts.

    multiplicities[q] eigenvalues are planted below level q at
    lam_q - level_scales[q] * index_scales[k]; level_scales must be strictly
    decreasing (and < 2b except at level 0), index_scales strictly
    decreasing within (0, 1).  Returns (symbol, predictions) with
    predictions a list of (q, k, eigenvalue).
    """
    if b <= 0:
        raise ValueError("field strength must be positive")
    multiplicities = [int(m) for m in multiplicities]
    if any(m < 0 for m in multiplicities):
        raise ValueError("multiplicities must be nonnegative")
    active = [q for q, m in enumerate(multiplicities) if m > 0]
    used_levels = [level_scales[q] for q in active]
    for q, c in zip(active, used_levels):
        if c <= 0:
            raise ValueError("level scales must be positive")
        if q >= 1 and c >= 2.0 * b:
            raise ValueError("level scales beyond level 0 must stay below 2b")
    if any(x <= y for x, y in zip(used_levels, used_levels[1:])):
        raise ValueError("level scales must be strictly decreasing")
    k_max = max(multiplicities, default=0)
    used_idx = list(index_scales[:k_max])
    if len(used_idx) < k_max:
        raise ValueError("not enough index scales")
    if any(not 0.0 < c < 1.0 for c in used_idx):
        raise ValueError("index scales must lie in (0, 1)")
    if any(x <= y for x, y in zip(used_idx, used_idx[1:])):
        raise ValueError("index scales must be strictly decreasing")

    terms = []
    predictions = []
    lam = landau_levels(b, len(multiplicities))
    four_pi_sq = (2.0 * np.pi) ** 2
    for q in active:
        A = symbols.radial_symbol(symbols.diag_kernel_profile(q))
        for k in range(multiplicities[q]):
            C = level_scales[q] * index_scales[k]
            B = symbols.radial_symbol(symbols.diag_kernel_profile(k))
            terms.append((four_pi_sq * C, A, B))
            predictions.append((q, k, lam[q] - C))
    return symbols.separable_symbol(b, terms, frame="lab"), predictions


# ---------------------------------------------------------------------------
# two-sided eigenvalue sandwich against the compressed multiplier


def _gap_shifts(report, q, sign):
    """Distances of the level-q gap eigenvalues from the level, non-increasing."""
    lam = landau_levels(report.b, report.levels + 1)
    eigs = report.eigenvalues
    tol = report.cluster_tol
    if sign > 0:
        lo, hi = lam[q], lam[q + 1]
        sel = eigs[(eigs > lo + tol) & (eigs < hi - tol)]
        return np.sort(sel - lam[q])[::-1]
    lo = lam[q - 1] if q >= 1 else -np.inf
    sel = eigs[(eigs > lo + tol) & (eigs < lam[q] - tol)]
    return np.sort(lam[q] - sel)[::-1]


def birman_schwinger_check(zeta_profile, r, q, b, levels, radial,
                           k_range=(5, 30), eps_grid=None, k0_max=3, order=None):
    """Empirical two-sided sandwich between gap eigenvalues and the
    compressed-multiplier spectrum.

    Builds the standard fixture from a nonnegative radial weight zeta:
    omega = L_r(-Laplacian/2b) zeta, swap-and-scale to vt, Gaussian-smooth to
    v, and couple the level-q kernel to v.  Assembles H(+/-V), extracts the
    shifts around level q, and finds the smallest (eps, k0) with

        nu_{k+k0} / (1+eps) <= shift_k <= nu_{k-k0} / (1-eps)

    over the k range, nu the level-r compression of zeta.  Returns a report
    dict; raises TruncationError when the window is not resolved.
    """
    eps_grid = eps_grid if eps_grid is not None else [x / 100.0 for x in range(1, 26)]
    k_lo, k_hi = k_range
    omega = symbols.laguerre_laplacian(symbols.radial_symbol(zeta_profile), b, r)
    vt = symbols.radial_symbol(omega.profile.with_arg_scale(1.0 / b))
    v = symbols.antiwick_to_weyl(vt)
    level_kernel = symbols.radial_symbol(symbols.diag_kernel_profile(q))
    V = symbols.separable_symbol(b, [(2.0 * np.pi, level_kernel, v)], frame="lab")

    nu = toeplitz_radial_eigs(zeta_profile, r, b, k_hi + k0_max + 2, order=order)
    nu = np.sort(nu[nu > 0])[::-1]
    if not len(nu):
        return {"vacuous": True, "epsilon": 0.0, "k0": 0}

    shifts = {}
    for sign in (+1, -1):
        rep = eig_hermitian(assemble_hv(V, levels, radial, sign=sign, order=order))
        delta = _gap_shifts(rep, q, sign)
        if len(delta) <= k_hi:
            raise TruncationError(
                f"only {len(delta)} gap eigenvalues resolved; need {k_hi + 1}")
        shifts[sign] = delta

    ks = np.arange(k_lo, k_hi + 1)
    for k0 in range(k0_max + 1):
        for eps in eps_grid:
            ok = True
            for sign in (+1, -1):
                d = shifts[sign][ks]
                lower = nu[ks + k0] / (1.0 + eps)
                upper = nu[ks - k0] / (1.0 - eps)
                if not np.all((lower <= d) & (d <= upper)):
                    ok = False
                    break
            if ok:
                return {
                    "vacuous": False, "epsilon": float(eps), "k0": int(k0),
                    "shifts_plus": shifts[+1][: k_hi + 1],
                    "shifts_minus": shifts[-1][: k_hi + 1],
                    "nu": nu[: k_hi + k0_max + 1],
                }
    raise TruncationError("no (eps, k0) pair satisfied the sandwich on the range")
