"""Third-mode Fourier transforms and the tensor Schatten p-norm.

Tensors are plain ``ndarray`` objects of shape ``(n1, n2, n3)``; frontal
slice ``i`` is ``t[:, :, i]``.  The solver stores its graph tensors as
``(N, V, M)`` so every spectral slice is a cheap ``N x V`` matrix.
"""
import numpy as np

from ._errors import InvalidInputError, InvalidParameterError

SYMMETRY_TOL = 1e-8
SV_FLOOR = 1e-14


def _check_tensor(t, name="t"):
    t = np.asarray(t)
    if t.ndim != 3:
        raise InvalidInputError(f"{name} must be a 3-way array, got ndim={t.ndim}")
    if not np.all(np.isfinite(t)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return t


def _check_p(p):
    if not (0.0 < p <= 1.0):
        raise InvalidParameterError(f"p must lie in (0, 1], got {p!r}")


def fft_mode3(t):
    """DFT of every tube ``t[i, j, :]``."""
    t = _check_tensor(t)
    return np.fft.fft(t, axis=2)


def ifft_mode3(t):
    """Inverse of :func:`fft_mode3`, returning a real tensor.

    Raises
    ------
    InvalidInputError
        If the spectral tensor is not conjugate symmetric along the third
        mode, i.e. it cannot be the transform of a real tensor.
    """
    t = _check_tensor(t)
    n3 = t.shape[2]
    # slice k pairs with slice (n3 - k) mod n3
    mirror = np.conj(t[:, :, (-np.arange(n3)) % n3])
    scale = max(1.0, float(np.max(np.abs(t), initial=0.0)))
    if np.max(np.abs(t - mirror), initial=0.0) > SYMMETRY_TOL * scale:
        raise InvalidInputError("spectral tensor violates conjugate symmetry")
    return np.fft.ifft(t, axis=2).real


def _spectral_half(t):
    """Spectral slices ``0..n3//2`` as a batch of shape ``(h, n1, n2)``."""
    n3 = t.shape[2]
    spec = np.fft.rfft(t, axis=2)
    return np.moveaxis(spec, 2, 0), n3


def _half_weights(n3):
    # multiplicity of each half-spectrum slice in the full spectrum
    w = np.full(n3 // 2 + 1, 2.0)
    w[0] = 1.0
    if n3 % 2 == 0:
        w[-1] = 1.0
    return w


def schatten_p_norm(t, p):
    """Tensor Schatten p-norm ``(sum_i sum_j sigma_j(T_i)^p)^(1/p)``.

    ``T_i`` are the frontal slices of the third-mode DFT of ``t``.
    """
    _check_p(p)
    t = _check_tensor(t)
    return float(schatten_p_power(t, p) ** (1.0 / p))


def schatten_p_power(t, p):
    """``||t||_Sp^p``, the quantity that enters the clustering objective."""
    _check_p(p)
    t = _check_tensor(t)
    slices, n3 = _spectral_half(t)
    sv = np.linalg.svd(slices, compute_uv=False)
    # rounding noise in rank-deficient slices would otherwise be amplified by ^p
    noise = max(slices.shape[1:]) * np.finfo(float).eps * sv[:, :1]
    sv = np.where(sv > noise, sv, 0.0)
    return float(np.sum(_half_weights(n3) * np.sum(sv ** p, axis=1)))


def gst(sigma, w, p, max_iter=50, tol=1e-12):
    """Generalized soft-thresholding, vectorized over ``sigma``.

    Solves ``argmin_{d >= 0} 0.5 * (d - sigma)**2 + w * d**p`` elementwise.
    """
    sigma = np.asarray(sigma, dtype=float)
    if p == 1.0:
        return np.maximum(sigma - w, 0.0)
    if w == 0.0:
        return sigma.copy()
    base = 2.0 * w * (1.0 - p)
    thresh = base ** (1.0 / (2.0 - p)) + w * p * base ** ((p - 1.0) / (2.0 - p))
    out = np.zeros_like(sigma)
    active = sigma > thresh
    if not np.any(active):
        return out
    s = sigma[active]
    d = s.copy()
    for _ in range(max_iter):
        d_new = s - w * p * d ** (p - 1.0)
        done = np.max(np.abs(d_new - d)) < tol
        d = d_new
        if done:
            break
    out[active] = d
    return out


def gst_scalar(sigma, w, p):
    return float(gst(np.array([sigma]), w, p)[0])


def prox_schatten_p(x, tau, p):
    """Proximal map ``argmin_J 0.5 ||J - x||_F^2 + tau ||J||_Sp^p``.

    Each spectral slice is shrunk with weight ``tau * n3``; only the
    non-redundant half of the spectrum is decomposed.
    """
    _check_p(p)
    if tau < 0:
        raise InvalidParameterError(f"tau must be nonnegative, got {tau!r}")
    x = _check_tensor(x)
    if tau == 0:
        return x.astype(float, copy=True)
    slices, n3 = _spectral_half(x)
    u, s, vh = np.linalg.svd(slices, full_matrices=False)
    s = np.where(s < SV_FLOOR, 0.0, s)
    shrunk = gst(s, tau * n3, p)
    rebuilt = (u * shrunk[:, None, :]) @ vh
    return np.fft.irfft(np.moveaxis(rebuilt, 0, 2), n=n3, axis=2)
