"""NumPy implementations of the compiled kernels in ``_kernels.pyx``."""
import numpy as np

_ROW_CHUNK = 64


def ccdf_trapezoid(mu, ms, panels):
    mu = np.ascontiguousarray(mu, dtype=np.float64)
    ms = np.asarray(ms, dtype=np.int64)
    theta = np.pi * np.arange(panels + 1) / panels
    n = np.arange(1, mu.shape[1] + 1)
    cos_tab = np.cos(np.outer(theta, n))
    sin_tab = np.sin(np.outer(theta, n))
    weights = np.ones(panels + 1)
    weights[[0, -1]] = 0.5
    half = 0.5 * theta
    sin_half = np.sin(half)
    sin_half[0] = 1.0
    out = np.empty((mu.shape[0], ms.size))
    for lo in range(0, mu.shape[0], _ROW_CHUNK):
        block = mu[lo:lo + _ROW_CHUNK]
        p = block @ cos_tab.T
        q = block @ sin_tab.T
        ew = np.exp(p - block.sum(axis=1, keepdims=True)) * weights
        for k, m in enumerate(ms):
            if m <= 0:
                out[lo:lo + _ROW_CHUNK, k] = 1.0
                continue
            dirichlet = np.sin(m * half) / sin_half
            dirichlet[0] = m
            acc = (ew * dirichlet * np.cos((m - 1) * half - q)).sum(axis=1)
            out[lo:lo + _ROW_CHUNK, k] = 1.0 - acc / panels
    return np.clip(out, 0.0, 1.0)


def chord_mass(r, radii):
    r = np.asarray(r, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    sq = radii[:, None] ** 2 - r[None, :] ** 2
    inside = radii[:, None] > r[None, :]
    return np.where(inside, np.sqrt(np.where(inside, sq, 0.0)), 0.0).sum(axis=1)
