"""Pure numpy implementations of the hot kernel-assembly loops.

Mirrors the signatures of the compiled ``_ckernels`` module; used when the
extension is not built or when ``REDSBO_PURE_PYTHON`` is set.
"""
import numpy as np
from scipy.spatial.distance import cdist

_SQRT3 = np.sqrt(3.0)
_SQRT5 = np.sqrt(5.0)


def se_cross(X, Y, lengthscale):
    d2 = cdist(X, Y, "sqeuclidean")
    return np.exp(-0.5 * d2 / (lengthscale * lengthscale))


def matern_cross(X, Y, nu, lengthscale):
    r = cdist(X, Y, "euclidean") / lengthscale
    if nu == 0.5:
        return np.exp(-r)
    if nu == 1.5:
        s = _SQRT3 * r
        return (1.0 + s) * np.exp(-s)
    if nu == 2.5:
        s = _SQRT5 * r
        return (1.0 + s + s * s / 3.0) * np.exp(-s)
    raise ValueError(f"unsupported Matern smoothness {nu}")


def cosine_features(x, scale):
    j = np.arange(1, scale.shape[0] + 1, dtype=np.float64)
    return scale[None, :] * np.cos(np.pi * np.outer(x, j))
