"""Independent reference implementations used as test oracles.

Everything here is deliberately written from first principles (plain loops,
expanded polynomials, centered-moment formulas) so that agreement with the
library is evidence, not tautology. Nothing imports library internals.
"""

import math

import numpy as np


def oracle_mean_var(plane: np.ndarray, x: int, y: int, w: int, h: int) -> tuple[float, float]:
    """Two-pass centered mean/variance of a window, float64 throughout."""
    window = plane[y:y + h, x:x + w].astype(np.float64)
    mean = float(window.mean())
    return mean, float(((window - mean) ** 2).mean())


def oracle_luminance(r: float, g: float, b: float) -> int:
    value = 0.299 * r + 0.587 * g + 0.114 * b
    return int(math.floor(value + 0.5))


def oracle_cubic_w(t: float, a: float = -0.5) -> float:
    """Expanded-polynomial cubic convolution weight."""
    t = abs(float(t))
    if t <= 1.0:
        return (a + 2.0) * t ** 3 - (a + 3.0) * t ** 2 + 1.0
    if t < 2.0:
        return a * t ** 3 - 5.0 * a * t ** 2 + 8.0 * a * t - 4.0 * a
    return 0.0


def _oracle_resample_row(samples: list[float], out_len: int, num: int, den: int, a: float) -> list[float]:
    n = len(samples)
    out = []
    for i in range(out_len):
        src = (i + 0.5) * den / num - 0.5
        base = math.floor(src)
        acc = 0.0
        for k in range(base - 1, base + 3):
            clamped = min(max(k, 0), n - 1)
            acc += oracle_cubic_w(src - k, a) * samples[clamped]
        out.append(acc)
    return out


def oracle_bicubic(planes: np.ndarray, num: int, den: int, a: float = -0.5) -> np.ndarray:
    """Per-pixel separable resample; returns the float64 array before rounding.

    Width axis first, then height, mirroring the documented evaluation order
    so float comparisons stay tight.
    """
    c, h, w = planes.shape
    out_w = (w * num) // den
    out_h = (h * num) // den
    mid = np.empty((c, h, out_w), dtype=np.float64)
    for ci in range(c):
        for yi in range(h):
            mid[ci, yi] = _oracle_resample_row(planes[ci, yi].astype(np.float64).tolist(),
                                               out_w, num, den, a)
    out = np.empty((c, out_h, out_w), dtype=np.float64)
    for ci in range(c):
        for xi in range(out_w):
            out[ci, :, xi] = _oracle_resample_row(mid[ci, :, xi].tolist(), out_h, num, den, a)
    return out


def oracle_round_half_away(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    flat_in, flat_out = x.ravel(), out.ravel()
    for i, v in enumerate(flat_in):
        flat_out[i] = math.floor(v + 0.5) if v >= 0 else math.ceil(v - 0.5)
    return out


def oracle_greedy_match(
    lr_stats: list[tuple[float, float]],
    hr_stats: list[tuple[float, float]],
    sigma_t_sq: float,
    mu_t: float | None = None,
) -> list[tuple[int, int]]:
    """Exhaustive replay of the documented matching rule over (mean, var) lists.

    Admissible pairs sorted ascending by variance gap with (lr index, hr
    index) tie-break, then greedy selection without replacement.
    """
    admissible = []
    for i, (lm, lv) in enumerate(lr_stats):
        for j, (hm, hv) in enumerate(hr_stats):
            if not abs(lv - hv) < sigma_t_sq:
                continue
            if mu_t is not None and not abs(lm - hm) < mu_t:
                continue
            admissible.append((abs(lv - hv), i, j))
    admissible.sort()
    used_i: set[int] = set()
    used_j: set[int] = set()
    out = []
    for _, i, j in admissible:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        out.append((i, j))
    return out


def oracle_ssim(x: np.ndarray, y: np.ndarray) -> float:
    """Direct double-loop SSIM with an explicit 2-D Gaussian window.

    Uses weighted central moments per position, the textbook formulation,
    rather than the separable uncentered-filter path the library takes.
    """
    size, sigma = 11, 1.5
    gauss = [math.exp(-((k - (size - 1) / 2.0) ** 2) / (2.0 * sigma * sigma)) for k in range(size)]
    total = sum(gauss)
    window = np.outer([v / total for v in gauss], [v / total for v in gauss])
    c1 = (0.01 * 255.0) ** 2
    c2 = (0.03 * 255.0) ** 2
    xf = x.astype(np.float64)
    yf = y.astype(np.float64)
    h, w = x.shape
    scores = []
    for yy in range(h - size + 1):
        for xx in range(w - size + 1):
            wx = xf[yy:yy + size, xx:xx + size]
            wy = yf[yy:yy + size, xx:xx + size]
            mx = float((window * wx).sum())
            my = float((window * wy).sum())
            vx = float((window * (wx - mx) ** 2).sum())
            vy = float((window * (wy - my) ** 2).sum())
            cxy = float((window * (wx - mx) * (wy - my)).sum())
            scores.append(
                ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2))
            )
    return sum(scores) / len(scores)


def oracle_window_scan(plane: np.ndarray, patch: int, stride: int) -> list[tuple[float, float]]:
    """Brute-force stride-grid scan returning (mean, variance) per window."""
    h, w = plane.shape
    out = []
    if patch > min(h, w) or stride > min(h, w):
        return out
    for y in range(0, h - patch + 1, stride):
        for x in range(0, w - patch + 1, stride):
            out.append(oracle_mean_var(plane, x, y, patch, patch))
    return out
