"""Pure numpy implementations of the hot loops (fallback backend)."""
import math

import numpy as np

TWO_PI = 2.0 * math.pi
TWO_PI_Y = TWO_PI / math.sqrt(3.0)


def eval_modes(x, y, m, p, amp, phase, with_grad=True):
    # mode-outer loop keeps memory at O(points); phases are evaluated
    # directly rather than through the compiled kernel's power tables
    val = np.zeros(x.shape[0])
    gx = np.zeros(x.shape[0]) if with_grad else None
    gy = np.zeros(x.shape[0]) if with_grad else None
    for j in range(m.shape[0]):
        th = TWO_PI * m[j] * x + TWO_PI_Y * p[j] * y + phase[j]
        val += amp[j] * np.cos(th)
        if with_grad:
            s = amp[j] * np.sin(th)
            gx -= TWO_PI * m[j] * s
            gy -= TWO_PI_Y * p[j] * s
    return val, gx, gy


def compensated_sum(a):
    return math.fsum(a)
