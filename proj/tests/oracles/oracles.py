"""Independent reference values frozen into the C++ unit tests.

Run with: python3 tests/oracles/oracles.py
Uses only numpy, shapely and exact Python integers; shares no code with
the library.
"""
import math

import numpy as np
from shapely.affinity import rotate, scale, translate
from shapely.geometry import Point as SPoint


def extreme_offset_grid(a, b, g, n=2_000_001):
    th = np.linspace(-math.pi, math.pi, n)
    dx = a * np.cos(th) * math.cos(g) - b * np.sin(th) * math.sin(g)
    dy = a * np.cos(th) * math.sin(g) + b * np.sin(th) * math.cos(g)
    k = int(np.argmax(dx))
    return dx[k], dy[k]


def ellipse_poly(x, y, a, b, g):
    e = scale(SPoint(0, 0).buffer(1.0, 2048), a, b)
    return translate(rotate(e, g, use_radians=True, origin=(0, 0)), x, y)


def overlap_area(e1, e2):
    return ellipse_poly(*e1).intersection(ellipse_poly(*e2)).area


def a_sequence(N):
    A = [0] * (N + 1)
    A[N] = 1
    A[N - 1] = N + 1
    for i in range(N - 1, 1, -1):
        A[i - 1] = (i + 2) * A[i] - 2 * A[i + 1] - sum(A[i + 2:])
    return A


def chain(N, eps):
    P = np.zeros((N + 1, N + 1))
    P[0, 0] = math.exp(-2 * eps)
    P[0, 1] = 1 - P[0, 0]
    for i in range(1, N + 1):
        leave = 1 - math.exp(-(i + 2) * eps)
        P[i, i - 1] = 2 * leave / (i + 2)
        for j in range(0, i - 1):
            P[i, j] = leave / (i + 2)
        if i < N:
            P[i, i + 1] = leave / (i + 2)
            P[i, i] = math.exp(-(i + 2) * eps)
        else:
            P[i, i] = 1 - (N + 1) * leave / (N + 2)
    return P


def exit_then_return(N, eps):
    # Hitting times of 0 from 1..N, then add the geometric exit time from 0.
    P = chain(N, eps)
    Q = P[1:, 1:]
    h = np.linalg.solve(np.eye(N) - Q, np.ones(N))
    return 1 / (1 - math.exp(-2 * eps)) + h[0]


def continuous_return(trunc=60):
    # h_d = [1 + h_{d+1} + 2 h_{d-1} + sum_{k=2}^{d} h_{d-k}] / (d+2), h_0 = 0.
    n = trunc
    M = np.zeros((n, n))
    rhs = np.ones(n)
    for d in range(1, n + 1):
        r = d - 1
        M[r, r] += d + 2
        if d + 1 <= n:
            M[r, d] -= 1
        if d - 1 >= 1:
            M[r, d - 2] -= 2
        for k in range(2, d + 1):
            if d - k >= 1:
                M[r, d - k - 1] -= 1
    h = np.linalg.solve(M, rhs)
    return 0.5 + h[0]


if __name__ == "__main__":
    print("D(2,1,pi/4) =", repr(math.sqrt(2.5)))
    for shape in [(2, 1, math.pi / 4), (3, 1 / 3, 0.3), (1, 2, -1.2)]:
        print("offset", shape, extreme_offset_grid(*shape))
    pairs = [
        ((0, 0, 1, 1, 0), (1.9, 0, 1, 1, 0)),
        ((0, 0, 1, 1, 0), (2.1, 0, 1, 1, 0)),
        ((0, 0, 2, 0.5, 0), (2.3, 0.8, 2, 0.5, math.pi / 3)),
        ((0, 0, 2, 0.5, 0), (0, 1.2, 2, 0.5, 0)),
        ((0, 0, 3, 0.2, 0.5), (1.0, 2.0, 3, 0.2, -0.5)),
        ((0, 0, 3, 0.2, 0.5), (0.0, 1.0, 3, 0.2, 0.5)),
    ]
    for e1, e2 in pairs:
        print("overlap", e1, e2, overlap_area(e1, e2))
    print("A(3) =", a_sequence(3)[1:])
    print("A(10) =", a_sequence(10)[1:])
    print("all positive to 200:", all(x > 0 for N in range(3, 201) for x in a_sequence(N)[1:]))
    print("digits A_1(200) =", len(str(a_sequence(200)[1])))
    for N, eps in [(3, 0.01), (20, 1e-3), (10, 1e-2)]:
        print("E_hat", N, eps, repr(exit_then_return(N, eps)))
    print("E[T_square] truncated =", repr(continuous_return()))
    print("speed =", repr(1 + 1 / (2 * continuous_return())))
    # Express lower bound for the two-atom recipe law.
    atoms = [(0.2, 2, 0.5, 0.6), (0.1, 1, 1, 0)]
    J = sum(w * math.pi * a * b for w, a, b, g in atoms)
    ED = sum(w * math.pi * a * b * extreme_offset_grid(a, b, g)[0] for w, a, b, g in atoms) / J
    print("express lb two-atom =", repr(J * ED))
    print("fpp n=1 direct-edge mean =", repr(math.pi / 48))
