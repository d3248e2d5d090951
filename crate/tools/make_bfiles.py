"""Writes b-file fixtures for the OEIS comparison tests.

Each sequence is produced by a method independent of the Rust code:
Bell numbers by the Bell triangle, second-order Bell numbers by expanding
exp(e^{e^x - 1} - 1) with exact fractions, and trivial-meet partition pairs
by the inversion sum_k s(n, k) B_k^2 with signed Stirling numbers of the
first kind.
"""

from fractions import Fraction
from math import factorial
from pathlib import Path
import sys


def bell_triangle(n_max):
    row, out = [1], [1]
    for _ in range(n_max):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
        out.append(row[0])
    return out


def exp_series(f, n):
    """exp(f) for a power series f with f[0] = 0, up to x^n."""
    h = [Fraction(1)] + [Fraction(0)] * n
    for m in range(1, n + 1):
        h[m] = sum(k * f[k] * h[m - k] for k in range(1, m + 1)) / m
    return h


def bell2(n_max):
    ex = [Fraction(1, factorial(k)) for k in range(n_max + 1)]
    ex[0] = Fraction(0)
    inner = exp_series(ex, n_max)
    inner[0] = Fraction(0)
    outer = exp_series(inner, n_max)
    return [int(c * factorial(k)) for k, c in enumerate(outer)]


def stirling1_signed(n_max):
    s = [[0] * (n_max + 1) for _ in range(n_max + 1)]
    s[0][0] = 1
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            s[n][k] = s[n - 1][k - 1] - (n - 1) * s[n - 1][k]
    return s


def trivial_meet(n_max):
    b = bell_triangle(n_max)
    s = stirling1_signed(n_max)
    return [sum(s[n][k] * b[k] ** 2 for k in range(n + 1)) for n in range(n_max + 1)]


def write(path, name, values):
    lines = [f"# {name}", "# regenerated locally; format: n a(n)"]
    lines += [f"{n} {v}" for n, v in enumerate(values)]
    path.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    write(out / "b000110.txt", "A000110 Bell numbers", bell_triangle(30))
    write(out / "b000258.txt", "A000258 second-order Bell numbers", bell2(20))
    write(out / "b059849.txt", "A059849 partition pairs with trivial meet", trivial_meet(15))
