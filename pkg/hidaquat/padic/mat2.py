"""
2x2 integer matrices modulo p^N, stored row-major as (a, b, c, d).
"""

from typing import Sequence, Tuple

Mat2 = Tuple[int, int, int, int]

IDENTITY: Mat2 = (1, 0, 0, 1)


def reduce(g: Sequence[int], q: int) -> Mat2:
    return (g[0] % q, g[1] % q, g[2] % q, g[3] % q)


def mul(g: Mat2, h: Mat2, q: int) -> Mat2:
    a, b, c, d = g
    e, f, x, y = h
    return ((a * e + b * x) % q, (a * f + b * y) % q, (c * e + d * x) % q, (c * f + d * y) % q)


def det(g: Mat2) -> int:
    return g[0] * g[3] - g[1] * g[2]


def adjugate(g: Mat2) -> Mat2:
    return (g[3], -g[1], -g[2], g[0])


def inverse(g: Mat2, q: int) -> Mat2:
    """Inverse modulo q; the determinant must be invertible mod q."""
    try:
        inv = pow(det(g) % q, -1, q)
    except ValueError:
        raise ValueError(f"matrix {g} is not invertible mod {q}")
    return reduce(tuple(inv * x for x in adjugate(g)), q)


def scalar(t: int, q: int) -> Mat2:
    return (t % q, 0, 0, t % q)


def act(g: Mat2, v: Tuple[int, int], q: int) -> Tuple[int, int]:
    """Column action g.(x, y) = (ax + by, cx + dy)."""
    x, y = v
    return ((g[0] * x + g[1] * y) % q, (g[2] * x + g[3] * y) % q)


def canonical_lift(x: int, y: int, p: int, q: int) -> Mat2:
    """
    Matrix in GL_2(Z_p) mod q with first column (x, y).

    [[x, 0], [y, 1]] when x is a unit, otherwise [[x, -1], [y, 0]].
    """
    if x % p:
        return reduce((x, 0, y, 1), q)
    return reduce((x, -1, y, 0), q)
