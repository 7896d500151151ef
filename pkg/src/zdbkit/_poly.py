"""Dense polynomial helpers over the prime field GF(p).

Polynomials are lists of ints, low degree first, with no trailing zeros
(the zero polynomial is ``[]``).
"""

from __future__ import annotations


def trim(a: list[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return trim([(x - y) % p for x, y in zip(a, b)])


def mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def divmod_(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a)
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        c = rem[-1] * inv_lead % p
        quot[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * y) % p
        rem = trim(rem)
    return trim(quot), rem


def mod(a: list[int], b: list[int], p: int) -> list[int]:
    return divmod_(a, b, p)[1]


def gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(a, b, p)
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = [c * inv_lead % p for c in a]
    return a


def powmod(base: list[int], exponent: int, modulus: list[int], p: int) -> list[int]:
    result = [1]
    base = mod(base, modulus, p)
    while exponent:
        if exponent & 1:
            result = mod(mul(result, base, p), modulus, p)
        base = mod(mul(base, base, p), modulus, p)
        exponent >>= 1
    return result


def is_irreducible(f: list[int], p: int) -> bool:
    """Ben-Or test: f has no factor of degree <= deg(f)/2."""
    f = trim(f)
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(deg // 2):
        h = powmod(h, p, f, p)
        if len(gcd(f, sub(h, x, p), p)) > 1:
            return False
    return True


def from_code(code: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        code, c = divmod(code, p)
        out.append(c)
    return out


def to_code(coeffs: list[int], p: int) -> int:
    code = 0
    for c in reversed(coeffs):
        code = code * p + c
    return code


def smallest_monic_irreducible(p: int, s: int) -> list[int]:
    """Return the monic irreducible of degree s with the smallest integer code."""
    for low in range(p**s):
        f = from_code(low, p, s) + [1]
        if is_irreducible(f, p):
            return f
    raise ValueError(f"no irreducible polynomial of degree {s} over GF({p})")
