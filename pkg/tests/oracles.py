"""Independent oracles used to freeze expected values.

These deliberately avoid the library's own code paths: quaternion products
come from a literal generator lookup table, and constraint enumeration is a
double loop in exact rational arithmetic.
"""

from fractions import Fraction

from hsltori.quaternion import Quaternion

BASIS = ("1", "i", "j", "k")

# sign and basis element of each generator product
TABLE = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def to_coeffs(q: Quaternion) -> dict:
    return {"1": q.w, "i": q.x, "j": q.y, "k": q.z}


def from_coeffs(c: dict) -> Quaternion:
    return Quaternion(c.get("1", 0.0), c.get("i", 0.0), c.get("j", 0.0), c.get("k", 0.0))


def table_mul(a: dict, b: dict) -> dict:
    out = {e: 0.0 for e in BASIS}
    for ea, ca in a.items():
        if ca == 0.0:
            continue
        for eb, cb in b.items():
            if cb == 0.0:
                continue
            sign, basis = TABLE[(ea, eb)]
            out[basis] += sign * ca * cb
    return out


def oracle_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    return from_coeffs(table_mul(to_coeffs(a), to_coeffs(b)))


def oracle_conj(a: Quaternion) -> Quaternion:
    return Quaternion(a.w, -a.x, -a.y, -a.z)


def oracle_herm(a: Quaternion, b: Quaternion) -> Quaternion:
    return oracle_mul(a, oracle_conj(b))


def oracle_metric(a: Quaternion, b: Quaternion) -> float:
    return oracle_herm(a, b).w


def oracle_symplectic(a: Quaternion, b: Quaternion) -> float:
    i = Quaternion(0.0, 1.0, 0.0, 0.0)
    return oracle_metric(oracle_mul(a, i), b)


def brute_force_solutions(r: int, s: int, delta0: Fraction, delta1_sq: Fraction,
                          bound: int) -> list:
    """All (m, n) on the full integer grid satisfying the constraint exactly."""
    hits = []
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            value = ((m * m - r * r) * delta0 * delta0
                     - 2 * (m * n - r * s) * delta0
                     + (m * m - r * r) * delta1_sq
                     + n * n - s * s)
            if value == 0:
                hits.append((m, n))
    return sorted(hits)
