from __future__ import annotations

import numpy as np
import pytest

import mafoliate as mf


@pytest.fixture(scope="session")
def corpus():
    return mf.corpus()


@pytest.fixture(scope="session")
def ma_corpus():
    return mf.ma_corpus()


def random_points(rng, count, r_lo=0.5, r_hi=1.5):
    """Seeded cloud in the annulus r_lo <= |z| <= r_hi."""
    out = []
    while len(out) < count:
        row = rng.normal(size=4)
        v = np.array([complex(row[0], row[1]), complex(row[2], row[3])])
        v *= rng.uniform(r_lo, r_hi) / np.linalg.norm(v)
        out.append(mf.Point(v[0], v[1]))
    return out


def admissible_points(p, rng, count, d_cutoff=1e-6, r_lo=0.5, r_hi=1.5):
    """Points with rho > 0 and Levi determinant above the cutoff."""
    from mafoliate.calculus import jet_polynomials

    det = jet_polynomials(p).det
    out = []
    while len(out) < count:
        for q in random_points(rng, count, r_lo, r_hi):
            z1, z2 = q.as_pair()
            if p(z1, z2).real > 0.0 and det(z1, z2).real > d_cutoff:
                out.append(q)
                if len(out) == count:
                    break
    return out


TERMS = {
    "euc": [((1, 0, 1, 0), 1), ((0, 1, 0, 1), 1)],
    "fub": [((2, 0, 2, 0), 1), ((1, 1, 1, 1), 2), ((0, 2, 0, 2), 1)],
    "quartic": [((2, 0, 2, 0), 1), ((0, 2, 0, 2), 1)],
    "weighted": [((3, 0, 3, 0), 1), ((0, 2, 0, 2), 1)],
    "bad": [((2, 0, 2, 0), 1), ((0, 2, 0, 2), 1),
            ((3, 0, 0, 1), "1/4"), ((0, 1, 3, 0), "1/4")],
}
