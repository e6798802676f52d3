import numpy as np
import pytest

import kreinrel as kr
from kreinrel import boundary as bnd


@pytest.fixture(scope="session")
def c4():
    """The flip-symmetry C^4 instance with its boundary triple."""
    j = np.fliplr(np.eye(4)).astype(np.complex128)
    space = kr.make_krein(j)
    t = kr.relation(space, space, [[1, 0, 0, 0, 0, 1, 0, 0]])
    basis = np.zeros((8, 7), dtype=np.complex128)
    for k in range(7):
        basis[k, k] = 1
    basis[7, 2] = 1
    gamma = np.array([
        [1, 0, 0, 0, 0, -1, 0],
        [0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 0, 0],
    ], dtype=np.complex128)
    triple = bnd.validate_triple(t, gamma, basis)
    return {"space": space, "T": t, "triple": triple, "basis": basis, "gamma": gamma}


def c4_weyl_matrix(z: complex) -> np.ndarray:
    """Brute-force image of the defect frame under the displayed boundary map."""
    z = complex(z)
    return np.array([[0, 0, z], [0, 0, z * z], [z, z * z, 0]], dtype=np.complex128)
