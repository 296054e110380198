"""
Splitting a vector field into solenoidal and potential parts
============================================================

"""

import numpy as np

from lamespectra.helmholtz import (
    divergence,
    helmholtz_decompose,
    riesz_empirical_norm,
    riesz_norm_bound,
    splitting_lp_bound,
)
from lamespectra.lattice import Lattice, random_vector_field, scalar_lp_norm, vector_lp_norm

# a 64 x 64 periodic grid with period 2 pi and a reproducible random field
lat = Lattice(2, 64)
rng = np.random.default_rng(0)
f = random_vector_field(lat, rng)

# the decomposition is a pair of Fourier multiplier projections, so it is
# exact: the parts sum back to f and the solenoidal part has zero divergence
pair = helmholtz_decompose(f)
print("||f||_2                 ", vector_lp_norm(f, 2.0))
print("||f_S||_2               ", vector_lp_norm(pair.solenoidal, 2.0))
print("||f_P||_2               ", vector_lp_norm(pair.potential, 2.0))
print("||div f_S||_2           ", scalar_lp_norm(divergence(pair.solenoidal), 2.0))
print("reconstruction gap      ", vector_lp_norm(pair.total() - f, 2.0))

# orthogonality in L^2: the squared norms satisfy Pythagoras
gap = (
    vector_lp_norm(f, 2.0) ** 2
    - vector_lp_norm(pair.solenoidal, 2.0) ** 2
    - vector_lp_norm(pair.potential, 2.0) ** 2
)
print("pythagoras defect       ", gap)

# in L^p the splitting costs a constant built from the Riesz transform norm
# c_p = cot(pi / (2 p*)); the empirical transform norm lands on that value
for p in (4.0 / 3.0, 2.0, 4.0):
    est = riesz_empirical_norm(lat, 0, p, samples=4)
    print(
        f"p = {p:4.3g}: empirical Riesz norm {est:.4f}, "
        f"cot bound {riesz_norm_bound(p):.4f}, "
        f"splitting constant {splitting_lp_bound(p, lat.dim):.3f}"
    )
