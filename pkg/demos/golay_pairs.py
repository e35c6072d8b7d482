# %% [markdown]
# # Golay complementary pairs over Z_H
#
# A quadratic path through the index bits plus an affine part gives a
# sequence of length 2**m.  Adding (H/2) times the first bit on the path
# gives a partner whose aperiodic sidelobes cancel the original's.

# %%
import numpy as np

from golayzacz import GolayParams, aperiodic_autocorr, generate, golay_pair, parse_permutation

# %%
pi = parse_permutation("(143)", 5)
params = GolayParams(m=5, H=8, pi=pi, c=(1, 0, 3, 0, 6, 2))
a, b = golay_pair(params, c_prime=4)
print("pi   ", pi)
print("a    ", a.values)
print("b    ", b.values)

# %% [markdown]
# Sidelobes of each sequence alone, then of the sum.

# %%
ca = aperiodic_autocorr(a).values
cb = aperiodic_autocorr(b).values
np.set_printoptions(precision=3, suppress=True)
print("|C_a|      ", np.abs(ca[:8]))
print("|C_a + C_b|", np.abs(ca + cb)[:8])

# %% [markdown]
# With H = 4 the correlations are Gaussian integers, so the cancellation is
# checked exactly rather than up to rounding.

# %%
quaternary = generate(params.replace(H=4, c=(0, 1, 2, 3, 0, 1)))
prof = aperiodic_autocorr(quaternary)
print(prof.exact, [prof.exact_value(t) for t in range(4)])
