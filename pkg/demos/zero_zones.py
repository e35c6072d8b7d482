# %% [markdown]
# # Zero autocorrelation zones
#
# Constraining where the first few path positions go, and tying c_1 to
# c_2, forces the periodic autocorrelation to vanish over long runs of
# shifts.  Three zone shapes arise: two quarter-length zones at the ends,
# one half-length zone in the middle, or three eighth-scale zones.

# %%
import numpy as np

from golayzacz import (find_zacz, generate, periodic_autocorr, predicted_zones,
                       profile_to_csv, random_instance, verify_theorem)

rng = np.random.default_rng(2024)

# %%
for tag in ("A1", "B", "C3", "C2'"):
    p = random_instance(tag, 6, 4, rng)
    rep = find_zacz(periodic_autocorr(generate(p)))
    long_runs = [iv for iv in rep.to_list() if iv[1] > iv[0]]
    print(f"{tag:4s} pi={p.pi} c={p.c}")
    print(f"     predicted {predicted_zones(tag[0], 6)}")
    print(f"     found     {long_runs}  holds={verify_theorem(p, tag)}")

# %% [markdown]
# Alphabets other than Z_2 and Z_4 go through floating point; zeros are
# then judged against a tolerance proportional to N.

# %%
p = random_instance("A2", 7, 6, rng)
prof = periodic_autocorr(generate(p))
rep = find_zacz(prof)
print("tolerance", rep.tol_used)
print("largest |R| inside the first zone", np.abs(prof.values[1:33]).max())

# %% [markdown]
# The profile exports as CSV for plotting elsewhere.

# %%
print(profile_to_csv(prof).splitlines()[:5])
