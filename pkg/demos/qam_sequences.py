# %% [markdown]
# # 4^q-QAM Golay sequences
#
# q quaternary sequences, each the base sequence plus a small offset, are
# weighted by powers of two and summed.  The result lies on a rotated
# square QAM grid and still has a complementary partner.

# %%
import numpy as np

from golayzacz import (GolayParams, OffsetSpec, QamParams, find_zacz, in_constellation,
                       is_qam_complementary, periodic_autocorr, qam_pair)

# %%
base = GolayParams(m=5, H=4, pi=(1, 2, 3, 4, 5), c=(0,) * 6)
params = QamParams(2, base, OffsetSpec(3, d=((1, 1, 1),), w=2))
A, B = qam_pair(params)
x, y = A.grid
print("distinct grid points", sorted(set(zip(x.tolist(), y.tolist())))[:6], "...")
print("on the 16-QAM grid", in_constellation(A), "complementary", is_qam_complementary(A, B))

# %% [markdown]
# This one has quarter-length zones at both ends.  Re-routing the path or
# changing c_1 destroys them.

# %%
for pi, c1 in (((1, 2, 3, 4, 5), 0), ((4, 2, 1, 3, 5), 0), ((2, 1, 3, 4, 5), 2)):
    p = QamParams(2, base.replace(pi=pi, c=(0, c1, 0, 0, 0, 0)), params.offsets)
    rep = find_zacz(periodic_autocorr(qam_pair(p)[0]))
    print(pi, "longest zone", max(rep.lengths()))

# %% [markdown]
# Offsets on the last path bit keep the zones of the unprimed conditions;
# offsets on the first path bit do not.

# %%
for case in (1, 2):
    p = QamParams(3, base, OffsetSpec(case, d=((1, 3), (2, 1))))
    zones = [iv for iv in find_zacz(periodic_autocorr(qam_pair(p)[0])).to_list() if iv[1] > iv[0]]
    print("case", case, zones)
