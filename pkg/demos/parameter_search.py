# %% [markdown]
# # Sweeping parameter spaces
#
# Sweeps stream one result per candidate: its zones, the conditions it
# meets, and whether every matched condition's zones are present.

# %%
import time
from collections import Counter

from golayzacz import SearchSpec, sweep, table8_audit

# %% [markdown]
# Every quaternary sequence of length 16, classified.

# %%
t0 = time.perf_counter()
spec = SearchSpec(kind="golay", m_values=(4,), H_values=(4,))
tally = Counter()
agree = 0
for r in sweep(spec):
    agree += r.agrees
    for tag in r.conditions:
        tally[tag] += 1
print(f"{agree} candidates agree, {time.perf_counter() - t0:.1f}s")
print(dict(sorted(tally.items())))

# %% [markdown]
# Offsets of the third kind on 16-QAM sequences with the first two path
# positions fixed.  The failures all sit at one offset position.

# %%
spec = SearchSpec(kind="qam", m_values=(4,), q_values=(2,), cond="A1", offset_cases=(3,))
by_w = Counter()
for r in sweep(spec):
    if not (r.zacz.covers(1, 4) and r.zacz.covers(12, 15)):
        by_w[r.params.offsets.w] += 1
print("candidates without both zones, by w:", dict(by_w))

# %% [markdown]
# Auditing all sixteen condition rows at m = 5.

# %%
for row in table8_audit(5, 4):
    print(f"{row.tag:4s} instances={row.instances:6d} failures={row.failures} passed={row.passed}")
