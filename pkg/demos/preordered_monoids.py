"""A regular epi of preordered commutative monoids whose pullback along a mono is not regular."""

from prenormal import engine as E
from prenormal.backends.pointed import PREORDCMON, unstable_regular_epi_objects
from prenormal.core import is_iso, is_mono

o = unstable_regular_epi_objects(PREORDCMON)
p = PREORDCMON.mor(o["A"], o["B"], (0, 1, 1, 2))
i = PREORDCMON.mor(o["C"], o["B"], (0, 2))
P, p_pulled, _ = PREORDCMON.pullback(p, i)

print("p regular epi:        ", E.is_regular_epi(p))
print("p normal epi:         ", E.is_normal_epi(p))
print("pulled back map       ", p_pulled.map, "order", sorted(P["leq"]))
print("  mono:               ", is_mono(p_pulled))
print("  iso:                ", is_iso(p_pulled))
print("  regular epi:        ", E.is_regular_epi(p_pulled))

# normal epis are still stable, so the backend passes the full suite
for rep in E.run_laws(PREORDCMON.catalog()):
    print(rep.to_text())
