"""In pointed sets a normal epi can pull back to one that is not."""

from prenormal import engine as E
from prenormal.backends.pointed import PSET

two, one = PSET.make(2), PSET.make(1)
p = PSET.mor(two, one, (0, 0))
print("p: 2 -> 1 normal epi?", E.is_normal_epi(p))

P, left, right = PSET.pullback(p, p)
print("pullback has", P.size, "points; projection", left.map)
print("projection normal epi?", E.is_normal_epi(left))
print("fibre characterisation agrees?", PSET.normal_epi_char(left) == E.is_normal_epi(left))

cat = PSET.catalog()
print(E.check_pullback_stability(cat, along="monos").to_text())
print(E.check_pullback_stability(cat, along="all").to_text())
