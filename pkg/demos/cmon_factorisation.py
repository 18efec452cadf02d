"""Factorise a few maps of finite commutative monoids and look at each half."""

from prenormal import engine as E
from prenormal.backends.pointed import CMON, cyclic_monoid, join_chain
from prenormal.core import Mor

Z4, Z2 = cyclic_monoid(CMON, 4), cyclic_monoid(CMON, 2)
T = join_chain(CMON, 2)
TT, _, _ = CMON.product(T, T)

maps = {
    "Z4 -> Z2, reduce mod 2": Mor(Z4, Z2, (0, 1, 0, 1)),
    "T x T -> T, join": Mor(TT, T, tuple(max(a, b) for a in range(2) for b in range(2))),
    "Z2 -> Z4, doubling": Mor(Z2, Z4, (0, 2)),
}

for name, f in maps.items():
    fa = E.factorise(f)
    print(name)
    print("  kernel size      ", E.kernel(f).K.size)
    print("  e                ", fa.e.map, "->", fa.e.cod.size, "elements")
    print("  m                ", fa.m.map)
    print("  normal epi?      ", E.is_normal_epi(f), "| characterisation says", CMON.normal_epi_char(f))
    print("  trivial kernel?  ", E.has_trivial_kernel(f))
    print()

# the join map is onto with a trivial kernel, yet it is not a normal epi:
# its whole factorisation is (identity, f)
