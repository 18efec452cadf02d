"""Bounded search in <x, y, z | xx = yy>: deleting z identifies xzx and yzy, the generated congruence does not."""

from prenormal.casestudies import BoundedFPMonoid, mon_counterexample_check

M = BoundedFPMonoid("xyz", [("xx", "yy")], 5)
print("class of xxz:", sorted(M.members("xxz")))
print("letter maxima of xzx:", M.letter_maxima()[M.cls("xzx")])

for L in (4, 6, 8):
    rep = mon_counterexample_check(L)
    s = rep.stats
    print(f"L={L}: {s['words']} words, {s['congruence_classes']} classes on the even part,"
          f" same image {s['in_kernel_pair']}, related {s['related_in_congruence']} -> {rep.verdict}")
