"""Slices and arrow categories reuse a base backend; limits and cokernels are computed there."""

from prenormal import engine as E
from prenormal.backends.pointed import CMON, cyclic_monoid
from prenormal.combinators import check_evaluation, functor_backend, slice_backend

base = CMON.catalog(max_order=2)

over = slice_backend(CMON, cyclic_monoid(CMON, 2))
cat = over.catalog(base, cap=20)
print(cat)
for rep in E.run_laws(cat):
    print(rep.to_text())

arrows = functor_backend(CMON, "arrow")
cat = arrows.catalog(base, cap=16)
print(cat)
print(check_evaluation(arrows, cat).to_text())
for rep in E.run_laws(cat, ["fs-axioms", "cross-validation"]):
    print(rep.to_text())
