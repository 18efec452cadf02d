"""Sets with a preorder: the canonical factorisation of one map has a non-trivial kernel on its mono half."""

from prenormal import engine as E
from prenormal.backends.relative import REL_EQUIVALENCE, REL_PREORDER, preorder_counterexample

X, Y, f = preorder_counterexample(REL_PREORDER)
labels = ("1", "2", "2'", "3")
fa = E.factorise(f)
print("f =", dict(zip(labels, f.map)))
print("e =", dict(zip(labels, fa.e.map)), "onto", fa.e.cod.size, "classes")
print("m =", fa.m.map, "trivial kernel:", fa.m_has_trivial_kernel)
w = fa.witness_on_failure
print("kernel of m contains", [labels[x] for x in w["domain"]])

# equivalence relations behave: the whole suite passes on every small carrier
for rep in E.run_laws(REL_EQUIVALENCE.catalog(max_order=3)):
    print(rep.to_text())
