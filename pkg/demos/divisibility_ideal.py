"""Positive integers under multiplication, with the multiples of 10 as trivial maps."""

from prenormal.casestudies import displayed_formula, ideal_factorise, ideal_kernel, ideal_normal_epis

for n in (1, 2, 3, 4, 5, 25, 30):
    print(f"kernel({n}) = {ideal_kernel(n)}")
print("normal epis:", sorted(ideal_normal_epis()))

fac = ideal_factorise(25)
print("25 factorises?", fac["exists"])
print("why not:", fac["obstruction"])
print("closed form 2^[5|n] 5^[2|n] at 25 gives", displayed_formula(25), "but the search gives", ideal_kernel(25))
