"""The nil Hecke calculus: group elements as combinations of push-pull operators.

t_{s1} t_{s2} is rewritten as sum c_a A_a with coefficients on the left,
then checked against the original by converting back.  The operator A_1 is
also applied to the point class (additive law, so the
coefficients stay readable), giving the Bott-Samelson class [Z_1].

    python3 demos/operators.py
"""

from schubfgl.algebra import NotDivisible
from schubfgl.fgl import fgl_build
from schubfgl.momentgraph import MomentGraphModel
from schubfgl.nilhecke import HeckeOperator, op_apply_to_section, t_word_to_a
from schubfgl.schubert import bott_samelson, point_class

model = MomentGraphModel("A2", fgl_build("additive", 5))

for word in [(1,), (1, 2), (1, 2, 1)]:
    expansion = t_word_to_a(model, word)
    name = "t_" + "t_".join(f"s{i} " for i in word)
    print(f"{name}= " + " + ".join(f"c_{''.join(map(str, a)) or 'e'} A_{''.join(map(str, a)) or 'e'}"
                                   for a in sorted(expansion, key=len)))
    for a in sorted(expansion, key=len):
        c = expansion[a]
        try:
            c = type(c).of(c.to_series())  # cancel when the fraction is a polynomial
        except NotDivisible:
            pass
        dens = " ".join(f"y{key}" for key, _ in c.denominators) or "1"
        print(f"    c_{''.join(map(str, a)) or 'e'} = ({c.numerator.to_text()}) / ({dens})")

z1 = op_apply_to_section(HeckeOperator.A(model, 1), point_class(model))
print("A_1 [Z_pt] == [Z_1]:", z1 == bott_samelson(model, (1,)))
