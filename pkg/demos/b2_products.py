"""Structure constants of B2 Schubert classes against the closed forms.

Each product [X_u][X_v] is expanded in the Schubert basis and compared with
the rank-2 closed form.  Mismatches are printed by basis element.

    python3 demos/b2_products.py [additive|multiplicative|universal]
"""

import sys

from schubfgl.fgl import fgl_build
from schubfgl.momentgraph import MomentGraphModel
from schubfgl.rank2 import PRODUCTS, Terms, check_expansion
from schubfgl.schubert import schubert_basis, schubert_product

kind = sys.argv[1] if len(sys.argv) > 1 else "multiplicative"
model = MomentGraphModel("B2", fgl_build(kind, 7))
terms = Terms(model)
basis = schubert_basis(model)

for (u, v), formula in PRODUCTS.items():
    result = schubert_product(basis, u, v)
    bad = check_expansion(terms, result, formula(terms))
    support = " + ".join(f"c_{w}[X_{w}]" for w in sorted(result.nonzero()))
    print(f"[X_{u}][X_{v}] = {support:<60} {'ok' if not bad else 'differs at ' + ', '.join(bad)}")
