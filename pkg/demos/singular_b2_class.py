"""Why X_{s1s2s1} in type B2 needs a correction factor.

The localization formula that works for smooth Schubert varieties gives a
section that is not in the image of the moment-graph model.  Multiplying by
N at the singular locus {e, s1} repairs it in cohomology and K-theory; under
the universal law two edges still fail.

    python3 demos/singular_b2_class.py
"""

from schubfgl.fgl import fgl_build
from schubfgl.momentgraph import MomentGraphModel, gkm_check
from schubfgl.schubert import correction_factor_N, naive_pushforward, schubert_class


def failing_edges(section):
    return ["-".join(f["edge"]) + f" (degree {f['degree']})" for f in gkm_check(section)["failures"]]


for kind in ("additive", "multiplicative", "universal"):
    model = MomentGraphModel("B2", fgl_build(kind, 7))
    print(f"== {kind}")
    print("  N =", correction_factor_N(model).to_text())
    print("  naive class fails on:", ", ".join(failing_edges(naive_pushforward(model, "s1s2s1"))))
    bad = failing_edges(schubert_class(model, "s1s2s1"))
    print("  with N:", "GKM" if not bad else "fails on " + ", ".join(bad))
