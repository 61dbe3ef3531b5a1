#!/usr/bin/env python3
"""Regenerate the committed sharpness witness.

The witness pair is T1 = T2 = [[0, 0.5], [0, 0]] with p = z1 - z2.  Both
matrices are strictly contractive and nilpotent; the constructed variety for
this pair is the diagonal z2 = z1, so the variety sup of p collapses to
roundoff while the bidisc sup is 2, attained at (1, -1).  The pipeline
values printed here are frozen in tests/data/sharpness_witness.json and
asserted by the acceptance suite.

Run from the repository root:

    python scripts/gen_sharpness_witness.py > tests/data/sharpness_witness.json
"""

from __future__ import annotations

import numpy as np

import andovar as av
from andovar import serialize
from andovar.vn import BivariatePolynomial, vn_report


def main() -> None:
    J = np.array([[0.0, 0.5], [0.0, 0.0]], complex)
    pair = av.ContractionPair.create(J, J)
    p = BivariatePolynomial(np.array([[0, -1], [1, 0]], complex))
    rep = vn_report(pair, p)
    payload = {
        "pair": "T1 = T2 = [[0, 0.5], [0, 0]]",
        "polynomial": "z1 - z2",
        "lhs": rep.lhs,
        "sup_variety": rep.sup_variety,
        "sup_bidisc": rep.sup_bidisc,
        "ratio": rep.sup_variety / rep.sup_bidisc,
        "sampling": dict(rep.sampling),
        "pair_digest": rep.pair_digest,
    }
    print(serialize.dumps(payload), end="")


if __name__ == "__main__":
    main()
