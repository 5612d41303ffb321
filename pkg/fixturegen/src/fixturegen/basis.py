"""Minimal STO-3G basis data for the fixture molecules (H, Li, O).

Standard published exponents and contraction coefficients; contracted
functions are renormalized numerically at build time.
"""

ANGSTROM_TO_BOHR = 1.0 / 0.52917721092

NUCLEAR_CHARGE = {"H": 1, "Li": 3, "O": 8}

_1S_COEF = (0.1543289673, 0.5353281423, 0.4446345422)
_2S_COEF = (-0.09996722919, 0.3995128261, 0.7001154689)
_2P_COEF = (0.1559162750, 0.6076837186, 0.3919573931)

# element -> list of shells (kind, exponents, coefficients)
STO3G = {
    "H": [("s", (3.425250914, 0.6239137298, 0.1688554040), _1S_COEF)],
    "Li": [
        ("s", (16.11957475, 2.936200663, 0.7946504870), _1S_COEF),
        ("s", (0.6362897469, 0.1478600533, 0.04808867840), _2S_COEF),
        ("p", (0.6362897469, 0.1478600533, 0.04808867840), _2P_COEF),
    ],
    "O": [
        ("s", (130.7093214, 23.80886605, 6.443608313), _1S_COEF),
        ("s", (5.033151319, 1.169596125, 0.3803889600), _2S_COEF),
        ("p", (5.033151319, 1.169596125, 0.3803889600), _2P_COEF),
    ],
}


def shells_for_atom(element, center_bohr):
    """Expand an element's shells into basis functions [(lmn, center, exps, coefs)]."""
    if element not in STO3G:
        raise KeyError(f"no STO-3G data for element {element!r}")
    funcs = []
    for kind, exps, coefs in STO3G[element]:
        if kind == "s":
            funcs.append(((0, 0, 0), center_bohr, exps, coefs))
        elif kind == "p":
            for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                funcs.append((lmn, center_bohr, exps, coefs))
        else:
            raise ValueError(f"unsupported shell kind {kind!r}")
    return funcs
