#!/usr/bin/env python3
"""Emit the bundled STO catalog (Z = 1-18).

Single-zeta exponents of Clementi & Raimondi, J. Chem. Phys. 38, 2686 (1963).
Within each angular momentum the shells are Schmidt-orthogonalised in order of
increasing n, so every radial orbital is a normalised combination of
normalised STO primitives. For closed shells this reproduces the
minimal-basis density exactly.
"""
from mpmath import mp, mpf, factorial, sqrt

mp.dps = 40

SYMBOLS = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
           "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar"]

# zeta per shell: (1s, 2s, 2p, 3s, 3p)
ZETA = {
    1: [1.0], 2: [1.6875],
    3: [2.6906, 0.6396], 4: [3.6848, 0.9560],
    5: [4.6795, 1.2881, 1.2107], 6: [5.6727, 1.6083, 1.5679],
    7: [6.6651, 1.9237, 1.9170], 8: [7.6579, 2.2458, 2.2266],
    9: [8.6501, 2.5638, 2.5500], 10: [9.6421, 2.8792, 2.8792],
    11: [10.6259, 3.2857, 3.4009, 0.8358], 12: [11.6089, 3.6960, 3.9129, 1.1025],
    13: [12.5910, 4.1068, 4.4817, 1.3724, 1.3552],
    14: [13.5745, 4.5100, 4.9725, 1.6344, 1.4284],
    15: [14.5578, 4.9125, 5.4806, 1.8806, 1.6288],
    16: [15.5409, 5.3144, 5.9885, 2.1223, 1.8273],
    17: [16.5239, 5.7152, 6.4966, 2.3561, 2.0387],
    18: [17.5075, 6.1152, 7.0041, 2.5856, 2.2547],
}
SHELLS = [("1s", 1, 0, 2), ("2s", 2, 0, 2), ("2p", 2, 1, 6), ("3s", 3, 0, 2), ("3p", 3, 1, 6)]


def overlap(a, b):
    (na, za), (nb, zb) = a, b
    norm = lambda n, z: (2 * z) ** (n + mpf(1) / 2) / sqrt(factorial(2 * n))
    return norm(na, za) * norm(nb, zb) * factorial(na + nb) / (za + zb) ** (na + nb + 1)


def inner(u, v):
    return sum(cu * cv * overlap(pu, pv) for pu, cu in u for pv, cv in v)


def occupations(z):
    left, occ = z, []
    for label, _, _, cap in SHELLS:
        take = min(cap, left)
        occ.append(take)
        left -= take
    return occ


def main():
    print("# Minimal-basis STO catalog, Z = 1-18.")
    print("# Exponents: Clementi & Raimondi, J. Chem. Phys. 38, 2686 (1963).")
    print("# Same-l shells Schmidt-orthogonalised in order of increasing n.")
    print("provenance Clementi-Raimondi single-zeta exponents (JCP 38, 2686, 1963); same-l shells Schmidt-orthogonalised")
    print()
    for z in range(1, 19):
        print(f"atom {z} {SYMBOLS[z - 1]}")
        occ = occupations(z)
        built = {0: [], 1: []}
        for (label, n, l, _), zeta, o in zip(SHELLS, ZETA[z], occ):
            orb = [((n, mpf(str(zeta))), mpf(1))]
            for prev in built[l]:
                s = inner(orb, prev)
                orb = orb + [(p, -s * c) for p, c in prev]
            norm = sqrt(inner(orb, orb))
            orb = [(p, c / norm) for p, c in orb]
            built[l].append(orb)
            print(f"shell {label} l={l} occ={o}")
            # leading primitive first
            for (pn, pz), c in reversed(orb):
                print(f"sto n={pn} zeta={mp.nstr(pz, 6)} c={mp.nstr(c, 17)}")
        print()


if __name__ == "__main__":
    main()
