"""Scratch: validate the hula-hoop reconstruction.

1. Random instances: Milnor tables of psi(left) and psi(right) must agree.
2. Trivial case (w empty, eta = -eps, no bunches): search for a short
   Reid1/Reid3/Reid2/TC derivation left -> right.
"""

import itertools
import random
import sys

from welded import gauss as ga
from welded.gauss import (GaussDiagram, GaussMoveError, STRINGLINK,
                          UpsilonInstance, apply_upsilon)
from welded.convert import psi_stringlink
from welded.milnor import milnor_invariants


def random_instance(rng):
    eps = rng.choice([1, -1])
    eta = rng.choice([1, -1])
    wlen = rng.randrange(0, 3)
    b1, b2, b3 = (rng.randrange(0, 2) for _ in range(3))
    # arrows: 1=A, 2=B, 3=C, 4=D; word arrows 10+j (wbar), 20+j (w);
    # bunch arrows 30+i with heads on comp 1
    signs = {1: eps, 2: -eps, 3: eta, 4: -eta}
    comp0 = [("t", 1), ("t", 2)]
    comp1 = []
    for j in range(wlen):
        s = rng.choice([1, -1])
        signs[10 + j] = s
        signs[20 + j] = -s
        comp1 += [("t", 10 + j), ("t", 20 + j)]
    comp0 += [("h", 10 + j) for j in range(wlen)]
    comp0.append(("h", 2))
    nb = 30
    bunches = []
    for size in (b1, b2, b3):
        toks = []
        for _ in range(size):
            nb += 1
            signs[nb] = rng.choice([1, -1])
            toks.append(("t", nb))
            comp1.append(("h", nb))
            bunches.append(nb)
        comp0 += toks
        if size == b1:
            pass
    # rebuild comp0 in the exact slot order
    comp0 = [("t", 1), ("t", 2)]
    comp0 += [("h", 10 + j) for j in range(wlen)]
    comp0.append(("h", 2))
    bunch_ids = iter(bunches)
    bs = []
    for size in (b1, b2, b3):
        bs.append([("t", next(bunch_ids)) for _ in range(size)])
    comp0 += bs[0]
    comp0.append(("h", 3))
    comp0 += bs[1]
    comp0.append(("h", 1))
    comp0 += [("h", 20 + (wlen - 1 - j)) for j in range(wlen)]
    comp0 += bs[2]
    comp0.append(("h", 4))
    comp0 += [("t", 3), ("t", 4)]
    ins = UpsilonInstance(comp=0, start=0, w_len=wlen, b1=b1, b2=b2, b3=b3,
                          eta_tails=(0, len(comp0) - 2))
    d = GaussDiagram.build(STRINGLINK, [comp0, comp1], signs)
    return d, ins


def invariance_run(n=200, seed=0):
    rng = random.Random(seed)
    bad = 0
    for i in range(n):
        d, ins = random_instance(rng)
        try:
            d2 = apply_upsilon(d, ins, rightward=True)
        except GaussMoveError as e:
            print("instance rejected:", e)
            bad += 1
            continue
        t1 = milnor_invariants(psi_stringlink(d))
        t2 = milnor_invariants(psi_stringlink(d2))
        if t1 != t2:
            print("MISMATCH at", i)
            print(d)
            print(d2)
            print(sorted(t1.entries.items()))
            print(sorted(t2.entries.items()))
            return False
    print(f"invariance ok on {n - bad} instances ({bad} rejected)")
    return True


def neighbors(d, created_cap=6):
    """All diagrams one R1/R2/R3/TC move away (bounded arrow count)."""
    out = []
    for comp in range(len(d.components)):
        n = len(d.components[comp])
        for pos in range(n - 1):
            try:
                out.append(("tc", ga.tc(comp, pos), ga.apply_gauss_move(d, ga.tc(comp, pos))))
            except GaussMoveError:
                pass
        if len(d.signs) < created_cap:
            for pos in range(n + 1):
                for sign in (1, -1):
                    for hf in (False, True):
                        m = ga.reid1_insert(comp, pos, sign, hf)
                        out.append(("reid1+", m, ga.apply_gauss_move(d, m)))
    for k in d.signs:
        try:
            m = ga.reid1_delete(k)
            out.append(("reid1-", m, ga.apply_gauss_move(d, m)))
        except GaussMoveError:
            pass
    for k1, k2 in itertools.permutations(d.signs, 2):
        try:
            m = ga.reid2_delete(k1, k2)
            out.append(("reid2-", m, ga.apply_gauss_move(d, m)))
        except GaussMoveError:
            pass
    for a, b, c in itertools.permutations(d.signs, 3):
        for rev in (False, True):
            try:
                m = ga.reid3(a, b, c, rev)
                out.append(("reid3", m, ga.apply_gauss_move(d, m)))
            except GaussMoveError:
                pass
    return out


def bfs_meet(left, right, depth=4):
    frontL = {left: []}
    frontR = {right: []}
    seenL = dict(frontL)
    seenR = dict(frontR)
    for step in range(depth):
        newL = {}
        for d, path in frontL.items():
            for name, m, nd in neighbors(d):
                if nd not in seenL:
                    newL[nd] = path + [(name, m)]
        seenL.update(newL)
        frontL = newL
        meet = set(seenL) & set(seenR)
        if meet:
            m = meet.pop()
            return seenL[m], seenR[m], m
        newR = {}
        for d, path in frontR.items():
            for name, m, nd in neighbors(d):
                if nd not in seenR:
                    newR[nd] = path + [(name, m)]
        seenR.update(newR)
        frontR = newR
        meet = set(seenL) & set(seenR)
        if meet:
            m = meet.pop()
            return seenL[m], seenR[m], m
        print(f"depth {step + 1}: |L|={len(seenL)} |R|={len(seenR)}")
    return None


def trivial_case(eps=1):
    signs = {1: eps, 2: -eps, 3: -eps, 4: eps}
    left = GaussDiagram.build(
        STRINGLINK,
        [[("t", 1), ("t", 2), ("h", 2), ("h", 3), ("h", 1), ("h", 4), ("t", 3), ("t", 4)]],
        signs)
    right = GaussDiagram.build(
        STRINGLINK,
        [[("h", 2), ("h", 3), ("h", 1), ("t", 1), ("t", 2), ("h", 4), ("t", 3), ("t", 4)]],
        signs)
    ins = UpsilonInstance(0, 0, 0, 0, 0, 0, eta_tails=(0, 6))
    assert apply_upsilon(left, ins, rightward=True) == right
    print("searching for welded derivation of the trivial case...")
    res = bfs_meet(left, right, depth=4)
    if res is None:
        print("NO derivation found within depth")
    else:
        lp, rp, mid = res
        print("FOUND: left-path:", [x[0] for x in lp])
        print("       right-path:", [x[0] for x in rp])
        print("       left moves:", [x[1] for x in lp])
        print("       right moves:", [x[1] for x in rp])
    return res


if __name__ == "__main__":
    what = sys.argv[1] if len(sys.argv) > 1 else "all"
    if what in ("all", "inv"):
        invariance_run(120)
    if what in ("all", "triv"):
        trivial_case(1)
