"""Group all clean 4-self-arrow patterns into welded classes."""
import itertools, sys, time
from welded.gauss import GaussDiagram, STRINGLINK
import scratch_upsilon as su

signs = {1: 1, 2: -1, 3: -1, 4: 1}  # A+, B-, C-(eta=-eps), D+

def arrangements():
    units = ["P", "Q", 1, 2, 3, 4]
    seen = set()
    for perm in itertools.permutations(units):
        toks = []
        for u in perm:
            if u == "P":
                toks += [("t", 1), ("t", 2)]
            elif u == "Q":
                toks += [("t", 3), ("t", 4)]
            else:
                toks.append(("h", u))
        d = GaussDiagram.build(STRINGLINK, [toks], dict(signs))
        if d not in seen:
            seen.add(d)
            yield d

def closure(left, depth, cap=5):
    seen = {left}
    frontier = [left]
    for _ in range(depth):
        new = []
        for d in frontier:
            for name, m, nd in su.neighbors(d, created_cap=cap):
                if nd not in seen:
                    seen.add(nd)
                    new.append(nd)
        frontier = new
    return seen

cands = list(arrangements())
print(len(cands), "distinct clean patterns")
label = {}
classes = []
t0 = time.time()
for i, d in enumerate(cands):
    if d in label:
        continue
    cl = closure(d, depth=4)
    idx = len(classes)
    members = [c for c in cands if c in cl]
    for c in members:
        label[c] = idx
    classes.append(members)
    print(f"class {idx}: {len(members)} members ({time.time()-t0:.0f}s)")
    sys.stdout.flush()

print()
for idx, members in enumerate(classes):
    if len(members) > 1:
        print(f"class {idx}:")
        for d in members:
            print("   ", " ".join(f"{w}{k}{'+' if signs[k]>0 else '-'}"
                                  for w, k in d.components[0]))
