"""Tour of the stabilizer-code layer: toric construction, syndromes, logical
classes, and the portable code file format.

Run:  python demos/01_toric_code_basics.py
"""

import numpy as np

import syndromic as sy

L = 3
code = sy.build_toric(L)
print(f"toric code, lattice {L}x{L}:")
print(f"  physical qubits N = {code.n_qubits}")
print(f"  stabilizer generators = {code.n_checks} "
      f"({len(code.css_split.z_rows)} plaquettes + {len(code.css_split.x_rows)} stars)")
print(f"  logical qubits k = {code.k}")
print(f"  check-matrix rank = {sy.gf2_rank(code.check_matrix)} = N - k")

print("\nEvery generator touches 4 edges; a row of the check matrix:")
row = code.check_matrix.row(0)
print(f"  plaquette 0 bits: {''.join(map(str, row.bits))}  (x-part || z-part)")

print("\nSingle-qubit errors light up local defects:")
for name, positions in (("X on edge 0", [0]), ("Z on edge 0", [18]), ("Y on edge 0", [0, 18])):
    e = np.zeros(2 * code.n_qubits, dtype=np.uint8)
    e[positions] = 1
    s = sy.syndrome(code, sy.BitVec.from_bits(e))
    plaq = [int(i) for i in s.support() if i < 9]
    star = [int(i) - 9 for i in s.support() if i >= 9]
    print(f"  {name}: plaquette defects {plaq}, star defects {star}")

print("\nLogical operators are winding loops; their classes are read off by")
print("symplectic products with the stored X1, Z1, X2, Z2 representatives:")
for i, l in enumerate(code.logicals):
    cls = sy.logical_class(code, l)
    print(f"  logical {i}: weight {l.weight()}, class bits {cls.class_bits}")

print("\nStabilizer elements have trivial class (decoding counts them as success):")
prod = code.check_matrix.row(0) ^ code.check_matrix.row(4)
print(f"  product of plaquettes 0 and 4 -> trivial: {sy.logical_class(code, prod).is_trivial}")

path = "/tmp/toric3.code"
sy.save_code(code, path)
reloaded = sy.load_code(path)
print(f"\ncode file round trip through {path}: equal = {reloaded == code}")
print("file head:")
with open(path, encoding="utf-8") as fh:
    for _ in range(4):
        print("  " + fh.readline().rstrip())
