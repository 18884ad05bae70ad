"""Decomposition cost of one k-control Toffoli, k = 0..8, under the gate cost model."""

from sshr.circuit import mct_cost

print("k,t,h,cnot,ancilla")
for k in range(9):
    c = mct_cost(k)
    print(f"{k},{c.t},{c.h},{c.cnot},{c.ancilla}")
