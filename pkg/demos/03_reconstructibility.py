"""
Can the state be recovered from inputs and outputs?
===================================================
"""

# %%
from bcnkit import Bcn, LogicalMatrix, StateSpace
from bcnkit.analysis import reconstructibility

u, x, y = StateSpace.flat("u", 2), StateSpace.flat("x", 3), StateSpace.flat("y", 2)

# states 1 and 2 look alike, but every input separates them on the next step
net = Bcn(u, x, y, LogicalMatrix(3, 6, [1, 3, 3, 3, 1, 1]), LogicalMatrix(2, 3, [1, 1, 2]))
print(reconstructibility(net).to_dict())

# %%
# Two look-alike states that keep swapping are never told apart
swap = Bcn(u, StateSpace.flat("x", 2), StateSpace.flat("y", 1),
           LogicalMatrix(2, 4, [2, 1, 2, 1]), LogicalMatrix(1, 2, [1, 1]))
report = reconstructibility(swap)
print(report.reconstructible, report.witness)
