"""How often does the decomposition cut an edge of a unit path, as the diameter grows?

For small diameters the inner clustering works at D/8, below one edge, so
every node is alone and every edge is cut.  The 1/D decay only shows up once
D/8 is large compared with the shift rate 2 + 2 log n.
"""

from strongldd import DriverConfig, generate, measure_cut_rates

g = generate("path", 64)
prev = None
for D in (8, 16, 32, 64, 128, 256, 512):
    rates = measure_cut_rates(g, DriverConfig("ldd", float(D)), trials=300, seed=1).rates()
    step = "" if prev is None else f"  ratio to previous {rates.mean() / prev:.2f}"
    print(f"D={D:4d}  mean cut rate {rates.mean():.3f}  max {rates.max():.3f}{step}")
    prev = rates.mean()
