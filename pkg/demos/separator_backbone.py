"""Sample a path separator on a grid, then grow backbone clusters and refine them."""

from strongldd import (Oracle, build_backbone_clustering, generate, make_rng, refine,
                       sample_weak_separator, verify_weak_separation)
from strongldd.graph import weighted_diameter
from strongldd.verify import audit_backbone, audit_clustering

g = generate("grid", 64)
D = weighted_diameter(g)
sep = sample_weak_separator(g, None, D / 2, 0.25, 3, Oracle(), make_rng(5, "sep"))
for path, surround in sep.entries:
    print("path", path, "removes", len(surround), "nodes")
print("every surviving D/2-ball is small:", verify_weak_separation(g, sep.removed, D / 2)[0])

# backbone clusters: members within 2 of their separator paths
bc = build_backbone_clustering(g, None, 2.0, 3, Oracle(), make_rng(5, "bb"), profile="desk")
print("backbone clusters:", len(bc.members), "most paths in one cluster:", bc.kappa)
print("members too far from their backbone:", len(audit_backbone(g, bc)))

refined = refine(g, bc, Oracle(), make_rng(5, "refine"))
report = audit_clustering(g, refined, diameter_bound=16 * 2.0)
print("refined clusters:", len(refined.clusters), "worst diameter:", report.max_strong_diameter,
      "clustered fraction:", round(refined.clustered_fraction(), 3))
