"""Measured quantities against the bound evaluators over the generator corpus.

Implied constants are set to 1, so the ratios are descriptive only.
"""

from collections import defaultdict

from ecendo import corpus

rows = corpus.corpus_report(seed=0)
table = defaultdict(list)
for r in rows:
    if r["ratio"] is not None:
        table[(r["quantity"], r["params"]["nu"])].append(r)

print(f"{len(rows)} report rows\n")
print(f"{'quantity':28} nu  rows  non-vacuous  max ratio")
for (quantity, nu), rs in sorted(table.items()):
    live = [r for r in rs if not r["vacuous"]]
    top = max(r["ratio"] for r in rs)
    print(f"{quantity:28} {nu:2}  {len(rs):4}  {len(live):11}  {top:9.4f}")
