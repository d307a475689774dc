"""Cross-check the prover against a brute-force sequent-calculus saturation.

Uses a smaller universe than the acceptance suite so it runs in seconds.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from catgram.categories import group_check  # noqa: E402
from catgram.prover import Sequent, prove  # noqa: E402
from oracles import LambekOracle, target_sequents  # noqa: E402

start = time.perf_counter()
oracle = LambekOracle(atoms=("a", "b"), max_conn=3, bound=6)
total = derivable = disagreements = group_rejected = 0
for ant, goal in target_sequents(("a", "b"), max_len=3, max_conn=3):
    total += 1
    found = bool(prove(Sequent(ant, goal)))
    derivable += found
    disagreements += found != ((ant, goal) in oracle)
    group_rejected += not group_check(ant, goal)
print(f"{total} sequents, {derivable} derivable, {group_rejected} rejected by the "
      f"free group alone, {disagreements} disagreements "
      f"({time.perf_counter() - start:.1f} s)")
