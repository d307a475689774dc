import sys
from pathlib import Path

from hypothesis import settings, strategies as st

from catgram.categories import Atom, Over, Under

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


def categories(atoms=("a", "b", "np", "n", "S"), max_leaves=6):
    return st.recursive(
        st.sampled_from(atoms).map(Atom),
        lambda inner: st.one_of(st.builds(Under, inner, inner), st.builds(Over, inner, inner)),
        max_leaves=max_leaves,
    )


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
