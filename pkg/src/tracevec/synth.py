"""Synthetic benchmark generator.

Plants analogy categories of paired functions (an opener and a closer per
pair) into a large corpus of C-subset procedures, then returns the source
text together with the planted analogy suite.  Vectors trained on the
generated corpus should recover the pair structure, but only when the
right token classes are enabled; the templates are designed so that each
class carries a distinct, measurable share of the signal:

- ``long`` couplings separate opener and closer by twelve filler calls,
  so the pair link survives only through the dataflow token that
  re-emits the opener's name next to the closer.
- ``guard`` couplings separate them by ten fillers but guard the closer
  with a check of the opener's result, so the pair link also travels
  through the opener's comparison token (visible without dataflow
  tokens, invisible to a call-words-only view).
- ``check`` templates return a role-specific error code when a result
  is zero, giving openers and closers of each category distinct error
  contexts, flanked by role marker calls.
- ``store`` templates write a category-named field, a signal visible
  even to a call-words-only view.
- ``mix`` and ``mixcheck`` templates co-locate random words (and random
  comparison tokens) of one category, establishing small baseline
  co-occurrence counts for every intra-category combination so that the
  much larger planted counts stand out against a constrained floor
  instead of against unconstrained (absent) entries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bench import AnalogySuite, Category

__all__ = ["SyntheticSpec", "generate_benchmark"]

# Two errno codes per category: one marks the opener's failure path, the
# other the closer's, giving the two roles distinct semantic contexts.
_CATEGORY_CODES = [
    (12, 22), (16, 5), (2, 1), (13, 28),
    (17, 19), (11, 9), (30, 32), (20, 24),
]


@dataclass(frozen=True)
class SyntheticSpec:
    categories: int = 8
    pairs_per_category: int = 6
    helpers: int = 20
    seed: int = 0
    # procedures per pair, by template
    long_couplings: int = 120   # opener/closer linked only through dataflow
    guard_couplings: int = 200  # closer guarded by the opener's result check
    opener_checks: int = 60     # opener failure path returning an error code
    closer_checks: int = 60     # closer failure path returning an error code
    store_markers: int = 20     # category stores, role-neutral
    # procedures per category
    mixers: int = 150           # random word triples, plain calls
    check_mixers: int = 300     # random word pairs joined by a result check

    @property
    def total_procedures(self) -> int:
        per_pair = (self.long_couplings + self.guard_couplings
                    + self.opener_checks + self.closer_checks
                    + self.store_markers)
        per_category = self.mixers + self.check_mixers
        return (per_pair * self.pairs_per_category + per_category) * self.categories


def _opener(k: int, i: int) -> str:
    return f"grp{k}_open{i}"


def _closer(k: int, i: int) -> str:
    return f"grp{k}_close{i}"


def generate_benchmark(spec: SyntheticSpec = SyntheticSpec()) -> tuple[str, AnalogySuite]:
    """Emit (source text, planted analogy suite), deterministically."""
    if spec.categories > len(_CATEGORY_CODES):
        raise ValueError(f"at most {len(_CATEGORY_CODES)} categories supported")
    rng = random.Random(spec.seed)
    helper_pool = [f"helper{h}" for h in range(spec.helpers)]
    chunks: list[str] = []
    counter = 0

    def emit(body: str):
        nonlocal counter
        chunks.append(f"int p{counter:05d}{body}")
        counter += 1

    jobs = []
    for k in range(spec.categories):
        open_code, close_code = _CATEGORY_CODES[k]
        for i in range(spec.pairs_per_category):
            a, b = _opener(k, i), _closer(k, i)
            jobs += [("long", k, a, b, 0)] * spec.long_couplings
            jobs += [("guard", k, a, b, 0)] * spec.guard_couplings
            jobs += [("checko", k, a, b, open_code)] * spec.opener_checks
            jobs += [("checkc", k, b, a, close_code)] * spec.closer_checks
            jobs += [("store", k, a, b, 0)] * spec.store_markers
        jobs += [("mix", k, None, None, 0)] * spec.mixers
        jobs += [("mixcheck", k, None, None, 0)] * spec.check_mixers
    rng.shuffle(jobs)

    def category_words(k: int) -> list[str]:
        return [w for i in range(spec.pairs_per_category)
                for w in (_opener(k, i), _closer(k, i))]

    for kind, k, first, second, code in jobs:
        if kind == "long":
            # Twelve fillers put the closer outside a window of 10; only the
            # dataflow token re-emitting the opener's name restores the link.
            calls = "\n".join(f"    {h}();" for h in rng.sample(helper_pool, 12))
            emit(f"""(void) {{
    int r = {first}();
{calls}
    {second}(r);
    return 0;
}}
""")
        elif kind == "guard":
            # Ten fillers put the closer outside the window of the opener's
            # call word in every view; the opener's comparison token lands
            # next to the closer, restoring the link for any view that can
            # see comparison tokens.
            calls = "\n".join(f"    {h}();" for h in rng.sample(helper_pool, 10))
            emit(f"""(void) {{
    int r = {first}();
{calls}
    if (r) {{
        {second}();
    }}
    return 0;
}}
""")
        elif kind in ("checko", "checkc"):
            marker = f"grab{k}" if kind == "checko" else f"drop{k}"
            emit(f"""(void) {{
    {marker}();
    int r = {first}();
    if (r == 0) {{
        return -{code};
    }}
    return 0;
}}
""")
        elif kind == "store":
            h = rng.choice(helper_pool)
            which = rng.choice((first, second))
            emit(f"""(struct ctx *c) {{
    c->grp{k}_state = 1;
    {which}();
    {h}();
    return 0;
}}
""")
        elif kind == "mixcheck":
            w1, w2 = rng.sample(category_words(k), 2)
            emit(f"""(void) {{
    int r = {w1}();
    if (r) {{
        {w2}();
    }}
    return 0;
}}
""")
        else:  # mix
            calls = "\n".join(f"    {w}();" for w in rng.sample(category_words(k), 3))
            emit(f"""(void) {{
{calls}
    return 0;
}}
""")

    suite = AnalogySuite([
        Category("calls", f"grp{k}",
                 [(_opener(k, i), _closer(k, i)) for i in range(spec.pairs_per_category)])
        for k in range(spec.categories)
    ])
    return "\n".join(chunks), suite
