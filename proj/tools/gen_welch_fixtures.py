#!/usr/bin/env python3
"""Regenerates tests/fixtures/welch_cases.json.

Reference values come from scipy.stats.ttest_ind(equal_var=False). The file
is committed; rerun this only when adding cases, then inspect the diff.
"""

import json
import pathlib

import numpy as np
from scipy import stats

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "welch_cases.json"


def case(name, a, b):
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    res = stats.ttest_ind(a, b, equal_var=False)
    entry = {
        "name": name,
        "a": a,
        "b": b,
        "t": float(res.statistic),
        "p": float(res.pvalue),
    }
    df = getattr(res, "df", None)
    if df is not None:
        entry["df"] = float(df)
    return entry


def main():
    rng = np.random.default_rng(20260825)
    cases = [case("handworked_example", [1, 2, 3, 4, 5], [2, 4, 6, 8, 10])]

    for i in range(12):
        na = int(rng.integers(2, 40))
        nb = int(rng.integers(2, 40))
        a = rng.normal(rng.uniform(-5, 5), rng.uniform(0.2, 4.0), na)
        b = rng.normal(rng.uniform(-5, 5), rng.uniform(0.2, 4.0), nb)
        cases.append(case(f"normal_{i}", a, b))

    for i in range(6):
        na = int(rng.integers(5, 200))
        nb = int(rng.integers(5, 200))
        a = rng.uniform(0, 1, na)
        b = rng.uniform(0, 1, nb) * rng.uniform(0.5, 2.0) + rng.uniform(-0.2, 0.2)
        cases.append(case(f"uniform_{i}", a, b))

    for i in range(3):
        a = rng.standard_cauchy(int(rng.integers(10, 60)))
        b = rng.standard_cauchy(int(rng.integers(10, 60)))
        cases.append(case(f"heavy_{i}", a, b))

    # Deliberate stress: huge separation (tiny p), near-identical means
    # (p ~ 1), wildly unequal variances and sizes.
    cases.append(case("separated", rng.normal(0, 0.1, 50), rng.normal(25, 0.1, 50)))
    cases.append(case("near_null", rng.normal(0, 1, 400), rng.normal(0.001, 1, 380)))
    cases.append(case("lopsided", rng.normal(0, 20, 5), rng.normal(1, 0.01, 900)))
    cases.append(case("tiny_groups", [0.0, 1.0], [10.0, 10.5]))

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"source": "scipy.stats.ttest_ind equal_var=False",
                               "scipy_version": __import__("scipy").__version__,
                               "cases": cases}, indent=1) + "\n")
    print(f"wrote {OUT} with {len(cases)} cases")


if __name__ == "__main__":
    main()
