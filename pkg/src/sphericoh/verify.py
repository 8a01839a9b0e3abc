"""Identity verification suites behind ``sphericoh verify``.

Each suite yields :class:`Check` rows; a report is a CSV with columns
``check,param1,param2,expected,actual,pass``.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

from .grids import min_samples
from .identities import (RESIDUAL_LOWER, direct_legendre_sum, l2_norm_estimate,
                         legendre_sum_closed_form, monotone_sum_check, odd_even_split_check,
                         residual_threshold, threej_monotonicity_check, weighted_threej_sum)
from .wigner3j import threej

SUITES = ("legendre-sum", "residual", "monotone", "threej", "norms")


@dataclass(frozen=True)
class Check:
    check: str
    param1: object
    param2: object
    expected: object
    actual: object
    passed: bool


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def report_csv(rows) -> str:
    buf = io.StringIO()
    buf.write("check,param1,param2,expected,actual,pass\n")
    for r in rows:
        fields = [r.check, r.param1, r.param2, r.expected, r.actual, "true" if r.passed else "false"]
        buf.write(",".join(_fmt(f) for f in fields) + "\n")
    return buf.getvalue()


def legendre_sum_checks(max_degree: int):
    for l in range(1, max_degree + 1):
        base = residual_threshold(l)
        for m in (base, 2 * base, 5 * base):
            m = max(m, 2)
            direct = direct_legendre_sum(l, m)
            if l % 2:
                yield Check("legendre_sum_odd", l, m, 0.0, direct, abs(direct) <= 1e-10)
                continue
            total = float(legendre_sum_closed_form(l, m).total)
            ok = abs(total - direct) <= 1e-9 * max(1.0, abs(total))
            yield Check("legendre_sum_closed_form", l, m, total, direct, ok)


def residual_checks(max_degree: int):
    for l in range(4, max_degree + 1, 2):
        m = residual_threshold(l)
        r = float(legendre_sum_closed_form(l, m).residual)
        yield Check("residual_band", l, m, f"({RESIDUAL_LOWER} 0)", r, RESIDUAL_LOWER < r < 0)


def monotone_checks(max_degree: int):
    for B in range(3, max_degree + 2):
        m = min_samples(B)
        yield Check("even_sum_chain", B, m, True, monotone_sum_check(B, m), monotone_sum_check(B, m))


def threej_checks(max_degree: int):
    top = min(max_degree, 12)
    for l1 in range(top + 1):
        for l2 in range(top + 1):
            worst = 0.0
            for k1 in range(-l1, l1 + 1):
                for k2 in range(-l2, l2 + 1):
                    s = math.fsum((2 * lh + 1) * threej(l1, l2, lh, k1, k2, -k1 - k2) ** 2
                                  for lh in range(abs(l1 - l2), l1 + l2 + 1))
                    worst = max(worst, abs(s - 1.0))
            yield Check("threej_orthogonality", l1, l2, 1.0, 1.0 + worst, worst <= 1e-11)

    for l2 in range(1, max_degree + 1):
        for l1 in range(l2):
            ok = all(threej_monotonicity_check(l1, l2, l3)
                     for l3 in range(l2 - l1, l1 + l2 + 1, 2))
            yield Check("threej_zero_monotone", l1, l2, True, ok, ok)

    for l1 in range(top + 1):
        for l2 in range(top + 1):
            if l1 == l2:
                continue
            mn = min(l1, l2)
            worst = 0.0
            for k in range(-mn, mn + 1):
                for n in range(-mn, mn + 1):
                    even, odd = odd_even_split_check(l1, l2, k, n)
                    if k == n == 0:
                        want = (1.0, 0.0) if (l1 + l2) % 2 == 0 else (0.0, 1.0)
                    elif k == n:
                        want = (0.5, 0.5)
                    elif k == -n:
                        # (l1 l2 lh; k -k 0) = (-1)^(l1+l2+lh) (l1 l2 lh; -k k 0)
                        sign = 1.0 if (l1 + l2) % 2 == 0 else -1.0
                        want = (0.5 * sign, -0.5 * sign)
                    else:
                        want = (0.0, 0.0)
                    worst = max(worst, abs(even - want[0]), abs(odd - want[1]))
            yield Check("threej_parity_split", l1, l2, 0.0, worst, worst <= 1e-12)

    for l1 in range(max_degree + 1):
        got = weighted_threej_sum(l1)
        want = 2 + 2 * (l1 + 2) * (l1 + 1)
        yield Check("threej_weighted_sum", l1, l1 + 2, want, got, got == want)


def norm_checks(max_degree: int):
    sizes = (50, 100, 200, 400)
    for l in range(min(max_degree, 10) + 1):
        for k in range(-l, l + 1):
            for n in range(-l, l + 1):
                errs = [l2_norm_estimate(l, k, n, m)[2] for m in sizes]
                ok = all(b <= 0.6 * a or b <= 1e-12 for a, b in zip(errs, errs[1:]))
                yield Check("norm_estimate_decay", f"{l}:{k}:{n}", sizes[-1], "O(1/m)", errs[-1], ok)


_SUITE_FUNCS = {
    "legendre-sum": legendre_sum_checks,
    "residual": residual_checks,
    "monotone": monotone_checks,
    "threej": threej_checks,
    "norms": norm_checks,
}


def run_suite(name: str, max_degree: int) -> list[Check]:
    names = SUITES if name == "all" else (name,)
    rows = []
    for n in names:
        rows.extend(_SUITE_FUNCS[n](max_degree))
    return rows
