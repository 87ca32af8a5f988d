"""Shared test helpers: an independent determinant oracle and small random
polynomial generators.

The oracle expands along the last column with no memoization, so it shares
no code path with the library's memoized first-row expansion.
"""

from fractions import Fraction

from gnlab import Polynomial, VarRegistry


def cofactor_det(rows):
    """Plain cofactor expansion along the last column.

    `rows` is a square list-of-lists of Polynomials sharing one registry.
    """
    size = len(rows)
    if size == 1:
        return rows[0][0]
    last = size - 1
    out = None
    for r in range(size):
        entry = rows[r][last]
        if entry.is_zero:
            continue
        minor = [[rows[i][j] for j in range(last)]
                 for i in range(size) if i != r]
        term = entry * cofactor_det(minor)
        if (r + last) % 2:
            term = -term
        out = term if out is None else out + term
    if out is None:
        return rows[0][0].registry.zero()
    return out


def random_poly(reg: VarRegistry, rng, names=None, max_terms=4,
                max_degree=3) -> Polynomial:
    """Small random polynomial with integer coefficients in [-9, 9]."""
    if names is None:
        names = [v.name for v in reg.var_ids]
    out = reg.zero()
    for _ in range(rng.randint(1, max_terms)):
        term = reg.const(Fraction(rng.randint(-9, 9)))
        for _ in range(rng.randint(0, max_degree)):
            term = term * reg.poly(rng.choice(names))
        out = out + term
    return out


def rational_point(reg: VarRegistry, rng) -> dict:
    return {v: Fraction(rng.randint(-50, 50), rng.randint(1, 7))
            for v in reg.var_ids}


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_" not in nodeid:
                continue
            name = nodeid.split("::test_", 1)[1]
            num, _, label = name.partition("_")
            status = "PASS" if outcome == "passed" else "FAIL"
            lines[num] = f"ACCEPTANCE {num} {label}: {status}"
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
