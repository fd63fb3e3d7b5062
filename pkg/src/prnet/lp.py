"""Exact rational linear programming over the (3,2,2) no-signaling set.

Everything here is `fractions.Fraction` arithmetic on a dense two-phase
simplex tableau with Bland's anti-cycling rule. No optimum is trusted from
pivoting alone: `solve` re-verifies primal feasibility by substitution and
certifies optimality with an exact dual (equal objectives plus
complementary slackness) before returning; infeasibility and unboundedness
come with their own certificates. Problem sizes are tiny (64 variables,
order-100 equality rows, redundant rows retained on purpose), so a dense
tableau is the right tool.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .behavior import Behavior
from .bell import bell_score

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LinearProgram:
    """min objective . x  subject to  rows . x = rhs, x >= 0."""

    objective: list[Fraction]
    rows: list[list[Fraction]]
    rhs: list[Fraction]
    row_names: list[str] = field(default_factory=list)
    var_names: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        n = len(self.objective)
        if any(len(r) != n for r in self.rows) or len(self.rhs) != len(self.rows):
            raise ValueError("inconsistent LP dimensions")
        if not self.row_names:
            self.row_names = [f"row{i}" for i in range(len(self.rows))]
        if not self.var_names:
            self.var_names = [f"x{j}" for j in range(n)]

    def to_json(self) -> dict:
        return {
            "objective": [_frac_str(v) for v in self.objective],
            "rows": {
                name: [_frac_str(v) for v in row]
                for name, row in zip(self.row_names, self.rows)
            },
            "rhs": [_frac_str(v) for v in self.rhs],
            "variables": list(self.var_names),
        }


@dataclass
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    primal: list[Fraction] | None = None
    dual: list[Fraction] | None = None
    ray: list[Fraction] | None = None
    farkas: list[Fraction] | None = None

    def to_json(self) -> dict:
        def fmt(vec):
            return None if vec is None else [_frac_str(v) for v in vec]

        return {
            "status": self.status,
            "value": None if self.value is None else _frac_str(self.value),
            "primal": fmt(self.primal),
            "dual": fmt(self.dual),
            "ray": fmt(self.ray),
            "farkas": fmt(self.farkas),
        }


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


class CertificateError(AssertionError):
    pass


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), ZERO)


def verify_certificates(lp: LinearProgram, sol: LPSolution) -> None:
    """Exact re-check of whichever certificate the solution carries."""
    m, n = len(lp.rows), len(lp.objective)
    if sol.status == "optimal":
        x, y = sol.primal, sol.dual
        assert x is not None and y is not None
        if len(x) != n or len(y) != m:
            raise CertificateError("certificate dimensions wrong")
        if any(v < 0 for v in x):
            raise CertificateError("primal point has a negative coordinate")
        for i, row in enumerate(lp.rows):
            if _dot(row, x) != lp.rhs[i]:
                raise CertificateError(f"primal violates equality {lp.row_names[i]}")
        reduced = [
            lp.objective[j] - sum(y[i] * lp.rows[i][j] for i in range(m) if lp.rows[i][j])
            for j in range(n)
        ]
        if any(r < 0 for r in reduced):
            raise CertificateError("dual is infeasible (negative reduced cost)")
        if _dot(lp.objective, x) != _dot(lp.rhs, y):
            raise CertificateError("objective values of primal and dual differ")
        if any(x[j] * reduced[j] != 0 for j in range(n)):
            raise CertificateError("complementary slackness fails")
        if sol.value != _dot(lp.objective, x):
            raise CertificateError("reported value differs from objective at primal")
    elif sol.status == "infeasible":
        y = sol.farkas
        assert y is not None
        for j in range(n):
            if sum(y[i] * lp.rows[i][j] for i in range(m)) > 0:
                raise CertificateError("Farkas vector fails y.A <= 0")
        if _dot(lp.rhs, y) <= 0:
            raise CertificateError("Farkas vector fails y.b > 0")
    elif sol.status == "unbounded":
        x, d = sol.primal, sol.ray
        assert x is not None and d is not None
        if any(v < 0 for v in x) or any(v < 0 for v in d):
            raise CertificateError("ray certificate has negative coordinates")
        for i, row in enumerate(lp.rows):
            if _dot(row, x) != lp.rhs[i] or _dot(row, d) != 0:
                raise CertificateError("ray certificate violates equalities")
        if _dot(lp.objective, d) >= 0:
            raise CertificateError("ray does not improve the objective")
    else:
        raise CertificateError(f"unknown status {sol.status!r}")


def solve(lp: LinearProgram) -> LPSolution:
    """Two-phase exact simplex (Bland's rule); certificates verified before
    the solution is returned."""
    m, n = len(lp.rows), len(lp.objective)
    # tableau columns: n original, m artificial, 1 rhs
    tab = []
    for i in range(m):
        sign = -1 if lp.rhs[i] < 0 else 1
        row = [sign * v for v in lp.rows[i]]
        row += [ONE if k == i else ZERO for k in range(m)]
        row.append(sign * lp.rhs[i])
        tab.append(row)
    basis = [n + i for i in range(m)]
    width = n + m + 1

    def pivot(r: int, c: int) -> None:
        pv = tab[r][c]
        tab[r] = [v / pv for v in tab[r]]
        prow = tab[r]
        for i in range(m):
            if i != r and tab[i][c]:
                f = tab[i][c]
                tab[i] = [v - f * pv2 for v, pv2 in zip(tab[i], prow)]
        if obj[c]:
            f = obj[c]
            for j in range(width):
                obj[j] -= f * prow[j]
        basis[r] = c

    def run(allowed: Callable[[int], bool]) -> str:
        while True:
            enter = -1
            for j in range(n + m):
                if obj[j] < 0 and allowed(j):
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave, best, best_var = -1, None, None
            for i in range(m):
                if tab[i][enter] > 0:
                    ratio = tab[i][width - 1] / tab[i][enter]
                    if best is None or ratio < best or (ratio == best and basis[i] < best_var):
                        leave, best, best_var = i, ratio, basis[i]
            if leave < 0:
                return "unbounded"
            pivot(leave, enter)

    # phase 1: minimize the sum of artificials
    obj = [ZERO] * width
    for j in range(width):
        obj[j] = -sum(tab[i][j] for i in range(m))
    for i in range(m):
        obj[n + i] = ZERO
    status = run(lambda j: True)
    assert status == "optimal"  # phase 1 is bounded below by 0
    phase1_value = -obj[width - 1]
    if phase1_value > 0:
        # phase-1 duals: y'_i = 1 - reduced_cost(artificial i); rows that
        # were sign-flipped to make rhs nonnegative flip their dual back
        farkas = [
            (-1 if lp.rhs[i] < 0 else 1) * (ONE - obj[n + i]) for i in range(m)
        ]
        sol = LPSolution("infeasible", farkas=farkas)
        verify_certificates(lp, sol)
        return sol

    # drive artificials out of the basis where possible; a row whose
    # original coefficients are all zero is redundant and stays inert
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if tab[i][j] != 0:
                    pivot(i, j)
                    break

    # phase 2
    obj = [ZERO] * width
    for j in range(n):
        obj[j] = lp.objective[j]
    for i in range(m):
        if basis[i] < n and obj[basis[i]]:
            f = obj[basis[i]]
            for j in range(width):
                obj[j] -= f * tab[i][j]
    status = run(lambda j: j < n)
    if status == "unbounded":
        enter = next(j for j in range(n) if obj[j] < 0 and all(tab[i][j] <= 0 for i in range(m)))
        x = [ZERO] * n
        for i in range(m):
            if basis[i] < n:
                x[basis[i]] = tab[i][width - 1]
        d = [ZERO] * n
        d[enter] = ONE
        for i in range(m):
            if basis[i] < n:
                d[basis[i]] = -tab[i][enter]
        sol = LPSolution("unbounded", primal=x, ray=d)
        verify_certificates(lp, sol)
        return sol

    x = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][width - 1]
    # duals read off the artificial columns (they carry basis-inverse);
    # sign-flipped rows flip their dual back
    cost = {basis[i]: lp.objective[basis[i]] for i in range(m) if basis[i] < n}
    y = []
    for i in range(m):
        yi = sum(
            cost[basis[k]] * tab[k][n + i] for k in range(m) if basis[k] in cost
        ) if cost else ZERO
        y.append(-yi if lp.rhs[i] < 0 else yi)
    sol = LPSolution("optimal", value=_dot(lp.objective, x), primal=x, dual=y)
    verify_certificates(lp, sol)
    return sol


# ---------------------------------------------------------------------------
# the (3,2,2) no-signaling equality system over 64 variables P(abc|xyz)


def var_index(xyz: int, abc: int) -> int:
    return xyz * 8 + abc


def _var_names() -> list[str]:
    from .behavior import outcome_label, setting_label

    return [
        f"P({outcome_label(abc)}|{setting_label(xyz)})"
        for xyz in range(8)
        for abc in range(8)
    ]


def ns_equality_rows() -> tuple[list[list[Fraction]], list[Fraction], list[str]]:
    """Normalization plus the full no-signaling equality set.

    Single-party marginals equal across all four remote-setting pairs and
    two-party marginals equal across the remote setting. The set is
    deliberately redundant; the solver tolerates the rank deficiency.
    """
    from .behavior import setting_label

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    names: list[str] = []

    def new_row() -> list[Fraction]:
        return [ZERO] * 64

    for xyz in range(8):
        row = new_row()
        for abc in range(8):
            row[var_index(xyz, abc)] = ONE
        rows.append(row)
        rhs.append(ONE)
        names.append(f"norm[{setting_label(xyz)}]")

    party_names = "ABC"
    for party in range(3):
        remotes = [q for q in range(3) if q != party]
        for own in (0, 1):
            for outcome in (0, 1):
                base_bits = [0, 0, 0]
                base_bits[party] = own
                base_xyz = base_bits[0] << 2 | base_bits[1] << 1 | base_bits[2]
                for r0 in (0, 1):
                    for r1 in (0, 1):
                        if (r0, r1) == (0, 0):
                            continue
                        bits = [0, 0, 0]
                        bits[party] = own
                        bits[remotes[0]], bits[remotes[1]] = r0, r1
                        xyz = bits[0] << 2 | bits[1] << 1 | bits[2]
                        row = new_row()
                        for abc in range(8):
                            if (abc >> (2 - party)) & 1 == outcome:
                                row[var_index(base_xyz, abc)] += ONE
                                row[var_index(xyz, abc)] -= ONE
                        rows.append(row)
                        rhs.append(ZERO)
                        names.append(
                            f"marg[{party_names[party]}={'+' if outcome else '0'}|"
                            f"{setting_label(base_xyz)} vs {setting_label(xyz)}]"
                        )
    for i in range(3):
        for j in range(i + 1, 3):
            third = next(q for q in range(3) if q not in (i, j))
            for si in (0, 1):
                for sj in (0, 1):
                    for oi in (0, 1):
                        for oj in (0, 1):
                            bits = [0, 0, 0]
                            bits[i], bits[j] = si, sj
                            bits[third] = 0
                            xyz0 = bits[0] << 2 | bits[1] << 1 | bits[2]
                            bits[third] = 1
                            xyz1 = bits[0] << 2 | bits[1] << 1 | bits[2]
                            row = new_row()
                            for abc in range(8):
                                if ((abc >> (2 - i)) & 1, (abc >> (2 - j)) & 1) == (oi, oj):
                                    row[var_index(xyz0, abc)] += ONE
                                    row[var_index(xyz1, abc)] -= ONE
                            rows.append(row)
                            rhs.append(ZERO)
                            names.append(
                                f"marg[{party_names[i]}{party_names[j]}="
                                f"{'+' if oi else '0'}{'+' if oj else '0'}|"
                                f"{setting_label(xyz0)} vs {setting_label(xyz1)}]"
                            )
    return rows, rhs, names


def _fixed_output_objective() -> list[Fraction]:
    """P(A!=B|abc') + P(A!=B|ab'c') + P(parity even|a'bc') + P(parity odd|a'b'c')."""
    c = [ZERO] * 64
    for abc in range(8):
        a, b, cc = (abc >> 2) & 1, (abc >> 1) & 1, abc & 1
        if a != b:
            c[var_index(0b001, abc)] += ONE
            c[var_index(0b011, abc)] += ONE
        if (a ^ b ^ cc) == 0:
            c[var_index(0b101, abc)] += ONE
        else:
            c[var_index(0b111, abc)] += ONE
    return c


def chsh_variant_program(fixed_outcome: str | None) -> LinearProgram:
    """The four-term CHSH-like objective over NS, optionally with Alice's
    setting-a outcome pinned to '+' or '0' on every remote setting pair."""
    rows, rhs, names = ns_equality_rows()
    if fixed_outcome is not None:
        if fixed_outcome not in ("+", "0"):
            raise ValueError("fixed outcome must be '+' or '0'")
        k = 1 if fixed_outcome == "+" else 0
        from .behavior import setting_label

        for y in (0, 1):
            for z in (0, 1):
                xyz = y << 1 | z
                row = [ZERO] * 64
                for abc in range(8):
                    if (abc >> 2) & 1 == k:
                        row[var_index(xyz, abc)] = ONE
                rows.append(row)
                rhs.append(ONE)
                names.append(f"fixed[A={fixed_outcome}|{setting_label(xyz)}]")
    return LinearProgram(_fixed_output_objective(), rows, rhs, names, _var_names())


def fixed_output_bound(fixed_outcome: str) -> LPSolution:
    """Certified minimum of the four-term quantity when Alice's setting-a
    outcome is constant; equals exactly 1 for either constant."""
    return solve(chsh_variant_program(fixed_outcome))


def min_bell_expectation_program() -> LinearProgram:
    """min E(F) over the whole no-signaling set (exploratory)."""
    rows, rhs, names = ns_equality_rows()
    c = [Fraction(bell_score(abc, xyz), 8) for xyz in range(8) for abc in range(8)]
    return LinearProgram(c, rows, rhs, names, _var_names())


def ns_membership(behavior: Behavior, tol: float = 1e-12) -> tuple[bool, list[str]]:
    """Direct substitution into the NS equality system; no LP run.

    Exact behaviors must satisfy every equality exactly; float behaviors
    within `tol`. Returns (is_member, violated equality names).
    """
    rows, rhs, names = ns_equality_rows()
    x = [behavior.table[xyz][abc] for xyz in range(8) for abc in range(8)]
    violations = []
    exact = behavior.mode == "exact"
    for row, b, name in zip(rows, rhs, names):
        lhs = sum(c * v for c, v in zip(row, x) if c)
        if exact:
            bad = lhs != b
        else:
            bad = abs(float(lhs) - float(b)) > tol
        if bad:
            violations.append(name)
    if any(v < 0 for v in x):
        violations.append("nonnegativity")
    return not violations, violations


def behavior_from_primal(primal: list[Fraction]) -> Behavior:
    table = [[primal[var_index(xyz, abc)] for abc in range(8)] for xyz in range(8)]
    return Behavior("exact", table, {"source": "lp-primal"})
