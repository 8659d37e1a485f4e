"""DIMACS CNF input and Max-3SAT(5) validation."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass


class DimacsError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """Clauses hold DIMACS literals: +v / -v for variable v in 1..num_vars."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def satisfies(self, assignment) -> bool:
        """``assignment[v - 1]`` is the truth value of variable v."""
        return all(any(bool(assignment[abs(l) - 1]) == (l > 0) for l in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(l) for l in c) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    literals: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 1 or header[1] < 0:
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before 'p cnf' header")
        try:
            literals.extend(int(tok) for tok in line.split())
        except ValueError:
            raise DimacsError(f"line {lineno}: non-integer literal in {line!r}") from None
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    num_vars, num_clauses = header
    if literals and literals[-1] != 0:
        literals.append(0)  # tolerate a missing final terminator
    clauses = []
    cur: list[int] = []
    for lit in literals:
        if lit == 0:
            if len(cur) != 3:
                raise DimacsError(f"clause {len(clauses) + 1} has {len(cur)} literals, expected 3")
            if len({abs(l) for l in cur}) != 3:
                raise DimacsError(f"clause {len(clauses) + 1} repeats a variable: {cur}")
            clauses.append(tuple(cur))
            cur = []
        else:
            if abs(lit) > num_vars:
                raise DimacsError(f"literal {lit} exceeds the declared {num_vars} variables")
            cur.append(lit)
    if len(clauses) != num_clauses:
        raise DimacsError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def validate_3sat5(F: CnfFormula) -> list[str]:
    """Violations of the Max-3SAT(5) shape; an empty list means valid."""
    problems = []
    if 3 * len(F.clauses) != 5 * F.num_vars:
        problems.append(
            f"clause count {len(F.clauses)} != 5n/3 for n={F.num_vars} variables"
        )
    for i, c in enumerate(F.clauses):
        if len(c) != 3 or len({abs(l) for l in c}) != 3:
            problems.append(f"clause {i} is not 3 distinct variables: {c}")
    occ = Counter(abs(l) for c in F.clauses for l in c)
    for v in range(1, F.num_vars + 1):
        if occ[v] != 5:
            problems.append(f"variable {v} occurs {occ[v]} times, expected 5")
    return problems


def find_satisfying_assignment(F: CnfFormula, max_vars: int = 24):
    """Brute force; returns a tuple of bools or None."""
    if F.num_vars > max_vars:
        raise ValueError(f"{F.num_vars} variables is beyond brute force (max {max_vars})")
    for bits in itertools.product((True, False), repeat=F.num_vars):
        if F.satisfies(bits):
            return bits
    return None
