"""Static check registry and the suite report built from it."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-13
REPORT_COLUMNS = ["check", "case", "equation-tag", "value", "threshold", "status"]


class Mode(Enum):
    """Whether a check can fail a run."""

    ASSERT = "assert"
    LOG = "log"


class Status(Enum):
    """Outcome of one record."""

    PASS = "pass"
    FAIL = "fail"
    EXACT = "exact"
    LOG = "log-only"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class Check:
    """A named check, the equation it exercises and its acceptance window."""

    name: str
    equation: str
    suite: str
    mode: Mode = Mode.ASSERT
    low: float | None = None
    high: float | None = None

    @property
    def threshold(self) -> str:
        """Return the acceptance window as text."""
        if self.mode is Mode.LOG:
            return "-"
        if self.low is None:
            return f"<= {self.high:.0e}"
        return f"[{self.low:g}, {self.high:g}]"

    def accepts(self, value: float) -> bool:
        """Return whether ``value`` lies in the window."""
        if self.low is not None and not value >= self.low:
            return False
        return self.high is None or value <= self.high


ORDER_WINDOW = (3.6, 4.4)

REGISTRY: tuple[Check, ...] = (
    Check("algebra-closure", "Sec2-commutator", "algebra", high=1e-12),
    Check("algebra-jacobi", "Jacobi", "algebra", high=1e-12),
    Check("algebra-antisymmetry", "Sec2-structure-constants", "algebra", high=1e-12),
    Check("partial-convergence", "O(h2)-partial", "convergence", low=ORDER_WINDOW[0], high=ORDER_WINDOW[1]),
    Check("lambda-convergence", "Sec2-lambda", "convergence", low=ORDER_WINDOW[0], high=ORDER_WINDOW[1]),
    Check("oracle-matter", "Eq.3-dL/d(dphi)", "fields", high=1e-6),
    Check("oracle-gauge", "Eq.3-dL/d(dD)", "fields", high=1e-6),
    Check("global-invariance", "Eq.1-2-global", "fields", low=1.9, high=2.1),
    Check("local-invariance", "Eq.1-2-local", "fields", Mode.LOG),
    Check("F2-antisymmetry", "Eq.17-antisymmetry", "noether", high=1e-13),
    Check("J2-conservation", "Eq.20-conservation", "noether", high=1e-10),
    Check("J2-conservation-random", "Eq.22-conservation", "noether", high=1e-10),
    Check("mixing", "Eq.11-mixing", "noether", high=1e-12),
    Check("F2-covariance", "Eq.17-isovector", "noether", low=1.85, high=2.15),
    Check("eq25-plane-wave", "Eq.25-plane-wave", "noether", high=1e-10),
    Check("condition-eq5", "Eq.5", "noether", Mode.LOG),
    Check("condition-eq6a", "Eq.6a", "noether", Mode.LOG),
    Check("condition-eq6b", "Eq.6b", "noether", Mode.LOG),
    Check("condition-eq7a", "Eq.7a", "noether", Mode.LOG),
    Check("condition-eq7b", "Eq.7b", "noether", Mode.LOG),
    Check("J1-conservation", "Eq.12-conservation", "noether", Mode.LOG),
    Check("eq13", "Eq.13", "noether", Mode.LOG),
    Check("eq14", "Eq.14", "noether", Mode.LOG),
    Check("eq15", "Eq.15", "noether", Mode.LOG),
    Check("eq19-vs-20", "Eq.19", "noether", Mode.LOG),
    Check("eq24-vs-20", "Eq.24", "noether", Mode.LOG),
    Check("eq9-vs-23", "Eq.23", "noether", Mode.LOG),
    Check("eom-eq25", "Eq.25", "noether", Mode.LOG),
    Check("eom-eq26", "Eq.26", "noether", Mode.LOG),
    Check("akt-J1", "Sec3-reduction", "reduction", high=1e-12),
    Check("akt-J2", "Sec3-reduction", "reduction", high=1e-12),
)

CHECKS = {check.name: check for check in REGISTRY}


def list_checks() -> pd.DataFrame:
    """Return the registry as a table."""
    return pd.DataFrame(
        [
            {
                "check": check.name,
                "equation-tag": check.equation,
                "suite": check.suite,
                "mode": check.mode.value,
                "threshold": check.threshold,
            }
            for check in REGISTRY
        ]
    )


@dataclass(frozen=True)
class CheckRecord:
    """One evaluated check."""

    check: Check
    value: float
    status: Status
    case: str = ""

    @property
    def failed(self) -> bool:
        """Return whether this record fails the run."""
        return self.check.mode is Mode.ASSERT and self.status is Status.FAIL


@dataclass
class SuiteReport:
    """Records of a run in registry order of evaluation, plus the seed."""

    seed: int
    command: str = "run"
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, name: str, value: float, case: str = "", exact: bool = False) -> CheckRecord:
        """Evaluate ``value`` against the registered check ``name`` and keep the record."""
        check = CHECKS[name]
        if check.mode is Mode.LOG:
            status = Status.LOG
        elif exact:
            status = Status.EXACT
        else:
            status = Status.PASS if check.accepts(value) else Status.FAIL
        record = CheckRecord(check, float(value), status, case)
        level = logging.WARNING if record.failed else logging.INFO
        logger.log(level, "%s[%s] %s = %.6e (%s)", name, case, check.equation, value, status.value)
        self.records.append(record)
        return record

    def skip(self, name: str, case: str = "") -> CheckRecord:
        """Keep a record for a check that could not be evaluated."""
        record = CheckRecord(CHECKS[name], float("nan"), Status.SKIPPED, case)
        logger.info("%s[%s] skipped", name, case)
        self.records.append(record)
        return record

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def find(self, name: str) -> list[CheckRecord]:
        """Return every record of check ``name``."""
        return [record for record in self.records if record.check.name == name]

    @property
    def exit_status(self) -> int:
        """Return 1 if an asserted check failed and 0 otherwise."""
        return int(any(record.failed for record in self.records))

    def to_frame(self) -> pd.DataFrame:
        """Return one row per record."""
        return pd.DataFrame(
            [
                {
                    "check": record.check.name,
                    "case": record.case,
                    "equation-tag": record.check.equation,
                    "value": record.value,
                    "threshold": record.check.threshold,
                    "status": record.status.value,
                }
                for record in self.records
            ],
            columns=REPORT_COLUMNS,
        )

    def summary(self) -> str:
        """Return the human-readable rendering."""
        counts = {status: 0 for status in Status}
        for record in self.records:
            counts[record.status] += 1
        lines = [
            f"vgwb {self.command}: seed {self.seed}",
            ", ".join(f"{count} {status.value}" for status, count in counts.items() if count),
        ]
        width = max((len(record.check.name) + len(record.case) for record in self.records), default=0) + 3
        for record in self.records:
            label = f"{record.check.name}[{record.case}]" if record.case else record.check.name
            lines.append(
                f"{label:<{width}} {record.check.equation:<26} {record.value:>12.4e}  "
                f"{record.check.threshold:<14} {record.status.value}"
            )
        lines.append("FAILED" if self.exit_status else "OK")
        return "\n".join(lines) + "\n"

    def write(self, directory: str | Path) -> None:
        """Write report.csv (seed in a leading comment line) and summary.txt."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        with open(directory / "report.csv", "w", encoding="utf8", newline="") as f:
            f.write(f"# seed: {self.seed}\n")
            self.to_frame().to_csv(f, index=False, float_format="%.17g")
        with open(directory / "summary.txt", "w", encoding="utf8") as f:
            f.write(self.summary())
        logger.debug("Wrote report to %s", directory)
