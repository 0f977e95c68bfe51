from dataclasses import dataclass, field

from .errors import CheckFailed


@dataclass
class Certificate:
    """Outcome of an exhaustive or sampled verification run."""

    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    summary: str = ""

    @property
    def passed(self):
        return not self.failures

    def record(self, ok, what=None):
        self.cases += 1
        if not ok:
            self.failures.append(what if what is not None else f"case {self.cases}")
        return ok

    def merge(self, other):
        self.cases += other.cases
        self.failures.extend(f"{other.name}: {f}" for f in other.failures)
        return self

    def raise_if_failed(self):
        if self.failures:
            raise CheckFailed(self.name, f"{len(self.failures)} of {self.cases} cases failed; first: {self.failures[0]}")
        return self

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.cases} cases"
        if self.failures:
            text += f", {len(self.failures)} failures"
        if self.summary:
            text += f" ({self.summary})"
        return text

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": list(self.failures[:20]),
            "summary": self.summary,
            "details": self.details,
        }
