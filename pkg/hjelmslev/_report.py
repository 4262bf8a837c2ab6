from typing import List, Optional, Sequence, Tuple

from ._errors import FormatError
from ._types import Parameters

Violation = Tuple[str, Tuple[int, ...]]


class VerificationReport:
    """
    VerificationReport - verdict of an axiom check

    Returned by every validator (planes, orthogonal arrays, Hjelmslev planes,
    uniformity). A failing report always carries at least one violation:
    an axiom id from Axioms and the ids that witness it.

    Usage:
        ```python
        report = verify_ph(structure)
        if report:
            t, r = report.parameters
        else:
            axiom, witness = report.violations[0]
        print(report.to_text())
        ```
    """

    def __init__(
        self,
        violations: Sequence[Violation] = (),
        parameters: Optional[Parameters] = None,
        uniformity: Optional[int] = None,
    ):
        self._violations: Tuple[Violation, ...] = tuple((axiom, tuple(int(i) for i in ids)) for axiom, ids in violations)
        self._parameters = None if self._violations else parameters
        self._uniformity = None if self._violations else uniformity

    @classmethod
    def failed(cls, axiom: str, *witness: int) -> "VerificationReport":
        return cls([(axiom, witness)])

    @property
    def passed(self) -> bool:
        return not self._violations

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def parameters(self) -> Optional[Parameters]:
        """(t, r) on pass; None on fail or when the check has no parameters."""
        return self._parameters

    @property
    def uniformity(self) -> Optional[int]:
        """1 or 2 for a passing uniformity check, otherwise None."""
        return self._uniformity

    @property
    def violations(self) -> Tuple[Violation, ...]:
        return self._violations

    def __bool__(self):
        return self.passed

    def __repr__(self):
        if self.passed:
            return f"VerificationReport(pass, parameters={self._parameters})"
        return f"VerificationReport(fail, first={self._violations[0]})"

    def __eq__(self, other):
        if not isinstance(other, VerificationReport):
            return NotImplemented
        return (self._violations, self._parameters, self._uniformity) == (
            other._violations,
            other._parameters,
            other._uniformity,
        )

    def to_text(self) -> str:
        out = [f"VERDICT {self.verdict}"]
        if self._parameters is not None:
            t, r = self._parameters
            out.append(f"PARAMS t={t} r={r}")
        for axiom, ids in self._violations:
            out.append(" ".join(["VIOLATION", axiom, *(str(i) for i in ids)]))
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "VerificationReport":
        """
        Parse the text written by to_text.

        Raises:
            FormatError: If the verdict line is missing or a line is malformed
        """
        rows = [(n, s.strip()) for n, s in enumerate(text.split("\n"), start=1) if s.strip()]
        if not rows or not rows[0][1].startswith("VERDICT "):
            raise FormatError(1, "report must start with 'VERDICT pass|fail'")
        verdict = rows[0][1].split(" ", 1)[1]
        if verdict not in ("pass", "fail"):
            raise FormatError(1, f"unknown verdict {verdict!r}")

        parameters = None
        violations: List[Violation] = []
        for n, s in rows[1:]:
            head, _, rest = s.partition(" ")
            try:
                if head == "PARAMS":
                    fields = dict(part.split("=", 1) for part in rest.split())
                    parameters = (int(fields["t"]), int(fields["r"]))
                elif head == "VIOLATION":
                    axiom, *ids = rest.split()
                    violations.append((axiom, tuple(int(i) for i in ids)))
                else:
                    raise FormatError(n, f"unexpected report line {s!r}")
            except (KeyError, ValueError):
                raise FormatError(n, f"malformed report line {s!r}") from None

        if (verdict == "pass") != (not violations):
            raise FormatError(0, "verdict disagrees with the violation list")
        return cls(violations, parameters)
