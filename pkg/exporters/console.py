from typing import Iterable, List

import click

from blochlab.verification import CheckResult

# click colours per outcome
PASS_COLOR = "green"
FAIL_COLOR = "red"


class ConsoleTable:

    def __init__(self, color: bool = True):
        """
        Initialize the table printer.

        Args:
            color: Colour the status column
        """
        self.color = color

    def _status(self, passed: bool) -> str:
        text = "PASS" if passed else "FAIL"
        if not self.color:
            return text
        return click.style(text, fg=PASS_COLOR if passed else FAIL_COLOR, bold=True)

    def render(self, results: Iterable[CheckResult]) -> List[str]:
        """
        Format check outcomes as aligned table lines.

        Args:
            results: Outcomes to show, in order

        Returns:
            Lines, header first and summary last
        """
        results = list(results)
        suite_width = max([len("suite")] + [len(r.suite) for r in results])
        name_width = max([len("check")] + [len(r.name) for r in results])

        lines = [f"{'suite':<{suite_width}}  {'check':<{name_width}}  status  detail"]
        for r in results:
            lines.append(f"{r.suite:<{suite_width}}  {r.name:<{name_width}}  {self._status(r.passed)}    {r.detail}")

        failed = sum(1 for r in results if not r.passed)
        lines.append(f"{len(results) - failed}/{len(results)} checks passed")
        return lines

    def show(self, results: Iterable[CheckResult]) -> None:
        for line in self.render(results):
            click.echo(line)
