"""Collects one summary line per acceptance criterion."""

LINES: list[str] = []


def record(number: int, title: str, passed: bool, detail: str) -> str:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}: {detail}"
    LINES.append(line)
    print(line)
    return line
