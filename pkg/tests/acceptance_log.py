"""PASS/FAIL lines collected by the acceptance suite, printed at session end."""

LINES: list[str] = []


def record(n: int, ok: bool, detail: str) -> str:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    LINES.append(line)
    print(line)
    return line
