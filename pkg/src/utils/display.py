import sys

from colorama import Fore, Style
from tabulate import tabulate

from src.data.models import CheckResult
from src.utils.report import convert_to_serializable


def _format_cell(value) -> str:
    value = convert_to_serializable(value)
    if isinstance(value, bool):
        return f"{Fore.GREEN}yes{Style.RESET_ALL}" if value else f"{Fore.RED}no{Style.RESET_ALL}"
    if isinstance(value, float):
        return f"{value:.6g}"
    if value is None:
        return "-"
    return str(value)


def print_check_output(result: CheckResult, columns: list[str] | None = None, max_rows: int = 40) -> None:
    """
    Print a check's records as a table followed by its verdict and findings.

    Args:
        result (CheckResult): the finished check
        columns (list[str]): record keys to show, defaults to the keys of the first record
        max_rows (int): rows beyond this are elided from the table
    """
    rows = result.rows if result.rows else result.records
    print(f"\n{Fore.WHITE}{Style.BRIGHT}{result.name.upper()}{Style.RESET_ALL}")
    print(f"{Fore.WHITE}{Style.BRIGHT}{'=' * 50}{Style.RESET_ALL}")

    if rows:
        columns = columns or list(rows[0].keys())
        table_data = [[_format_cell(row.get(column)) for column in columns] for row in rows[:max_rows]]
        print(tabulate(table_data, headers=[f"{Fore.WHITE}{column}" for column in columns], tablefmt="grid", numalign="right"))
        if len(rows) > max_rows:
            print(f"{Fore.WHITE}... {len(rows) - max_rows} more rows{Style.RESET_ALL}")

    for finding in result.findings:
        print(f"{Fore.YELLOW}finding:{Style.RESET_ALL} {finding}")

    verdict = f"{Fore.GREEN}PASS" if result.passed else f"{Fore.RED}FAIL"
    print(f"\n{Style.BRIGHT}Result: {verdict}{Style.RESET_ALL}")


def print_error(message: str) -> None:
    print(f"{Fore.RED}{message}{Style.RESET_ALL}", file=sys.stderr)
