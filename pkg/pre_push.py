#!/usr/bin/env python3
"""Run static analysis and the test suite on the project."""

import argparse
import sys
from subprocess import CalledProcessError, check_call


def do_process(args, shell=False):
    """Run program provided by args.

    Return ``True`` on success.

    Output failed message on non-zero exit and return False.

    Exit if command is not found.

    """
    print(f"Running: {' '.join(args)}")
    try:
        check_call(args, shell=shell)
    except CalledProcessError:
        print(f"\nFailed: {' '.join(args)}")
        return False
    except Exception as exc:
        sys.stderr.write(f"{str(exc)}\n")
        sys.exit(1)
    return True


def run_static():
    """Run the pre-commit hooks on every file."""
    return do_process(["pre-commit", "run", "--all-files"])


def run_tests(include_slow):
    """Run the unit and integration tests.

    The slow Monte Carlo runs are skipped unless ``include_slow`` is set.

    """
    args = [sys.executable, "-m", "pytest"]
    if not include_slow:
        args += ["-m", "not slow"]
    return do_process(args)


def main():
    parser = argparse.ArgumentParser(description="Run the checks a push needs.")
    parser.add_argument(
        "-n", "--no-tests", action="store_true", help="Only run the static checks."
    )
    parser.add_argument(
        "-s", "--slow", action="store_true", help="Include the slow Monte Carlo tests."
    )
    args = parser.parse_args()
    success = run_static()
    if not args.no_tests:
        success &= run_tests(args.slow)
    return int(not success)


if __name__ == "__main__":
    exit_code = main()
    print("\npre_push.py: Success!" if not exit_code else "\npre_push.py: Fail")
    sys.exit(exit_code)
