"""
Foliation Toolkit - Demo Runner
Builds the default leaves, profiles them and runs every check on the named
test curves with a single command.

Usage:
    python run.py            # Run all steps
    python run.py --h2       # H² build and profile only
    python run.py --e2       # E² build and profile only
    python run.py --checks   # Curve checks only
"""

import subprocess
import sys
import argparse
from pathlib import Path

# Colors for terminal output
class Colors:
    HEADER = '\033[95m'
    BLUE = '\033[94m'
    CYAN = '\033[96m'
    GREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    END = '\033[0m'
    BOLD = '\033[1m'

BASE_DIR = Path(__file__).parent
OUT_DIR = BASE_DIR / 'out'
CLI = [sys.executable, '-m', 'foliation.main']

# Exit statuses and what they mean
EXIT_MEANINGS = {
    0: ('ok', Colors.GREEN),
    2: ('bad configuration or input', Colors.FAIL),
    3: ('curvature pinch not met', Colors.FAIL),
    4: ('check failed', Colors.WARNING),
}

STEPS = {
    'h2': [
        ('Build H² leaf', ['build', '--out', str(OUT_DIR / 'h2')]),
        ('Profile H² leaf', ['distortion', str(OUT_DIR / 'h2' / 'leaf.txt'), '--out', str(OUT_DIR / 'h2')]),
        ('H² leaf curvature', ['check', str(OUT_DIR / 'h2' / 'leaf.txt'), 'curvature']),
        ('H² leaf embedded', ['check', str(OUT_DIR / 'h2' / 'leaf.txt'), 'intersect']),
    ],
    'e2': [
        ('Build E² leaf', ['build', '--construction', 'e2', '--delta', '0.05', '--n-max', '3',
                           '--out', str(OUT_DIR / 'e2')]),
        ('Profile E² leaf', ['distortion', str(OUT_DIR / 'e2' / 'leaf.txt'), '--out', str(OUT_DIR / 'e2')]),
    ],
    'checks': [
        ('Horocycle law', ['check', 'horocycle', 'expbound']),
        ('Circle basepoints', ['check', 'hyperbolic-circle', 'monotone']),
        ('Figure-eight crossing', ['check', 'figure-eight', 'intersect']),
        ('Limacon crossing', ['check', 'limacon', 'intersect']),
    ],
}


def print_banner():
    """Print startup banner."""
    banner = f"""
{Colors.BOLD}{Colors.CYAN}
╔══════════════════════════════════════════════════════════════╗
║                  FOLIATION DISTORTION TOOLKIT                ║
║                          Demo Runner                         ║
╚══════════════════════════════════════════════════════════════╝
{Colors.END}
"""
    print(banner)


def print_status(step_name, message, color=Colors.GREEN):
    """Print colored status message."""
    print(f"{color}[{step_name}]{Colors.END} {message}")


def run_step(name, args):
    """Run one CLI invocation and report its exit status."""
    try:
        result = subprocess.run(CLI + args, cwd=str(BASE_DIR), capture_output=True, text=True)
    except FileNotFoundError as e:
        print_status(name, f"Command not found: {e}", Colors.FAIL)
        return None

    meaning, color = EXIT_MEANINGS.get(result.returncode, ('unexpected status', Colors.FAIL))
    print_status(name, f"exit {result.returncode} ({meaning})", color)
    for line in result.stdout.splitlines():
        if line.startswith(('VERDICT', '#')):
            print(f"    {line}")
    if result.returncode in (2, 3):
        for line in result.stderr.splitlines():
            print(f"    {Colors.FAIL}{line}{Colors.END}")
    return result.returncode


def main():
    """Main entry point."""
    parser = argparse.ArgumentParser(description='Foliation Toolkit Runner')
    parser.add_argument('--h2', action='store_true', help='H² build and profile only')
    parser.add_argument('--e2', action='store_true', help='E² build and profile only')
    parser.add_argument('--checks', action='store_true', help='Curve checks only')
    args = parser.parse_args()

    selected = [key for key in STEPS if getattr(args, key)] or list(STEPS)

    print_banner()
    OUT_DIR.mkdir(exist_ok=True)

    statuses = []
    for key in selected:
        print(f"\n{Colors.BOLD}Running {key} steps...{Colors.END}\n")
        for name, step_args in STEPS[key]:
            statuses.append(run_step(name, step_args))

    hard_failures = [s for s in statuses if s is None or s in (2, 3)]
    if hard_failures:
        print(f"\n{Colors.FAIL}{len(hard_failures)} step(s) could not run.{Colors.END}")
        sys.exit(1)
    print(f"\n{Colors.GREEN}All steps ran. Artifacts are in {OUT_DIR}{Colors.END}")


if __name__ == "__main__":
    main()
