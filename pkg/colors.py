# colors.py
import sys

try:
    from colorama import Fore, Style, init
    init(autoreset=True)
    COLORS_AVAILABLE = True
except Exception:
    COLORS_AVAILABLE = False

class Colors:
    STAGE = Fore.BLUE if COLORS_AVAILABLE else ""
    INLIER = Fore.GREEN if COLORS_AVAILABLE else ""
    OUTLIER = Fore.MAGENTA if COLORS_AVAILABLE else ""
    SUCCESS = Fore.GREEN if COLORS_AVAILABLE else ""
    ERROR = Fore.RED if COLORS_AVAILABLE else ""
    INFO = Fore.CYAN if COLORS_AVAILABLE else ""
    WARNING = Fore.YELLOW if COLORS_AVAILABLE else ""
    RESULT = Fore.LIGHTGREEN_EX if COLORS_AVAILABLE else ""
    BOLD = Style.BRIGHT if COLORS_AVAILABLE else ""
    RESET = Style.RESET_ALL if COLORS_AVAILABLE else ""

_VERBOSE = True

def set_verbose(flag: bool):
    """Toggle status output. Warnings and errors are printed regardless."""
    global _VERBOSE
    _VERBOSE = bool(flag)

def print_colored(text: str, color: str = "", style: str = ""):
    """Print text with specified color and style (no-op colors if colorama missing)."""
    if not _VERBOSE:
        return
    if COLORS_AVAILABLE:
        print(f"{style}{color}{text}{Colors.RESET}")
    else:
        print(text)

def print_warning(text: str, sink: list = None):
    """Print a warning; when a list is given the message is also appended to it."""
    if sink is not None:
        sink.append(text)
    if COLORS_AVAILABLE:
        print(f"{Colors.WARNING}Warning: {text}{Colors.RESET}")
    else:
        print(f"Warning: {text}")

def print_error(text: str):
    if COLORS_AVAILABLE:
        print(f"{Colors.ERROR}{text}{Colors.RESET}", file=sys.stderr)
    else:
        print(text, file=sys.stderr)
