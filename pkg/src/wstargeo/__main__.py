"""``python -m wstargeo`` dispatches to the command line."""
from .cli import console_entry

console_entry()
