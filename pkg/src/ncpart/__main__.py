"""Run the command-line front end via ``python -m ncpart``."""

from .cli import entry

if __name__ == "__main__":
    raise SystemExit(entry())
