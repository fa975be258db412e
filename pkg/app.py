"""Main entry point for the lingwalk lab: ``python app.py <subcommand> ...``."""
import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
