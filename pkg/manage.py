#!/usr/bin/env python
"""Lançador `geotom`: subcomandos do toolkit e utilitários do Django (test, help)."""
import sys


def main():
    try:
        from tomography.cli import run
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    sys.exit(run(sys.argv))


if __name__ == '__main__':
    main()
