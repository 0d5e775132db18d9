#!/usr/bin/env python3
"""Dimensional audit table for the shipped monomial catalogs.

Loads each catalog permissively, evaluates every monomial's physical
dimension, and prints it next to the catalog's target so inconsistent
entries are visible at a glance.  Exits 1 if any catalog carries an
inconsistency it does not declare.
"""

import argparse
import sys

from pifmap.catalogs import CATALOG_NAMES, load_catalog
from pifmap.dimension import format_unit
from pifmap.featuremap import monomial_dimension, render_monomial


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "names", nargs="*", metavar="catalog",
        help=f"catalogs to audit (default: all of {', '.join(CATALOG_NAMES)})",
    )
    args = parser.parse_args(argv)
    for name in args.names:
        if name not in CATALOG_NAMES:
            parser.error(f"unknown catalog {name!r} (choose from {', '.join(CATALOG_NAMES)})")
    names = tuple(args.names) or CATALOG_NAMES

    undeclared = 0
    for name in names:
        spec = load_catalog(name, allow_inconsistent=True)
        target = format_unit(spec.target_dimension)
        print(f"{name}: {len(spec.monomials)} monomials, target [{target}]")
        for index, monomial in enumerate(spec.monomials):
            dimension = monomial_dimension(
                monomial,
                spec.column_dimensions,
                tuple(c.dimension for c in spec.constants),
            )
            consistent = dimension == spec.target_dimension
            declared = index in spec.inconsistent_indices
            if consistent:
                flag = "ok"
            elif declared:
                flag = "INCONSISTENT (declared)"
            else:
                flag = "INCONSISTENT (undeclared!)"
                undeclared += 1
            label = spec.monomial_names[index]
            rendered = render_monomial(spec, index)
            print(f"  {label:>10}  {rendered:<34} [{format_unit(dimension)}]  {flag}")
        print()
    return 1 if undeclared else 0


if __name__ == "__main__":
    sys.exit(main())
