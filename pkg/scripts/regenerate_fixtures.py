"""Rewrite the golden JSON files under src/tropconf/fixtures (about half a minute)."""

import sys

from tropconf.corpus import BUILDERS, regenerate

if __name__ == "__main__":
    names = sys.argv[1:] or list(BUILDERS)
    for p in regenerate(names):
        print(p)
