"""Run the full check suite on the bundled corpus and write JSON + markdown reports."""

import argparse
import sys

from fcorr.cli import main


def run():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--outdir", default=".")
    a = p.parse_args()
    rc = main(["suite", "--seed", str(a.seed), "--out", "%s/suite.json" % a.outdir])
    rc = max(rc, main(["suite", "--seed", str(a.seed), "--format", "markdown",
                       "--out", "%s/suite.md" % a.outdir]))
    rc = max(rc, main(["classes", "--out", "%s/classes.json" % a.outdir]))
    rc = max(rc, main(["transfer", "--out", "%s/transfer.json" % a.outdir]))
    return rc


if __name__ == "__main__":
    sys.exit(run())
