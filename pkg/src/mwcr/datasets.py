"""Access to the packaged example dataset.

``data/follic.txt`` is a synthetic cohort of 541 subjects in the layout of a
follicular-lymphoma follow-up table (columns age, hgb, clinstg, ch, rt, resp,
relsite, stat, dftime).  It was generated from the modified Weibull
competing-risks model itself (see tools/make_follicular_fixture.py in the
source tree) and calibrated so that the three outcome groups hold 193
censored subjects, 272 disease events and 76 deaths without relapse.
"""

from __future__ import annotations

import hashlib
from importlib.resources import files

from .ingest import parse_dataset

__all__ = ["FOLLICULAR_SHA256", "follicular_path", "load_follicular"]

FOLLICULAR_SHA256 = "3487f7fff9a937f9fed16a7e5b8f5e8ce2135ea81fd36693054d087e94bb15c0"


def follicular_path():
    """Filesystem path of the bundled example table."""
    return files("mwcr").joinpath("data/follic.txt")


def follicular_sha256():
    """Hex digest of the bundled table's bytes."""
    return hashlib.sha256(follicular_path().read_bytes()).hexdigest()


def load_follicular():
    """Parse the bundled example table into rows."""
    with follicular_path().open("rb") as fh:
        return parse_dataset(fh)
