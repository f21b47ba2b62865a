"""
Command line
============

The ``diracbounds`` entry point runs the same pipeline from a config file:
``report`` prints invariants, bounds and verdicts, ``sweep`` writes CSV and
``verify`` runs the identity suite.
"""
from pathlib import Path

from diracbounds.cli import main

configs = Path(__file__).resolve().parent / "configs"

# %%
main(["report", str(configs / "m4_rho_sqrt10_3.cfg")])

# %%
main(["verify", str(configs / "s6.cfg"), "--seed", "1"])
