"""How the cat size of the Delft qubit scales with its loop length."""

import sys

from fluxcat import load_catalog
from fluxcat.cli import sweep
from fluxcat.reporting import records_csv

catalog = load_catalog()
result = sweep(catalog, "Delft", "loop_length", 20e-6, 200e-6, 10)

# Linear in L, so ten times the loop gives ten times the electrons.
sys.stdout.write(records_csv(result["rows"], ["param_value", "delta_N_tot", "delta_mu_over_muB"]))
first, last = result["rows"][0]["delta_N_tot"], result["rows"][-1]["delta_N_tot"]
print(f"\n{first:.1f} -> {last:.1f} electrons, ratio {last / first:.6f}")
