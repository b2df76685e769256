"""Reports for a user-supplied catalog, and what a bad catalog looks like."""

import json
from pathlib import Path

from fluxcat.device import CatalogError, catalog_reports, load_catalog, parse_catalog
from fluxcat.reporting import reports_table

here = Path(__file__).resolve().parent
catalog = load_catalog(here / "custom_catalog.json")
reports = catalog_reports(catalog)
print(reports_table(reports))

# With a cross-section the report also bounds how finely the electron number
# would have to be resolved to see the difference, and checks the expansion.
long_al = reports[0]
print(f"N / dN_tot = {long_al.measurement_bound:.3g}, |dv|/v_crit = {long_al.validity.expansion_ratio:.2e}")
print("not computable for Nb-sweep:", reports[1].not_computable)

doc = json.loads((here / "custom_catalog.json").read_text(encoding="utf-8"))
doc["devices"][1]["loop_length"]["unit"] = "inch"
try:
    parse_catalog(json.dumps(doc, indent=2, ensure_ascii=False), "edited.json")
except CatalogError as exc:
    print("\nrejected:", exc)
