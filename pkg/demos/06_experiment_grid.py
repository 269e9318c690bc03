"""
The selection x loss x architecture grid
========================================

The bundled fixture (five tickers, 120 days) and its INI file drive the
whole pipeline. The same thing is available from the shell as
``cointforecast grid --config fixture.ini``.
"""
# %%
import shutil
import tempfile
from pathlib import Path

from cointforecast.datasets import fixture_dir
from cointforecast.experiment import ExperimentConfig, run_grid

work = Path(tempfile.mkdtemp())
shutil.copytree(fixture_dir(), work / "data")
config = ExperimentConfig.from_file(work / "data" / "fixture.ini")
config = config.with_overrides(output_dir=work / "runs", epochs=50)

# %%
report = run_grid(config)
print(report.table())
print("artifacts per cell:", sorted(p.name for p in (work / "runs" / report.rows[0].label).iterdir()))
