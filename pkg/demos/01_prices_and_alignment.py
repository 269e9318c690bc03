"""
Loading and aligning daily closes
=================================

Price files are two-column CSVs (``Date``, ``Close``). Gaps can be written
as ``null``, ``NaN`` or left empty. Series on different calendars are put
on one calendar and the holes are filled by linear interpolation.
"""
# %%
import tempfile
from pathlib import Path

from cointforecast.timeseries import (
    align_and_interpolate, chrono_split, load_csv, log_returns, make_windows,
)

tmp = Path(tempfile.mkdtemp())
(tmp / "COIN.csv").write_text(
    "Date,Close\n"
    "2021-03-01,100\n2021-03-02,102\n2021-03-03,null\n2021-03-04,106\n"
    "2021-03-05,104\n2021-03-06,103\n2021-03-07,101\n2021-03-08,99\n"
)
(tmp / "IDX.csv").write_text(
    "Date,Close\n"
    "2021-03-08,3821.35\n2021-03-01,3901.82\n2021-03-02,3870.29\n"
    "2021-03-03,3819.72\n2021-03-04,3768.47\n2021-03-05,3841.94\n"
)
idx, coin = load_csv(tmp / "IDX.csv"), load_csv(tmp / "COIN.csv")
print("IDX dates come back sorted:", idx.dates[:3])
print("COIN gap mask:", coin.gaps.astype(int))

# %%
# The coin trades every day, the index only on weekdays. The intersection
# calendar keeps the weekdays; the coin's missing Wednesday is interpolated.
panel = align_and_interpolate([idx, coin], calendar="intersection")
for d, row in zip(panel.dates, panel.values):
    print(d, row)

# %%
# Log returns of the target, then five-day windows with next-day targets.
print("log returns:", log_returns(panel).round(4))
windows = make_windows(panel, ["COIN", "IDX"], window_len=3)
print("windows:", windows.inputs.shape, "targets:", windows.targets)
train, test = chrono_split(windows, 0.6)
print("train dates", train.sample_dates, "test dates", test.sample_dates)
