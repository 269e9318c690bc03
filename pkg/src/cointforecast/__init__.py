"""Factor screening, recurrent forecasting, and Buy-Sell-Hold backtesting for stock indices."""
__version__ = "0.1.0"
