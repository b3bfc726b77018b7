"""SME financial prediction: invoice delay classification and decomposed
cash-flow forecasting."""

__version__ = "0.1.0"
