from ._core import Field, SolitonJetError, builtin_names, soliton_grid, verify_builtin, verify_json

__all__ = ["Field", "SolitonJetError", "builtin_names", "soliton_grid", "verify_builtin", "verify_json"]
