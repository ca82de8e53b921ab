"""Isotropy of diagonal forms of higher degree over finite fields,
complete discretely valued towers and the patching fields of P^1 over Z_p."""

__version__ = "0.1.0"
