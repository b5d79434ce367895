"""
hidaquat: measure-valued quaternionic modular forms.

Exact arithmetic over Z/p^M for definite quaternion algebras: class sets of
Eichler orders, Brandt matrices with weight action, p-adic measures on the
primitive vectors of Z_p^2, ordinary projectors and the numerical
verification of the control theorem for ordinary families.
"""

__version__ = "0.1.0"

from .errors import ConfigError, NotDistinguishedError, PrecisionError, VerificationError
