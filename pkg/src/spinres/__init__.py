"""Long-range two-site quantum resources of the extended Ising / XXT chain.

Free-fermion correlators (``corr``), the two-site X state (``rdm``), resource
measures (``resources``), winding numbers and gap closings (``topology``),
decay-mode phase diagnosis (``classify``) and an exact-diagonalization
reference (``oracle``).
"""
from .errors import *  # noqa: F401,F403
from .model import *  # noqa: F401,F403
from .corr import *  # noqa: F401,F403
from .rdm import *  # noqa: F401,F403
from .resources import *  # noqa: F401,F403
from .topology import *  # noqa: F401,F403
from .classify import *  # noqa: F401,F403
from . import oracle  # noqa: F401

__version__ = "0.1.0"
