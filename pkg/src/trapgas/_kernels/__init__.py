"""Backend selection for the thermodynamic kernels.

The compiled Cython module is preferred when present; setting the
environment variable ``TRAPGAS_PURE_PYTHON=1`` (or a failed extension
build) falls back to the pure-numpy implementation.  Both backends expose
the identical function set; ``BACKEND`` names the active one.
"""

import os

if os.environ.get("TRAPGAS_PURE_PYTHON", "").strip() not in ("", "0"):
    from . import _purepy as _impl
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _purepy as _impl

BACKEND = _impl.BACKEND

count_bose = _impl.count_bose
count_fermi = _impl.count_fermi
energy_bose = _impl.energy_bose
energy_fermi = _impl.energy_fermi
occ_bose = _impl.occ_bose
occ_fermi = _impl.occ_fermi
entropy_bose = _impl.entropy_bose
entropy_fermi = _impl.entropy_fermi
log_xi_bose = _impl.log_xi_bose
log_xi_fermi = _impl.log_xi_fermi
bcs_occ = _impl.bcs_occ
bcs_count = _impl.bcs_count
bcs_energy = _impl.bcs_energy
bcs_gap_sum = _impl.bcs_gap_sum
bcs_entropy = _impl.bcs_entropy

__all__ = [
    "BACKEND",
    "count_bose", "count_fermi", "energy_bose", "energy_fermi",
    "occ_bose", "occ_fermi", "entropy_bose", "entropy_fermi",
    "log_xi_bose", "log_xi_fermi",
    "bcs_occ", "bcs_count", "bcs_energy", "bcs_gap_sum", "bcs_entropy",
]
