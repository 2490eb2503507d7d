"""
Numerical tolerances and size caps

Every tolerance used by the library is defined here.
"""

# DensityMatrix invariants
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9

# Operators and channels
UNITARY_TOL = 1e-10
TP_TOL = 1e-10
PTM_MATCH_TOL = 1e-9
IMAG_TOL = 1e-12
TRACELESS_TOL = 1e-10

# Eigenvalues within this distance of [0, 1] are clipped before entropies/fidelities
EIG_CLIP_TOL = 1e-9

# Desk-scale caps
PTM_MAX_QUBITS = 8
STATE_MAX_QUBITS = 14
BASIS_MAX_QUBITS = 6

# Central finite-difference step (radians)
FD_STEP = 1e-4

# Significant digits for CSV output
CSV_PRECISION = 17
