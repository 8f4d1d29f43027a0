"""Desk-scale numerical simulator for superconducting circuit QED.

Subpackages by physics area:

* `cqed.linalg` - dense Hermitian eigensolver (cyclic Jacobi), tensor
  products, spectral time evolution, state vectors.
* `cqed.fock` - truncated oscillator: ladder/quadrature operators,
  coherent states, cavity mode ladders.
* `cqed.qubit` - Pauli algebra, Bloch sphere, rotations, Rabi/Ramsey.
* `cqed.junction` - semiclassical Josephson: washboard, inductances,
  SQUID, flux-qubit double well, two-island tunnelling ODEs.
* `cqed.chargebox` - Cooper-pair box / transmon spectra, gaps,
  charge dispersion, sudden and adiabatic gates.
* `cqed.jaynescummings` - resonant qubit-cavity exchange.
* `cqed.decoherence` - T1 decay, dephasing ensembles, T2 limits,
  Bell states and correlation tables.
* `cqed.cli` - the `cqed` command: deterministic CSV/JSON sweeps.

Units: hbar = 1 throughout (time is inverse energy); flux quantum = 1 in
the Josephson modules.
"""

__version__ = "0.1.0"
