"""Two Lambda-type atoms in Lorentzian cavity reservoirs: dynamics and heralded entanglement."""
