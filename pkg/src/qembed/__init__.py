"""Quantum metric learning: trainable qubit embeddings plus the
measurement that is risk-optimal for the training metric.

Train with the Hilbert-Schmidt distance and classify by state overlap
(fidelity classifier), or train with the trace distance and classify
with the Helstrom measurement.  Everything runs on a dense statevector
simulator with optional shot noise.
"""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
