"""
Rule network domain model - k parallel fuzzy rules over n atoms.

Each rule i weights the atoms with W'_i = sigmoid(W_i), combines them with
a'_ij = OR(a_j, 1 - W'_ij), conjoins them into r_i = AND(a'_i), and the
prediction is y = OR(r). Gradients are derived by hand (reverse mode)
through that chain.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from fuzzyrec.domain.exceptions.exception import ShapeMismatchError, ValidationException
from fuzzyrec.domain.fuzzy.operators import (
    as_unit_array,
    fand_reduce,
    for_reduce,
    leave_one_out_products,
    weighted_atoms,
)


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Logistic function, evaluated without overflow for large |x|."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    exp_x = np.exp(x[~positive])
    out[~positive] = exp_x / (1.0 + exp_x)
    return out


@dataclass(frozen=True)
class ForwardTrace:
    """
    Intermediate values of one forward pass.

    For a single atom vector the arrays are atoms (n,), weighted (k, n),
    rules (k,) and output a float; a batch adds a leading sample axis.

    Attributes:
        atoms: Input atom values (copy)
        weighted: Weighted atoms a'_ij
        rules: Rule activations r_i
        output: Prediction y
    """

    atoms: np.ndarray
    weighted: np.ndarray
    rules: np.ndarray
    output: Union[float, np.ndarray]

    @property
    def is_batch(self) -> bool:
        return self.atoms.ndim == 2


@dataclass
class Gradient:
    """Gradient of a scalar loss with respect to the raw weights W."""

    dW: np.ndarray

    def __post_init__(self):
        self.dW = np.asarray(self.dW, dtype=np.float64)
        if self.dW.ndim != 2:
            raise ShapeMismatchError(f"gradient must be a k x n matrix, got {self.dW.shape}")

    def __add__(self, other: "Gradient") -> "Gradient":
        if other.dW.shape != self.dW.shape:
            raise ShapeMismatchError(f"gradient shapes differ: {self.dW.shape} vs {other.dW.shape}")
        return Gradient(self.dW + other.dW)

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.dW).all())

    @classmethod
    def zeros(cls, k: int, n: int) -> "Gradient":
        return cls(np.zeros((k, n), dtype=np.float64))


class RuleNetwork:
    """
    The entire learnable state: a real k x n weight matrix W.

    Dimensions are fixed at construction. The weights may be replaced as a
    whole (optimizer step) but never reshaped.
    """

    def __init__(self, weights: np.ndarray):
        """
        Initialize from a raw weight matrix.

        Args:
            weights: Real-valued k x n matrix W

        Raises:
            ShapeMismatchError: If weights is not a nonempty matrix
            ValidationException: If weights contain NaN or Inf
        """
        W = np.array(weights, dtype=np.float64, copy=True)
        if W.ndim != 2 or W.shape[0] < 1 or W.shape[1] < 1:
            raise ShapeMismatchError(f"weights must be a nonempty k x n matrix, got {W.shape}")
        self._k, self._n = W.shape
        self._weights = W
        self._check_finite(W)

    @classmethod
    def initialize(cls, k: int, n: int, seed: int, init_scale: float = 0.5) -> "RuleNetwork":
        """
        Create a network with W drawn i.i.d. uniform in [-init_scale, init_scale].

        With the default scale the fuzzy weights start near 0.5, where the
        sigmoid is steepest.

        Args:
            k: Number of rules (>= 1)
            n: Number of atoms (>= 1)
            seed: Seed of the deterministic generator
            init_scale: Half-width of the uniform range
        """
        if k < 1 or n < 1:
            raise ValidationException(f"k and n must be positive, got k={k}, n={n}")
        rng = np.random.default_rng(seed)
        return cls(rng.uniform(-init_scale, init_scale, size=(k, n)))

    @property
    def k(self) -> int:
        return self._k

    @property
    def n(self) -> int:
        return self._n

    @property
    def weights(self) -> np.ndarray:
        """Read-only view of W."""
        view = self._weights.view()
        view.setflags(write=False)
        return view

    def set_weights(self, weights: np.ndarray) -> None:
        """Replace W (single writer only)."""
        W = np.array(weights, dtype=np.float64, copy=True)
        if W.shape != (self._k, self._n):
            raise ShapeMismatchError(f"expected weights {(self._k, self._n)}, got {W.shape}")
        self._check_finite(W)
        self._weights = W

    def copy(self) -> "RuleNetwork":
        return RuleNetwork(self._weights)

    def fuzzify(self) -> np.ndarray:
        """Fuzzy weights W' = sigmoid(W), each in (0, 1)."""
        return sigmoid(self._weights)

    def forward(self, atoms: np.ndarray) -> ForwardTrace:
        """
        Forward pass for one atom vector of length n.

        Raises:
            ShapeMismatchError: If the vector length differs from n
        """
        vector = as_unit_array(atoms, "atoms")
        if vector.ndim != 1:
            raise ShapeMismatchError(f"expected an atom vector, got shape {vector.shape}")
        batch = self.forward_batch(vector[None, :])
        return ForwardTrace(
            atoms=batch.atoms[0],
            weighted=batch.weighted[0],
            rules=batch.rules[0],
            output=float(batch.output[0]),
        )

    def forward_batch(self, atoms: np.ndarray) -> ForwardTrace:
        """Forward pass for an (N, n) atom matrix."""
        matrix = np.array(as_unit_array(atoms, "atoms"), dtype=np.float64, copy=True)
        if matrix.ndim != 2 or matrix.shape[1] != self._n:
            raise ShapeMismatchError(f"expected atoms of shape (N, {self._n}), got {matrix.shape}")
        weighted = weighted_atoms(matrix[:, None, :], self.fuzzify()[None, :, :])
        rules = fand_reduce(weighted, axis=-1)
        output = for_reduce(rules, axis=-1)
        return ForwardTrace(
            atoms=matrix,
            weighted=np.asarray(weighted),
            rules=np.asarray(rules),
            output=np.asarray(output),
        )

    def backward(self, trace: ForwardTrace, dL_dy: Union[float, np.ndarray]) -> Gradient:
        """
        Reverse-mode gradient of the loss with respect to W.

        dW_ij = sum over samples of
            dL/dy * prod_{m != i}(1 - r_m) * prod_{m != j} a'_im * -(1 - a_j) * W'_ij (1 - W'_ij)

        Args:
            trace: Trace returned by forward / forward_batch on this network
            dL_dy: Upstream derivative, a scalar or one value per sample

        Returns:
            Gradient summed over the samples of the trace
        """
        atoms, weighted, rules = trace.atoms, trace.weighted, trace.rules
        if not trace.is_batch:
            atoms, weighted, rules = atoms[None, :], weighted[None, :, :], rules[None, :]
        n_samples = atoms.shape[0]
        if weighted.shape != (n_samples, self._k, self._n):
            raise ShapeMismatchError(
                f"trace shape {weighted.shape[1:]} does not match network {(self._k, self._n)}"
            )
        upstream = np.broadcast_to(np.asarray(dL_dy, dtype=np.float64), (n_samples,))

        dy_dr = leave_one_out_products(1.0 - rules, axis=-1)
        dr_da = leave_one_out_products(weighted, axis=-1)
        coef = upstream[:, None] * dy_dr
        dW_fuzzy = -np.einsum("sk,skj,sj->kj", coef, dr_da, 1.0 - atoms)

        W_fuzzy = self.fuzzify()
        return Gradient(dW_fuzzy * W_fuzzy * (1.0 - W_fuzzy))

    def predict(self, atoms: np.ndarray) -> float:
        """Prediction y for one atom vector."""
        return float(self.forward(atoms).output)

    def predict_batch(self, atoms: np.ndarray, chunk_size: Optional[int] = None) -> np.ndarray:
        """Predictions for an (N, n) atom matrix, evaluated chunk by chunk."""
        matrix = np.asarray(atoms)
        if matrix.ndim != 2:
            raise ShapeMismatchError(f"expected an (N, n) matrix, got shape {matrix.shape}")
        step = chunk_size or max(matrix.shape[0], 1)
        outputs = [
            self.forward_batch(matrix[start : start + step].astype(np.float64)).output
            for start in range(0, matrix.shape[0], step)
        ]
        return np.concatenate(outputs) if outputs else np.zeros(0, dtype=np.float64)

    @staticmethod
    def _check_finite(W: np.ndarray) -> None:
        if not np.isfinite(W).all():
            raise ValidationException("rule network weights must be finite")

    def __repr__(self) -> str:
        return f"RuleNetwork(k={self._k}, n={self._n})"
