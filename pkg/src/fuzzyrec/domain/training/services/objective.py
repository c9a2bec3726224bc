"""
Training objective: mean squared error plus normalized L1 on the fuzzy weights.

    L(W) = 1/N sum_i (y_hat_i - y_i)^2 + lambda / (k n) * sum_ij |W'_ij|
"""

from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from fuzzyrec.domain.exceptions.exception import EmptyInputError, ShapeMismatchError
from fuzzyrec.domain.network.models.rule_network import ForwardTrace, Gradient, RuleNetwork


def loss(
    predictions: Sequence[float],
    targets: Sequence[float],
    W_fuzzy: np.ndarray,
    lambda_: float,
) -> float:
    """
    Evaluate the objective.

    Since W' lies in (0, 1) the L1 term is lambda times the mean of W'.

    Raises:
        EmptyInputError: If there are no predictions
        ShapeMismatchError: If predictions and targets differ in length
    """
    y_hat = np.asarray(predictions, dtype=np.float64).ravel()
    y = np.asarray(targets, dtype=np.float64).ravel()
    if y_hat.size == 0:
        raise EmptyInputError("loss needs at least one prediction")
    if y_hat.shape != y.shape:
        raise ShapeMismatchError(f"{y_hat.size} predictions vs {y.size} targets")
    return float(np.mean((y_hat - y) ** 2) + regularization(W_fuzzy, lambda_))


def regularization(W_fuzzy: np.ndarray, lambda_: float) -> float:
    """lambda / (k n) * ||W'||_1."""
    W_fuzzy = np.asarray(W_fuzzy, dtype=np.float64)
    return float(lambda_ * np.abs(W_fuzzy).sum() / W_fuzzy.size)


def regularization_gradient(net: RuleNetwork, lambda_: float) -> Gradient:
    """d/dW of the L1 term: lambda / (k n) * W'(1 - W'), as W' > 0 everywhere."""
    W_fuzzy = net.fuzzify()
    return Gradient(lambda_ / W_fuzzy.size * W_fuzzy * (1.0 - W_fuzzy))


def loss_gradient(
    trace_batch: Union[ForwardTrace, Iterable[ForwardTrace]],
    targets: Sequence[float],
    net: RuleNetwork,
    lambda_: float,
) -> Gradient:
    """
    Gradient of the objective for traces covering all N samples.

    The squared-error term routes dL/dy = (2/N)(y_hat - y) into the network's
    backward pass; the regularizer gradient is added once. Per-trace
    gradients are summed in the order given.

    Args:
        trace_batch: One batched trace, or several traces in sample order
        targets: N targets matching the concatenated traces
        net: Network that produced the traces
        lambda_: Regularization strength

    Raises:
        EmptyInputError: If there are no samples
        ShapeMismatchError: If the targets do not line up with the traces
    """
    traces = [trace_batch] if isinstance(trace_batch, ForwardTrace) else list(trace_batch)
    y = np.asarray(targets, dtype=np.float64).ravel()
    if not traces or y.size == 0:
        raise EmptyInputError("loss_gradient needs a nonempty batch")
    sizes = [np.atleast_1d(trace.output).shape[0] for trace in traces]
    if sum(sizes) != y.size:
        raise ShapeMismatchError(f"{sum(sizes)} traced samples vs {y.size} targets")

    total = Gradient.zeros(net.k, net.n)
    offset = 0
    for trace, size in zip(traces, sizes):
        y_hat = np.atleast_1d(trace.output)
        upstream = 2.0 / y.size * (y_hat - y[offset : offset + size])
        total = total + net.backward(trace, upstream if trace.is_batch else float(upstream[0]))
        offset += size
    return total + regularization_gradient(net, lambda_)


def objective_and_gradient(
    net: RuleNetwork,
    atoms: np.ndarray,
    targets: np.ndarray,
    lambda_: float,
    chunk_size: Optional[int] = None,
) -> Tuple[float, Gradient]:
    """
    Objective value and gradient over a whole (N, n) matrix, chunk by chunk.

    Chunks are visited in sample order so the summation is reproducible.
    """
    n_samples = atoms.shape[0]
    if n_samples == 0:
        raise EmptyInputError("objective needs at least one sample")
    step = chunk_size or n_samples
    y = np.asarray(targets, dtype=np.float64)
    squared_error = 0.0
    total = Gradient.zeros(net.k, net.n)
    for start in range(0, n_samples, step):
        trace = net.forward_batch(np.asarray(atoms[start : start + step], dtype=np.float64))
        residual = trace.output - y[start : start + step]
        squared_error += float(np.dot(residual, residual))
        total = total + net.backward(trace, 2.0 / n_samples * residual)
    value = squared_error / n_samples + regularization(net.fuzzify(), lambda_)
    return value, total + regularization_gradient(net, lambda_)


def evaluate_objective(
    net: RuleNetwork,
    atoms: np.ndarray,
    targets: np.ndarray,
    lambda_: float,
    chunk_size: Optional[int] = None,
) -> float:
    """Objective value only (validation loss)."""
    predictions = net.predict_batch(atoms, chunk_size=chunk_size)
    return loss(predictions, targets, net.fuzzify(), lambda_)
