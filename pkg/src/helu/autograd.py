"""Reverse-mode differentiation over a dynamically recorded tape.

The tape is append-only and topologically ordered by construction: a node's
inputs always have strictly smaller ids. ``backprop`` seeds d(loss)/d(loss)
= 1 and walks the tape in reverse id order, summing gradient contributions
into each input with a fixed traversal order, so two backprops over the
same tape are bitwise identical.

``apply_activation`` is the extension point for surrogate rules: the node
saves the pre-activation z at forward time and registers a backward closure
that need not be the analytic derivative of the forward map. A fresh tape
is built per forward pass (define-by-run); nets here are tiny, so nothing
is cached.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import activations, tensor
from .errors import ContractError, DataError, GraphError

# Maps the upstream gradient to one gradient (or None) per input.
BackwardRule = Callable[[np.ndarray], Sequence["np.ndarray | None"]]


@dataclass
class Node:
    id: int
    op: str
    inputs: tuple[int, ...]
    saved: tuple[np.ndarray, ...]
    backward_rule: BackwardRule | None
    value: np.ndarray


@dataclass
class Tape:
    nodes: list[Node] = field(default_factory=list)
    grads: dict[int, np.ndarray] = field(default_factory=dict)

    def leaf(self, value) -> int:
        """Put a value on the tape with no backward rule (input/parameter)."""
        return self.record("leaf", (), (), None, np.asarray(value, dtype=np.float64))

    def record(self, op, inputs, saved, backward_rule, value) -> int:
        for i in inputs:
            if not 0 <= i < len(self.nodes):
                raise GraphError(f"op {op!r} references dangling input id {i}")
        nid = len(self.nodes)
        self.nodes.append(
            Node(nid, op, tuple(inputs), tuple(saved), backward_rule, value)
        )
        return nid

    def value(self, nid: int) -> np.ndarray:
        return self.nodes[nid].value

    def backprop(self, loss_id: int) -> dict[int, np.ndarray]:
        """Accumulate d(loss)/d(node) for every node reachable from loss_id."""
        loss = self.nodes[loss_id]
        if loss.value.size != 1:
            raise ContractError(
                f"backprop needs a scalar-shaped loss, got shape {loss.value.shape}"
            )
        self.grads[loss_id] = np.ones_like(loss.value)
        for node in reversed(self.nodes[: loss_id + 1]):
            upstream = self.grads.get(node.id)
            if upstream is None or node.backward_rule is None:
                continue
            for input_id, g in zip(node.inputs, node.backward_rule(upstream)):
                if g is None:
                    continue
                if input_id in self.grads:
                    self.grads[input_id] = self.grads[input_id] + g
                else:
                    self.grads[input_id] = g
        return self.grads

    def zero_grads(self) -> None:
        self.grads.clear()


# ---------------------------------------------------------------------------
# Graph-building ops. Each records one node and returns its id.
# ---------------------------------------------------------------------------


def add(tape: Tape, a: int, b: int) -> int:
    va, vb = tape.value(a), tape.value(b)
    return tape.record("add", (a, b), (), lambda up: (up, up), va + vb)


def mul(tape: Tape, a: int, b: int) -> int:
    va, vb = tape.value(a), tape.value(b)
    return tape.record("mul", (a, b), (va, vb), lambda up: (up * vb, up * va), va * vb)


def square(tape: Tape, a: int) -> int:
    va = tape.value(a)
    return tape.record("square", (a,), (va,), lambda up: (2.0 * va * up,), va * va)


def reduce_sum(tape: Tape, a: int) -> int:
    va = tape.value(a)
    rule = lambda up: (np.broadcast_to(up, va.shape).copy(),)
    return tape.record("sum", (a,), (), rule, tensor.reduce_sum(va))


def reduce_mean(tape: Tape, a: int) -> int:
    va = tape.value(a)
    rule = lambda up: (np.broadcast_to(up / va.size, va.shape).copy(),)
    return tape.record("mean", (a,), (), rule, tensor.reduce_mean(va))


def matmul(tape: Tape, a: int, b: int) -> int:
    va, vb = tape.value(a), tape.value(b)

    def rule(up):
        return tensor.matmul(up, vb.T), tensor.matmul(va.T, up)

    return tape.record("matmul", (a, b), (va, vb), rule, tensor.matmul(va, vb))


def linear(tape: Tape, x: int, weight: int, bias: int) -> int:
    """x[b×in] @ weight[out×in]^T + bias[out]."""
    vx, vw, vb = tape.value(x), tape.value(weight), tape.value(bias)
    value = tensor.bias_add(tensor.matmul(vx, vw.T), vb)

    def rule(up):
        return (
            tensor.matmul(up, vw),
            tensor.matmul(up.T, vx),
            tensor.reduce_sum(up, axis=0),
        )

    return tape.record("linear", (x, weight, bias), (vx, vw), rule, value)


def apply_activation(tape: Tape, spec: activations.ActivationSpec, z: int) -> int:
    """Record an activation node, saving the pre-activation for backward.

    The registered backward rule is whatever the spec's backward map says,
    which for the hysteresis rectifier is *not* the derivative of the
    forward map.
    """
    vz = tape.value(z)
    rule = lambda up: (activations.backward(spec, vz, up),)
    return tape.record(f"act:{spec.label()}", (z,), (vz,), rule, activations.forward(spec, vz))


def softmax_cross_entropy(tape: Tape, logits: int, labels: np.ndarray) -> int:
    """Mean softmax cross-entropy, log-sum-exp stabilized (subtract row max)."""
    vl = tape.value(logits)
    labels = np.asarray(labels)
    b, k = vl.shape
    if labels.min() < 0 or labels.max() >= k:
        raise DataError(
            f"label out of class range [0, {k}): saw {int(labels.min())}..{int(labels.max())}"
        )
    shifted = vl - vl.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    probs = np.exp(log_probs)
    loss = np.asarray(-log_probs[np.arange(b), labels].sum() / b)

    def rule(up):
        grad = probs.copy()
        grad[np.arange(b), labels] -= 1.0
        return (grad * (up / b),)

    return tape.record("softmax_ce", (logits,), (probs,), rule, loss)
