"""Fully-connected feedforward network trained with Adam.

Three hidden ReLU layers of 1,000 units by default, softmax output,
mini-batches of 200, learning rate 5e-4. The batch loss is the SUM of
per-example cross-entropies, so gradients are additive over rows (the
gradient check below relies on that). A plateau, defined as 10 epochs
whose validation accuracies vary by less than 1e-3, divides the learning
rate by 10; training stops at the third reduction or after 100 epochs.

Backpropagation is written out by hand and validated against central
finite differences by ``gradient_check``.
"""

from __future__ import annotations

import numpy as np

from .._rng import substream
from ..errors import ValidationError
from .base import ChoiceClassifier


def _forward(weights, biases, X):
    """Returns the per-layer activations; the last entry holds logits."""
    activations = [X]
    a = X
    for i, (W, b) in enumerate(zip(weights, biases)):
        z = a @ W + b
        a = z if i == len(weights) - 1 else np.maximum(z, 0.0)
        activations.append(a)
    return activations


def _softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def batch_loss(weights, biases, X, codes):
    """Summed softmax cross-entropy of one batch."""
    logits = _forward(weights, biases, X)[-1]
    z = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(z).sum(axis=1))
    return float(np.sum(log_norm - z[np.arange(X.shape[0]), codes]))


def batch_gradients(weights, biases, X, codes):
    """Analytic gradients of ``batch_loss`` for every weight and bias."""
    activations = _forward(weights, biases, X)
    proba = _softmax(activations[-1])
    delta = proba
    delta[np.arange(X.shape[0]), codes] -= 1.0
    grads_W = [None] * len(weights)
    grads_b = [None] * len(biases)
    for i in range(len(weights) - 1, -1, -1):
        grads_W[i] = activations[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ weights[i].T) * (activations[i] > 0.0)
    return grads_W, grads_b


class NeuralNetwork(ChoiceClassifier):
    def __init__(
        self,
        hidden_layers: tuple[int, ...] = (1000, 1000, 1000),
        learning_rate: float = 5e-4,
        batch_size: int = 200,
        max_epochs: int = 100,
        plateau_epochs: int = 10,
        plateau_threshold: float = 1e-3,
        lr_reduction_factor: float = 10.0,
        max_lr_reductions: int = 3,
        adam_beta1: float = 0.9,
        adam_beta2: float = 0.999,
        adam_eps: float = 1e-8,
        random_state: int = 0,
        classes=None,
    ):
        self.hidden_layers = hidden_layers
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.plateau_epochs = plateau_epochs
        self.plateau_threshold = plateau_threshold
        self.lr_reduction_factor = lr_reduction_factor
        self.max_lr_reductions = max_lr_reductions
        self.adam_beta1 = adam_beta1
        self.adam_beta2 = adam_beta2
        self.adam_eps = adam_eps
        self.random_state = random_state
        self.classes = classes

    def _init_params(self, d_in: int, n_classes: int):
        rng = substream(self.random_state, "nn_init")
        sizes = [d_in, *self.hidden_layers, n_classes]
        weights, biases = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return weights, biases

    def fit(self, X, y, validation=None):
        """Train with Adam; ``validation`` is a required (X, y) pair driving
        the plateau schedule."""
        if validation is None:
            raise ValidationError("neural network training requires a validation set")
        X, codes = self._encode_labels(X, y, self.classes)
        X_val, y_val = validation
        X_val = np.asarray(X_val, dtype=float)
        val_index = {c: i for i, c in enumerate(self.classes_)}
        try:
            val_codes = np.array([val_index[v] for v in np.asarray(y_val).tolist()], dtype=np.int64)
        except KeyError as exc:
            raise ValidationError(f"validation label {exc} outside the class vocabulary") from None

        n, d = X.shape
        n_classes = len(self.classes_)
        weights, biases = self._init_params(d, n_classes)
        m_W = [np.zeros_like(w) for w in weights]
        v_W = [np.zeros_like(w) for w in weights]
        m_b = [np.zeros_like(b) for b in biases]
        v_b = [np.zeros_like(b) for b in biases]
        beta1, beta2, eps = self.adam_beta1, self.adam_beta2, self.adam_eps

        lr = self.learning_rate
        reductions = 0
        t = 0
        log: list[dict] = []
        window: list[float] = []
        shuffle_rng = substream(self.random_state, "nn_shuffle")
        stop = False

        for epoch in range(self.max_epochs):
            order = shuffle_rng.permutation(n)
            epoch_loss = 0.0
            for start in range(0, n, self.batch_size):
                batch = order[start : start + self.batch_size]
                grads_W, grads_b = batch_gradients(weights, biases, X[batch], codes[batch])
                epoch_loss += batch_loss(weights, biases, X[batch], codes[batch])
                if not np.isfinite(epoch_loss):
                    raise ValidationError(
                        f"NaN loss at epoch {epoch}, lr {lr}; aborting (inputs finite? lr too high?)"
                    )
                t += 1
                correction = np.sqrt(1.0 - beta2**t) / (1.0 - beta1**t)
                for i in range(len(weights)):
                    m_W[i] = beta1 * m_W[i] + (1 - beta1) * grads_W[i]
                    v_W[i] = beta2 * v_W[i] + (1 - beta2) * grads_W[i] ** 2
                    weights[i] -= lr * correction * m_W[i] / (np.sqrt(v_W[i]) + eps)
                    m_b[i] = beta1 * m_b[i] + (1 - beta1) * grads_b[i]
                    v_b[i] = beta2 * v_b[i] + (1 - beta2) * grads_b[i] ** 2
                    biases[i] -= lr * correction * m_b[i] / (np.sqrt(v_b[i]) + eps)

            train_acc = self._accuracy(weights, biases, X, codes)
            val_acc = self._accuracy(weights, biases, X_val, val_codes)
            entry = {"epoch": epoch, "lr": lr, "loss": epoch_loss, "train_accuracy": train_acc, "validation_accuracy": val_acc}
            window.append(val_acc)
            if len(window) >= self.plateau_epochs:
                recent = window[-self.plateau_epochs :]
                if max(recent) - min(recent) < self.plateau_threshold:
                    reductions += 1
                    lr /= self.lr_reduction_factor
                    entry["lr_reduced_to"] = lr
                    window = []
                    if reductions >= self.max_lr_reductions:
                        stop = True
            log.append(entry)
            if stop:
                break

        self.weights_ = weights
        self.biases_ = biases
        self.training_log_ = log
        self.lr_events_ = [e["lr_reduced_to"] for e in log if "lr_reduced_to" in e]
        self.final_validation_accuracy_ = log[-1]["validation_accuracy"] if log else None
        self.n_epochs_ = len(log)
        return self

    def _accuracy(self, weights, biases, X, codes) -> float:
        if X.shape[0] == 0:
            return 0.0
        logits = _forward(weights, biases, X)[-1]
        return float((np.argmax(logits, axis=1) == codes).mean())

    def predict_proba(self, X) -> np.ndarray:
        X = self._check_predict_input(X)
        if X.shape[0] == 0:
            return np.zeros((0, len(self.classes_)))
        return _softmax(_forward(self.weights_, self.biases_, X)[-1])


def gradient_check(
    hidden_layers: tuple[int, ...],
    X: np.ndarray,
    labels,
    classes,
    seed: int = 0,
    step: float = 1e-5,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Meant for small networks (a couple of dozen units) and tiny batches;
    the sum-form batch loss makes the comparison exact up to float noise.
    """
    X = np.asarray(X, dtype=float)
    index = {c: i for i, c in enumerate(classes)}
    codes = np.array([index[v] for v in labels], dtype=np.int64)
    net = NeuralNetwork(hidden_layers=hidden_layers, random_state=seed, classes=classes)
    weights, biases = net._init_params(X.shape[1], len(classes))
    grads_W, grads_b = batch_gradients([w.copy() for w in weights], [b.copy() for b in biases], X, codes)

    worst = 0.0
    params = [(weights, grads_W), (biases, grads_b)]
    for tensors, grads in params:
        for tensor, grad in zip(tensors, grads):
            flat = tensor.ravel()
            grad_flat = grad.ravel()
            for j in range(flat.size):
                original = flat[j]
                flat[j] = original + step
                plus = batch_loss(weights, biases, X, codes)
                flat[j] = original - step
                minus = batch_loss(weights, biases, X, codes)
                flat[j] = original
                numeric = (plus - minus) / (2.0 * step)
                denom = max(1.0, abs(numeric), abs(grad_flat[j]))
                worst = max(worst, abs(numeric - grad_flat[j]) / denom)
    return worst
