"""L1-penalized multinomial logistic regression.

Minimizes the summed softmax cross-entropy plus ``penalty_strength`` times
the L1 norm of the non-intercept weights, by proximal gradient descent
(ISTA) with a backtracking line search on the smooth part. Convergence is
declared when the relative objective change drops below ``tol``; hitting
the iteration cap returns the best iterate with ``converged_ = False``.
"""

from __future__ import annotations

import numpy as np

from .base import ChoiceClassifier


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _soft_threshold(w: np.ndarray, amount: float) -> np.ndarray:
    return np.sign(w) * np.maximum(np.abs(w) - amount, 0.0)


class L1LogisticRegression(ChoiceClassifier):
    def __init__(
        self,
        penalty_strength: float = 1.0,
        tol: float = 1e-6,
        max_iter: int = 10_000,
        classes=None,
    ):
        self.penalty_strength = penalty_strength
        self.tol = tol
        self.max_iter = max_iter
        self.classes = classes

    def _objective(self, X, onehot, W, b) -> tuple[float, np.ndarray]:
        logits = X @ W + b
        z = logits - logits.max(axis=1, keepdims=True)
        log_norm = np.log(np.exp(z).sum(axis=1))
        ce = float(np.sum(log_norm - z[np.arange(X.shape[0]), onehot.argmax(axis=1)]))
        return ce, _softmax(logits)

    def fit(self, X, y):
        X, codes = self._encode_labels(X, y, self.classes)
        n, d = X.shape
        c = len(self.classes_)
        onehot = np.zeros((n, c))
        onehot[np.arange(n), codes] = 1.0

        W = np.zeros((d, c))
        b = np.zeros(c)
        alpha = self.penalty_strength
        step = 1.0 / max(1.0, float(np.linalg.norm(X, ord="fro") ** 2) / n)
        smooth, proba = self._objective(X, onehot, W, b)
        objective = smooth + alpha * float(np.abs(W).sum())
        history = [objective]
        best = (objective, W.copy(), b.copy())
        converged = False

        for _ in range(self.max_iter):
            residual = proba - onehot
            grad_W = X.T @ residual
            grad_b = residual.sum(axis=0)
            # Backtracking: shrink the step until the quadratic model upper-bounds
            # the smooth loss at the proximal point.
            while True:
                W_next = _soft_threshold(W - step * grad_W, step * alpha)
                b_next = b - step * grad_b
                smooth_next, proba_next = self._objective(X, onehot, W_next, b_next)
                dW = W_next - W
                db = b_next - b
                quad = (
                    smooth
                    + float((grad_W * dW).sum())
                    + float(grad_b @ db)
                    + (float((dW * dW).sum()) + float(db @ db)) / (2.0 * step)
                )
                if smooth_next <= quad + 1e-12 or step < 1e-16:
                    break
                step *= 0.5
            W, b, smooth, proba = W_next, b_next, smooth_next, proba_next
            objective_next = smooth + alpha * float(np.abs(W).sum())
            history.append(objective_next)
            if objective_next < best[0]:
                best = (objective_next, W.copy(), b.copy())
            if abs(objective - objective_next) <= self.tol * max(1.0, abs(objective)):
                converged = True
                objective = objective_next
                break
            objective = objective_next
            step *= 1.5  # try growing back; backtracking will shrink if needed

        self.coef_ = best[1]
        self.intercept_ = best[2]
        self.converged_ = converged
        self.n_iter_ = len(history) - 1
        self.objective_history_ = history
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = self._check_predict_input(X)
        if X.shape[0] == 0:
            return np.zeros((0, len(self.classes_)))
        return _softmax(X @ self.coef_ + self.intercept_)
