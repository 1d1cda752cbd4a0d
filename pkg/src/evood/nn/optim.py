"""Adam optimizer with bias-corrected moment estimates."""

import numpy as np

from .params import ModelParams


class Adam:
    def __init__(self, params: ModelParams, lr: float, betas=(0.9, 0.999), eps: float = 1e-8):
        if lr <= 0:
            raise ValueError("lr must be positive")
        self.params = params
        self.lr = float(lr)
        self.beta1, self.beta2 = float(betas[0]), float(betas[1])
        self.eps = float(eps)
        self.t = 0
        self._m = {n: np.zeros_like(t.data) for n, t in params.items()}
        self._v = {n: np.zeros_like(t.data) for n, t in params.items()}

    def zero_grad(self):
        self.params.zero_grad()

    def step(self):
        """One update using the gradients currently stored on the params.
        Parameters with no gradient are treated as having zero gradient."""
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1**self.t
        c2 = 1.0 - b2**self.t
        for name, p in self.params.items():
            g = p.grad if p.grad is not None else 0.0
            m = self._m[name]
            v = self._v[name]
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * np.square(g)
            p.data -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
