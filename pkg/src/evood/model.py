"""Evidential classifier head, training objectives, and the softmax baseline.

The network factors as f = head(embed(x)):

  embed: raw input -> continuous embedding.  For "mlp2d" this is a linear
      projection of the feature vector; for "gru" a token-embedding lookup
      producing an (m, T, d_e) tensor plus a padding mask.
  head: embedding -> K pre-activation outputs.  tanh MLP for "mlp2d";
      stacked GRU layers + masked mean pooling + affine for "gru".

Used evidentially ("enn"), per-class evidence is activation(head output)
and the Dirichlet concentration is alpha = evidence + 1.  Used as the
softmax baseline ("msp"), the same head output serves as logits for
cross-entropy training and max-softmax scoring.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import sl
from .errors import DomainError, ShapeError
from .nn import (
    Adam,
    ArchSpec,
    ModelParams,
    Tensor,
    affine,
    constant,
    embedding,
    gru_cell,
    init_params,
    relu,
    select_step,
    softplus,
    tanh,
    validate_params,
)

PAD_ID = 0


def pad_batch(token_seqs) -> tuple[np.ndarray, np.ndarray]:
    """Right-pad variable-length id sequences; mask marks real positions.
    An empty sequence becomes a single PAD position (kept masked out)."""
    max_len = max((len(s) for s in token_seqs), default=1)
    max_len = max(max_len, 1)
    m = len(token_seqs)
    ids = np.full((m, max_len), PAD_ID, dtype=np.int64)
    mask = np.zeros((m, max_len), dtype=np.float64)
    for i, seq in enumerate(token_seqs):
        ids[i, : len(seq)] = seq
        mask[i, : len(seq)] = 1.0
    return ids, mask


def one_hot(labels, num_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise DomainError(f"labels must lie in [0, {num_classes})")
    out = np.zeros((labels.shape[0], num_classes))
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


class Classifier:
    """Network parameters plus the forward composition for one ArchSpec."""

    def __init__(self, arch: ArchSpec, params: ModelParams | None = None, seed: int = 0):
        self.arch = arch
        if params is None:
            params = init_params(arch, seed)
        else:
            validate_params(arch, params)
        self.params = params

    # -- forward stages -------------------------------------------------

    def embed(self, inputs):
        """Map a batch of raw inputs to (embedding Tensor, mask or None)."""
        if self.arch.kind == "mlp2d":
            x = np.asarray(inputs, dtype=np.float64)
            if x.ndim != 2 or x.shape[1] != self.arch.input_dim:
                raise ShapeError(
                    f"mlp2d input must be (m, {self.arch.input_dim}), got {x.shape}"
                )
            return affine(constant(x), self.params["embed.w"], self.params["embed.b"], name="embed"), None
        ids, mask = pad_batch(inputs)
        return embedding(self.params["embed.table"], ids), mask

    def head(self, emb: Tensor, mask=None) -> Tensor:
        """Map embeddings to K pre-activation outputs."""
        if self.arch.kind == "mlp2d":
            h = emb
            for i in range(self.arch.num_layers):
                h = tanh(affine(h, self.params[f"hidden{i}.w"], self.params[f"hidden{i}.b"], name=f"hidden{i}"))
            return affine(h, self.params["out.w"], self.params["out.b"], name="out")
        if mask is None:
            raise ShapeError("gru head needs the padding mask from embed()")
        m, seq_len = mask.shape
        steps = [select_step(emb, t) for t in range(seq_len)]
        for layer in range(self.arch.num_layers):
            h = constant(np.zeros((m, self.arch.hidden_dim)))
            out_steps = []
            w = self.params
            for t, x_t in enumerate(steps):
                h = gru_cell(
                    x_t, h, mask[:, t],
                    w[f"gru{layer}.wz"], w[f"gru{layer}.uz"], w[f"gru{layer}.bz"],
                    w[f"gru{layer}.wr"], w[f"gru{layer}.ur"], w[f"gru{layer}.br"],
                    w[f"gru{layer}.wh"], w[f"gru{layer}.uh"], w[f"gru{layer}.bh"],
                )
                out_steps.append(h)
            steps = out_steps
        lengths = np.maximum(mask.sum(axis=1, keepdims=True), 1.0)
        pooled = None
        for t, h_t in enumerate(steps):
            term = h_t * constant(mask[:, t : t + 1])
            pooled = term if pooled is None else pooled + term
        pooled = pooled * constant(1.0 / lengths)
        return affine(pooled, self.params["out.w"], self.params["out.b"], name="out")

    def logits(self, inputs) -> Tensor:
        emb, mask = self.embed(inputs)
        return self.head(emb, mask)

    def alpha_from_logits(self, logits: Tensor) -> Tensor:
        act = softplus if self.arch.activation == "softplus" else relu
        return act(logits) + 1.0

    def alpha(self, inputs) -> Tensor:
        return self.alpha_from_logits(self.logits(inputs))


# -- evidential loss ------------------------------------------------------


def enn_loss(d: sl.DirichletParams, y) -> float:
    """Expected sum-of-squares loss under the predicted Dirichlet.

    sum_j (y_j^2 - 2 y_j E[p_j] + E[p_j^2]) with E[p_j] = alpha_j / S and
    E[p_j^2] = alpha_j (alpha_j + 1) / (S (S + 1)).
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape != d.alpha.shape or not np.all((y == 0.0) | (y == 1.0)) or y.sum() != 1.0:
        raise DomainError(f"y must be a one-hot vector matching alpha, got {y}")
    s = d.strength
    ep = d.alpha / s
    ep2 = d.alpha * (d.alpha + 1.0) / (s * (s + 1.0))
    return float(np.sum(y * y - 2.0 * y * ep + ep2))


def enn_loss_tensor(alpha: Tensor, y_onehot: np.ndarray) -> Tensor:
    """Per-example evidential loss, differentiable w.r.t. alpha. Shape (m,)."""
    y = constant(y_onehot)
    s = alpha.sum(axis=1, keepdims=True)
    ep = alpha / s
    ep2 = alpha * (alpha + 1.0) / (s * (s + 1.0))
    return (y * y - 2.0 * y * ep + ep2).sum(axis=1)


def vacuity_tensor(alpha: Tensor) -> Tensor:
    """Per-example vacuity W/S (W = K), differentiable w.r.t. alpha."""
    k = alpha.shape[1]
    return float(k) / alpha.sum(axis=1)


def total_objective(clf: Classifier, id_inputs, id_labels, oe_inputs=None,
                    ad_embeddings=None, ad_mask=None,
                    beta_in: float = 0.0, beta_oe: float = 0.0, beta_ad: float = 0.0):
    """Mixture objective: mean classification loss over ID examples,
    + beta_in * mean vacuity(ID)  (keep ID confidence honest but low-vacuity)
    - beta_oe * mean vacuity(OE)  (push vacuity up on auxiliary outliers)
    - beta_ad * mean vacuity(AD)  (push vacuity up on off-manifold points).

    The AD batch enters as fixed embedding-space points and contributes
    only through the vacuity term.  Returns (loss Tensor, parts dict).
    """
    for name, b in (("beta_in", beta_in), ("beta_oe", beta_oe), ("beta_ad", beta_ad)):
        if b < 0:
            raise DomainError(f"{name} must be nonnegative, got {b}")
    if len(id_inputs) == 0:
        raise DomainError("ID batch must be nonempty")
    if beta_oe > 0 and (oe_inputs is None or len(oe_inputs) == 0):
        raise DomainError("beta_oe > 0 requires a nonempty OE batch")
    if beta_ad > 0 and (ad_embeddings is None or len(ad_embeddings) == 0):
        raise DomainError("beta_ad > 0 requires a nonempty off-manifold batch")

    y = one_hot(id_labels, clf.arch.num_classes)
    alpha_id = clf.alpha(id_inputs)
    cls_loss = enn_loss_tensor(alpha_id, y).mean()
    parts = {"id_loss": cls_loss.item()}
    loss = cls_loss
    if beta_in > 0:
        vac_id = vacuity_tensor(alpha_id).mean()
        parts["id_vacuity"] = vac_id.item()
        loss = loss + beta_in * vac_id
    if beta_oe > 0:
        vac_oe = vacuity_tensor(clf.alpha(oe_inputs)).mean()
        parts["oe_vacuity"] = vac_oe.item()
        loss = loss - beta_oe * vac_oe
    if beta_ad > 0:
        emb = constant(np.asarray(ad_embeddings, dtype=np.float64))
        vac_ad = vacuity_tensor(clf.alpha_from_logits(clf.head(emb, ad_mask))).mean()
        parts["ad_vacuity"] = vac_ad.item()
        loss = loss - beta_ad * vac_ad
    return loss, parts


# -- softmax baseline ------------------------------------------------------


def softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def msp_scores(clf: Classifier, inputs) -> np.ndarray:
    """Negative max-softmax score per example; higher means more OOD."""
    probs = softmax(clf.logits(inputs).data)
    return -probs.max(axis=1)


def msp_score(clf: Classifier, single_input) -> float:
    return float(msp_scores(clf, [single_input])[0])


# -- uncertainty reports ----------------------------------------------------

REPORT_FIELDS = ("predicted_class", "expected_probs", "vacuity", "dissonance",
                 "dissonance_sqrt", "entropy", "alpha")


@dataclass(frozen=True)
class UncertaintyReport:
    """Per-example prediction with decomposed uncertainty.

    `entropy` is the Shannon entropy of the expected class probabilities
    normalized by ln K; `dissonance` is the raw value in [0, 1), with the
    square root also exposed for reporting.
    """

    predicted_class: int
    expected_probs: np.ndarray
    vacuity: float
    dissonance: float
    entropy: float
    alpha: np.ndarray

    @property
    def dissonance_sqrt(self) -> float:
        return float(np.sqrt(self.dissonance))

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "predicted_class": self.predicted_class,
                "expected_probs": [float(v) for v in self.expected_probs],
                "vacuity": self.vacuity,
                "dissonance": self.dissonance,
                "dissonance_sqrt": self.dissonance_sqrt,
                "entropy": self.entropy,
                "alpha": [float(v) for v in self.alpha],
            },
            sort_keys=True,
        )


def report_from_alpha(alpha_vec) -> UncertaintyReport:
    d = sl.DirichletParams(np.asarray(alpha_vec, dtype=np.float64))
    probs = sl.expected_probability(d)
    return UncertaintyReport(
        predicted_class=int(np.argmax(probs)),
        expected_probs=probs,
        vacuity=sl.vacuity(d),
        dissonance=sl.dissonance(d),
        entropy=sl.shannon_entropy(probs, normalized=True),
        alpha=d.alpha,
    )


def predict_evidence(clf: Classifier, single_input) -> sl.DirichletParams:
    return sl.DirichletParams(clf.alpha([single_input]).data[0])


def predict_report(clf: Classifier, single_input) -> UncertaintyReport:
    return report_from_alpha(clf.alpha([single_input]).data[0])


def predict_reports(clf: Classifier, inputs, batch_size: int = 512) -> list[UncertaintyReport]:
    reports = []
    for start in range(0, len(inputs), batch_size):
        batch = inputs[start : start + batch_size]
        alpha = clf.alpha(batch).data
        reports.extend(report_from_alpha(a) for a in alpha)
    return reports


def write_reports_jsonl(path, reports) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in reports:
            fh.write(r.to_json_line() + "\n")
