"""Extrinsic quality measurement: logistic-regression micro-F1 under repeated stratified CV."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import EvaluationError
from .io import Labels
from .pipeline import mix64

DEFAULT_C = 1.0
MAX_ITER = 500
GRAD_TOL = 1e-5


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: np.ndarray  # fold id per document
    k: int
    seed: int


@dataclass(frozen=True)
class ClassifierModel:
    weights: np.ndarray  # (n_classes, dim)
    intercepts: np.ndarray  # (n_classes,)
    c: float


@dataclass(frozen=True)
class EvalResult:
    mean_f1: float
    std_f1: float
    per_fold: tuple[tuple[int, int, float], ...]  # (repeat, fold, score)


@dataclass(frozen=True)
class EvaluationRecord:
    dataset: str
    representation: str
    compressor: str
    mode: str
    step: int
    dim: int
    mean_f1: float
    std_f1: float
    epsilon_f1: float
    repeats: int
    extra: dict = field(default_factory=dict, compare=False)


def stratified_kfold(labels: Labels, k: int, seed: int) -> FoldAssignment:
    """Per-class shuffle then round-robin fold assignment; deterministic given seed."""
    if k < 2:
        raise EvaluationError(f"fold count must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    fold_of = np.full(len(labels), -1, dtype=np.int64)
    for cls in range(labels.n_classes):
        members = np.flatnonzero(labels.ids == cls)
        if len(members) < k:
            raise EvaluationError(
                f"class {labels.names[cls]!r} has {len(members)} members, fewer than {k} folds"
            )
        rng.shuffle(members)
        fold_of[members] = np.arange(len(members)) % k
    return FoldAssignment(fold_of=fold_of, k=k, seed=seed)


def logreg_loss_and_grad(theta: np.ndarray, x: np.ndarray, y: np.ndarray, n_classes: int, c: float):
    """Multinomial cross-entropy (summed) plus ||W||^2 / (2C); intercepts unpenalized."""
    n, dim = x.shape
    w = theta[: n_classes * dim].reshape(n_classes, dim)
    b = theta[n_classes * dim :]
    logits = x @ w.T + b
    logits -= logits.max(axis=1, keepdims=True)
    exp = np.exp(logits)
    denom = exp.sum(axis=1)
    loss = float(np.sum(np.log(denom) - logits[np.arange(n), y]) + np.sum(w * w) / (2.0 * c))
    probs = exp / denom[:, None]
    probs[np.arange(n), y] -= 1.0
    grad_w = probs.T @ x + w / c
    grad_b = probs.sum(axis=0)
    return loss, np.concatenate([grad_w.ravel(), grad_b])


def train_logreg(x: np.ndarray, labels: np.ndarray, c: float = DEFAULT_C) -> ClassifierModel:
    """L-BFGS fit to gradient tolerance 1e-5 or 500 iterations from a zero start."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    n_classes = int(y.max()) + 1
    if n_classes < 2:
        raise EvaluationError("need at least 2 classes to train a classifier")
    if not np.all(np.isfinite(x)):
        raise EvaluationError("non-finite feature values")
    theta0 = np.zeros(n_classes * x.shape[1] + n_classes)
    result = optimize.minimize(
        logreg_loss_and_grad,
        theta0,
        args=(x, y, n_classes, c),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": MAX_ITER, "gtol": GRAD_TOL, "ftol": 1e-16},
    )
    if not np.isfinite(result.fun):
        raise EvaluationError("logistic regression loss became non-finite")
    theta = result.x
    dim = x.shape[1]
    return ClassifierModel(
        weights=theta[: n_classes * dim].reshape(n_classes, dim),
        intercepts=theta[n_classes * dim :],
        c=c,
    )


def predict(model: ClassifierModel, x: np.ndarray) -> np.ndarray:
    """Argmax class scores; ties resolve to the lowest class id."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[1] != model.weights.shape[1]:
        raise EvaluationError(f"matrix has {x.shape[1]} columns but model expects {model.weights.shape[1]}")
    return np.argmax(x @ model.weights.T + model.intercepts, axis=1)


def micro_f1(pred: np.ndarray, truth: np.ndarray) -> float:
    """F1 from globally pooled true/false positives and false negatives."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise EvaluationError(f"length mismatch: {pred.shape} vs {truth.shape}")
    classes = np.union1d(pred, truth)
    tp = fp = fn = 0
    for cls in classes:
        tp += int(np.sum((pred == cls) & (truth == cls)))
        fp += int(np.sum((pred == cls) & (truth != cls)))
        fn += int(np.sum((pred != cls) & (truth == cls)))
    if tp == 0:
        return 0.0
    return 2.0 * tp / (2.0 * tp + fp + fn)


def epsilon_f1(f1_compressed: float, f1_initial: float) -> float:
    """Signed score difference; positive means compression helped."""
    return f1_compressed - f1_initial


def evaluate_matrices(
    matrices: list[np.ndarray],
    labels: Labels,
    k: int = 3,
    seed: int = 0,
    c: float = DEFAULT_C,
) -> EvalResult:
    """Score one matrix per repeat; repeat r uses folds seeded with mix64(seed, r).

    Fold assignments depend only on (labels, k, seed), never on the matrices,
    so a baseline and any compressed variant evaluated with the same seed share
    folds exactly.
    """
    repeats = len(matrices)
    scores = []
    for r, e in enumerate(matrices):
        e = np.asarray(e, dtype=np.float64)
        if e.shape[0] != len(labels):
            raise EvaluationError(f"repeat {r}: {e.shape[0]} rows but {len(labels)} labels")
        folds = stratified_kfold(labels, k, mix64(seed, r))
        for f in range(k):
            test = folds.fold_of == f
            model = train_logreg(e[~test], labels.ids[~test], c)
            scores.append((r, f, micro_f1(predict(model, e[test]), labels.ids[test])))
    values = np.array([s for _, _, s in scores])
    return EvalResult(
        mean_f1=float(values.mean()),
        std_f1=float(values.std()),
        per_fold=tuple(scores),
    )


def evaluate_representation(
    e: np.ndarray,
    labels: Labels,
    k: int = 3,
    repeats: int = 3,
    seed: int = 0,
    c: float = DEFAULT_C,
) -> EvalResult:
    """Repeated stratified k-fold evaluation of a single fixed matrix."""
    return evaluate_matrices([e] * repeats, labels, k, seed, c)
