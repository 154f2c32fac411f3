"""Commentary training: per-category or multi-task with round-robin batches.

The engine arrives pre-trained and is fine-tuned by the generation loss
unless frozen; an optional weight adds the policy likelihood of the played
move as an auxiliary objective on commentary data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..engine import policy_nll
from ..nn import NumericsError, Optimizer, OptimizerConfig, mul, no_grad
from .bundle import MODE_MULT, MODE_SINGLE, ModelBundle
from .categories import CATEGORIES, CommentCategory, CommentarySample
from .contexts import cached_state_fn, plan_contexts, realize_context
from .model import generation_loss, teacher_forced_accuracy


@dataclass
class CommentaryTrainConfig:
    steps: int = 500
    batch_size: int = 8
    seed: int = 0
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    freeze_engine: bool = False
    engine_loss_weight: float = 0.0   # weight on the played-move policy term
    log_every: int = 50


@dataclass
class EpochLog:
    epoch: int
    train_loss: float
    val_loss: Optional[float]


@dataclass
class CategoryTrainLog:
    category: CommentCategory
    steps: int
    epochs: list[EpochLog] = field(default_factory=list)
    final_train_loss: float = 0.0
    best_val_loss: Optional[float] = None


@dataclass
class TrainReport:
    mode: str
    logs: list[CategoryTrainLog] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


class _SampleContexts:
    """Plans and (optionally frozen) engine states, cached per sample."""

    def __init__(self, bundle: ModelBundle, freeze_engine: bool):
        self.bundle = bundle
        self.freeze_engine = freeze_engine
        self._plans: dict[int, object] = {}
        self._state_caches: dict[int, dict] = {}

    def built(self, sample: CommentarySample):
        comp = self.bundle.category_components(sample.category)
        horizon = self.bundle.config.horizon
        key = id(sample)
        if self.freeze_engine:
            plan = self._plans.get(key)
            if plan is None:
                plan = plan_contexts(sample.category, sample.board, sample.move,
                                     comp.engine, horizon)
                self._plans[key] = plan
            cache = self._state_caches.setdefault(id(comp.engine), {})
            state_fn = cached_state_fn(comp.engine, cache)
        else:
            plan = plan_contexts(sample.category, sample.board, sample.move,
                                 comp.engine, horizon)
            state_fn = None
        return realize_context(plan, comp.engine, comp.move_encoder, comp.mce,
                               comp.model.w_diff, state_fn)


def _batch_loss(bundle: ModelBundle, samples: list[CommentarySample],
                contexts: _SampleContexts, engine_loss_weight: float):
    total = None
    for sample in samples:
        comp = bundle.category_components(sample.category)
        built = contexts.built(sample)
        loss, _ = generation_loss(sample, built, comp.model, comp.mce)
        if engine_loss_weight > 0.0:
            loss = loss + mul(policy_nll(comp.engine, sample.board, sample.move),
                              engine_loss_weight)
        total = loss if total is None else total + loss
    return mul(total, 1.0 / len(samples))


def evaluate_loss(bundle: ModelBundle, samples: list[CommentarySample],
                  contexts: Optional[_SampleContexts] = None) -> float:
    """Mean teacher-forced loss without touching gradients."""
    contexts = contexts or _SampleContexts(bundle, freeze_engine=True)
    total = 0.0
    with no_grad():
        for sample in samples:
            comp = bundle.category_components(sample.category)
            built = contexts.built(sample)
            loss, _ = generation_loss(sample, built, comp.model, comp.mce)
            total += float(loss.data)
    return total / max(len(samples), 1)


def token_accuracy(bundle: ModelBundle, samples: list[CommentarySample]) -> float:
    """Teacher-forced next-token accuracy over all steps of all samples."""
    contexts = _SampleContexts(bundle, freeze_engine=True)
    hits = steps = 0
    with no_grad():
        for sample in samples:
            comp = bundle.category_components(sample.category)
            built = contexts.built(sample)
            _, records = generation_loss(sample, built, comp.model, comp.mce)
            hits += sum(1 for r in records
                        if int(np.argmax(r.logits)) == r.target)
            steps += len(records)
    return hits / max(steps, 1)


def _trainable_params(bundle: ModelBundle, cats: list[CommentCategory],
                      freeze_engine: bool):
    seen: dict[int, object] = {}
    for cat in cats:
        comp = bundle.category_components(cat)
        params = comp.model.parameters() + comp.move_encoder.parameters() \
            + comp.mce.parameters()
        if not freeze_engine:
            params += comp.engine.parameters()
        for p in params:
            seen.setdefault(id(p), p)
    return list(seen.values())


def _train_loop(bundle: ModelBundle, cats: list[CommentCategory],
                train_by_cat: dict, val_by_cat: dict,
                config: CommentaryTrainConfig, log: list[CategoryTrainLog]):
    params = _trainable_params(bundle, cats, config.freeze_engine)
    opt = Optimizer(params, config.optimizer)
    contexts = _SampleContexts(bundle, config.freeze_engine)
    rng = np.random.default_rng(config.seed)
    cursors = {}
    orders = {}
    for cat in cats:
        orders[cat] = rng.permutation(len(train_by_cat[cat]))
        cursors[cat] = 0

    n_train = sum(len(train_by_cat[c]) for c in cats)
    epoch_steps = max(1, n_train // config.batch_size)
    cat_logs = {cat: CategoryTrainLog(cat, config.steps) for cat in cats}
    epoch_losses: list[float] = []
    best_val = None
    best_snapshot = None
    epoch = 0

    for step in range(config.steps):
        cat = cats[step % len(cats)]
        samples = train_by_cat[cat]
        batch = []
        for _ in range(min(config.batch_size, len(samples))):
            if cursors[cat] >= len(orders[cat]):
                orders[cat] = rng.permutation(len(samples))
                cursors[cat] = 0
            batch.append(samples[orders[cat][cursors[cat]]])
            cursors[cat] += 1
        loss = _batch_loss(bundle, batch, contexts, config.engine_loss_weight)
        value = float(loss.data)
        if not np.isfinite(value):
            raise NumericsError(f"non-finite commentary loss at step {step}")
        loss.backward()
        opt.step()
        epoch_losses.append(value)
        for cl in cat_logs.values():
            cl.final_train_loss = value

        end_of_epoch = (step + 1) % epoch_steps == 0 or step + 1 == config.steps
        if end_of_epoch:
            epoch += 1
            val_samples = [s for c in cats for s in val_by_cat.get(c, [])]
            val_loss = evaluate_loss(bundle, val_samples) if val_samples else None
            for cl in cat_logs.values():
                cl.epochs.append(EpochLog(epoch, float(np.mean(epoch_losses)),
                                          val_loss))
            epoch_losses = []
            if val_loss is not None and (best_val is None or val_loss < best_val):
                best_val = val_loss
                best_snapshot = {p.name: p.data.copy() for p in params}

    if best_snapshot is not None:
        for p in params:
            p.data[...] = best_snapshot[p.name]
    for cat in cats:
        cat_logs[cat].best_val_loss = best_val
        log.append(cat_logs[cat])


def train_commentary(train_by_cat: dict[CommentCategory, list[CommentarySample]],
                     bundle: ModelBundle, config: CommentaryTrainConfig,
                     val_by_cat: Optional[dict] = None) -> TrainReport:
    """Train the bundle on per-category sample lists.

    Per-category bundles train each category independently; multi-task
    bundles train one shared parameter set with batches drawn round-robin
    across categories. Categories with no data are skipped with a warning.
    """
    val_by_cat = val_by_cat or {}
    report = TrainReport(mode=bundle.mode)
    cats = [c for c in bundle.categories if train_by_cat.get(c)]
    for cat in bundle.categories:
        if cat not in cats:
            report.warnings.append(f"category {cat.value}: no training data, skipped")
    if not cats:
        return report
    if bundle.mode == MODE_MULT:
        _train_loop(bundle, cats, train_by_cat, val_by_cat, config, report.logs)
    else:
        for cat in cats:
            _train_loop(bundle, [cat], train_by_cat, val_by_cat, config,
                        report.logs)
    return report
