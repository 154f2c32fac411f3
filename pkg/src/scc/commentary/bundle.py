"""Bundles: engine + encoders + per-category decoders, saved as a directory.

In multi-task mode the engine, move encoder, multi-choices encoder and value
mapping matrix are a single shared parameter set stored once; per-category
training keeps a full private copy of everything per category.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..data.vocab import Vocabulary
from ..encoders import MoveEncoder, MultiChoiceEncoder
from ..engine import EngineConfig, EngineNet
from ..nn import (Checkpoint, Parameter, load_checkpoint, restore_parameters,
                  save_checkpoint)
from .categories import CATEGORIES, CommentCategory
from .model import CategoryModel

BUNDLE_FORMAT_VERSION = 1

MODE_SINGLE = "single"
MODE_MULT = "mult"


@dataclass
class CommentaryConfig:
    d: int = 128                 # context row width
    decoder_hidden: int = 256
    embed_dim: int = 128         # word embedding
    move_embed_dim: int = 64     # move feature token embedding
    horizon: int = 4
    engine: EngineConfig = field(default_factory=EngineConfig)

    def __post_init__(self):
        if not 1 <= self.horizon <= 16:
            raise ValueError("horizon must be in 1..16")

    def to_dict(self) -> dict:
        return {"d": self.d, "decoder_hidden": self.decoder_hidden,
                "embed_dim": self.embed_dim,
                "move_embed_dim": self.move_embed_dim,
                "horizon": self.horizon, "engine": self.engine.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "CommentaryConfig":
        return cls(d=int(d["d"]), decoder_hidden=int(d["decoder_hidden"]),
                   embed_dim=int(d["embed_dim"]),
                   move_embed_dim=int(d["move_embed_dim"]),
                   horizon=int(d["horizon"]),
                   engine=EngineConfig.from_dict(d["engine"]))


@dataclass
class CategoryComponents:
    engine: EngineNet
    move_encoder: MoveEncoder
    mce: MultiChoiceEncoder
    model: CategoryModel

    def shared_parameters(self) -> list[Parameter]:
        return (self.engine.parameters() + self.move_encoder.parameters()
                + self.mce.parameters())

    def parameters(self) -> list[Parameter]:
        return self.shared_parameters() + self.model.parameters()


class ModelBundle:
    def __init__(self, mode: str, config: CommentaryConfig, vocab: Vocabulary,
                 components: dict[CommentCategory, CategoryComponents]):
        if mode not in (MODE_SINGLE, MODE_MULT):
            raise ValueError(f"unknown bundle mode {mode!r}")
        if mode == MODE_MULT:
            engines = {id(c.engine) for c in components.values()}
            if len(engines) != 1:
                raise ValueError("mult bundle must share one engine")
        self.mode = mode
        self.config = config
        self.vocab = vocab
        self.components = components

    @property
    def categories(self) -> list[CommentCategory]:
        return [c for c in CATEGORIES if c in self.components]

    @classmethod
    def create(cls, mode: str, vocab: Vocabulary,
               config: Optional[CommentaryConfig] = None,
               categories: Optional[list[CommentCategory]] = None,
               engine_checkpoint: Optional[Checkpoint] = None,
               seed: int = 0) -> "ModelBundle":
        """Fresh bundle; engine weights start from a pre-trained checkpoint."""
        config = config or CommentaryConfig()
        categories = categories or list(CATEGORIES)
        components: dict[CommentCategory, CategoryComponents] = {}

        def make_shared(seed_offset: int):
            engine = EngineNet(config.engine, seed=seed + seed_offset)
            if engine_checkpoint is not None:
                restore_parameters(engine_checkpoint, engine.parameters())
            move_encoder = MoveEncoder(config.move_embed_dim, config.d,
                                       seed=seed + seed_offset + 1)
            mce = MultiChoiceEncoder(config.d, seed=seed + seed_offset + 2)
            return engine, move_encoder, mce

        if mode == MODE_MULT:
            engine, move_encoder, mce = make_shared(0)
        for i, cat in enumerate(categories):
            if mode == MODE_SINGLE:
                engine, move_encoder, mce = make_shared(100 * (i + 1))
            model = CategoryModel(cat, len(vocab), config.d,
                                  config.decoder_hidden, config.embed_dim,
                                  seed=seed + 10 + i)
            components[cat] = CategoryComponents(engine, move_encoder, mce, model)
        return cls(mode, config, vocab, components)

    def category_components(self, category: CommentCategory) -> CategoryComponents:
        if category not in self.components:
            raise KeyError(f"bundle has no model for category {category.value!r}")
        return self.components[category]

    def all_parameters(self) -> list[Parameter]:
        seen: dict[int, Parameter] = {}
        for comp in self.components.values():
            for p in comp.parameters():
                seen.setdefault(id(p), p)
        return list(seen.values())

    # -- persistence ----------------------------------------------------------

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        self.vocab.save(directory / "vocab.txt")
        files: dict[str, str] = {"vocab": "vocab.txt"}
        if self.mode == MODE_MULT:
            any_comp = next(iter(self.components.values()))
            save_checkpoint(directory / "shared.ckpt",
                            any_comp.shared_parameters(),
                            {"kind": "shared"})
            files["shared"] = "shared.ckpt"
            for cat, comp in self.components.items():
                fname = f"decoder_{cat.value}.ckpt"
                save_checkpoint(directory / fname, comp.model.parameters(),
                                {"kind": "decoder", "category": cat.value})
                files[cat.value] = fname
        else:
            for cat, comp in self.components.items():
                fname = f"{cat.value}.ckpt"
                save_checkpoint(directory / fname, comp.parameters(),
                                {"kind": "category", "category": cat.value})
                files[cat.value] = fname
        manifest = {
            "format_version": BUNDLE_FORMAT_VERSION,
            "mode": self.mode,
            "categories": [c.value for c in self.categories],
            "config": self.config.to_dict(),
            "files": files,
        }
        (directory / "bundle.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n",
            encoding="utf-8")

    @classmethod
    def load(cls, directory: str | Path) -> "ModelBundle":
        directory = Path(directory)
        manifest = json.loads((directory / "bundle.json").read_text())
        if manifest["format_version"] > BUNDLE_FORMAT_VERSION:
            raise ValueError("unsupported bundle format version")
        config = CommentaryConfig.from_dict(manifest["config"])
        vocab = Vocabulary.load(directory / manifest["files"]["vocab"])
        categories = [CommentCategory(c) for c in manifest["categories"]]
        bundle = cls.create(manifest["mode"], vocab, config, categories)
        if manifest["mode"] == MODE_MULT:
            shared = load_checkpoint(directory / manifest["files"]["shared"])
            any_comp = next(iter(bundle.components.values()))
            restore_parameters(shared, any_comp.shared_parameters())
            for cat in categories:
                ck = load_checkpoint(directory / manifest["files"][cat.value])
                restore_parameters(ck, bundle.components[cat].model.parameters())
        else:
            for cat in categories:
                ck = load_checkpoint(directory / manifest["files"][cat.value])
                restore_parameters(ck, bundle.components[cat].parameters())
        return bundle

    def model_id(self) -> str:
        h = hashlib.sha256()
        h.update(self.mode.encode())
        h.update(json.dumps(self.config.to_dict(), sort_keys=True).encode())
        for cat in self.categories:
            comp = self.components[cat]
            for p in sorted(comp.parameters(), key=lambda p: p.name):
                h.update(p.name.encode())
                h.update(p.data.astype("<f8").tobytes())
        return h.hexdigest()[:12]
