"""Category-specific comment generation grounded in engine internals."""

from .categories import (CATEGORIES, CommentCategory, CommentarySample,
                         GenerationConfig, MAX_COMMENT_TOKENS)
from .contexts import (AuxRecord, BuiltContext, ContextPlan,
                       NoContinuationError, build_contexts, cached_state_fn,
                       plan_contexts, realize_context)
from .model import (CategoryModel, CommentResult, StepRecord, attend,
                    decode_comment, generation_loss, teacher_forced_accuracy)
from .bundle import (BUNDLE_FORMAT_VERSION, CategoryComponents,
                     CommentaryConfig, MODE_MULT, MODE_SINGLE, ModelBundle)
from .training import (CategoryTrainLog, CommentaryTrainConfig, EpochLog,
                       TrainReport, evaluate_loss, token_accuracy,
                       train_commentary)

__all__ = [
    "CATEGORIES", "CommentCategory", "CommentarySample", "GenerationConfig",
    "MAX_COMMENT_TOKENS", "AuxRecord", "BuiltContext", "ContextPlan",
    "NoContinuationError", "build_contexts", "cached_state_fn",
    "plan_contexts", "realize_context", "CategoryModel", "CommentResult",
    "StepRecord", "attend", "decode_comment", "generation_loss",
    "teacher_forced_accuracy", "BUNDLE_FORMAT_VERSION", "CategoryComponents",
    "CommentaryConfig", "MODE_MULT", "MODE_SINGLE", "ModelBundle",
    "CategoryTrainLog", "CommentaryTrainConfig", "EpochLog", "TrainReport",
    "evaluate_loss", "token_accuracy", "train_commentary",
]
