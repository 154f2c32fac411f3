"""Move and candidate-continuation encoders feeding the text decoders."""

from .move_encoder import (MOVE_TOKEN_VOCAB, MoveEncoder, MoveFeatureSequence,
                           move_features)
from .multichoice import (Choice, MultiChoiceEncoder, choice_weights,
                          diff_embed, multi_choice_context, value_embed)

__all__ = [
    "MOVE_TOKEN_VOCAB", "MoveEncoder", "MoveFeatureSequence", "move_features",
    "Choice", "MultiChoiceEncoder", "choice_weights", "diff_embed",
    "multi_choice_context", "value_embed",
]
