from . import tensor
from .adam import AdamState
from .checkpoint import load_checkpoint, save_checkpoint
from .gradcheck import finite_diff_check
from .lstm import LSTMWeights, lstm_cell, lstm_step, run_bilstm_layer, run_direction
from .tensor import Tensor, no_grad

__all__ = [
    "tensor", "Tensor", "no_grad",
    "AdamState", "finite_diff_check",
    "LSTMWeights", "lstm_cell", "lstm_step", "run_direction", "run_bilstm_layer",
    "save_checkpoint", "load_checkpoint",
]
