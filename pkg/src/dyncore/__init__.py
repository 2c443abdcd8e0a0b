"""Define-by-run reverse-mode autodiff: a fresh graph per example over
arena-backed memory, with sequence/tree builders, online trainers, and an
in-process data-parallel training loop."""

from . import errors, ops
from .arena import ALIGNMENT, Pool, PoolSet, new_poolset, poolset_from_mem_flag
from .builders import ClassFactoredSoftmax, RNNBuilder, RNNState, TreeLSTM, TreeNode, TreeRNN
from .gradcheck import assert_gradients_match
from .graph import ComputationGraph, Expression
from .parallel import GradientSlots, ParallelPlan, average_slots, train_parallel
from .params import LookupParameter, Model, Parameter
from .tensor import Shape, Tensor, argmax, at, from_values
from .trainers import Trainer

__all__ = [
    "ALIGNMENT",
    "ClassFactoredSoftmax",
    "ComputationGraph",
    "Expression",
    "GradientSlots",
    "LookupParameter",
    "Model",
    "ParallelPlan",
    "Parameter",
    "Pool",
    "PoolSet",
    "RNNBuilder",
    "RNNState",
    "Shape",
    "Tensor",
    "Trainer",
    "TreeLSTM",
    "TreeNode",
    "TreeRNN",
    "argmax",
    "assert_gradients_match",
    "at",
    "average_slots",
    "errors",
    "from_values",
    "new_poolset",
    "ops",
    "poolset_from_mem_flag",
    "train_parallel",
]
