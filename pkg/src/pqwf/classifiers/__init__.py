from .base import LabeledDataset, Standardizer, standardize_fit
from .forest import DecisionTree, RandomForestClassifier, gini, tree_stream, tree_train
from .knn import KnnClassifier
from .svm import BinaryMachine, SvmClassifier, rbf_kernel, smo_solve, train_binary

MODEL_TYPES = {cls.kind: cls for cls in (KnnClassifier, SvmClassifier, RandomForestClassifier)}


def model_from_dict(d: dict):
    """Rebuild a trained model from its JSON form."""
    return MODEL_TYPES[d["kind"]].from_dict(d)


__all__ = [
    "BinaryMachine",
    "DecisionTree",
    "KnnClassifier",
    "LabeledDataset",
    "RandomForestClassifier",
    "Standardizer",
    "SvmClassifier",
    "gini",
    "model_from_dict",
    "rbf_kernel",
    "smo_solve",
    "standardize_fit",
    "train_binary",
    "tree_stream",
    "tree_train",
]
