"""Power-quality disturbance synthesis, db4 wavelet features and KNN/SVM/RF classification."""

__version__ = "0.1.0"
