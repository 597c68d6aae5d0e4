"""Random-sample surface reconstruction on the unit square.

Fits a piecewise-constant approximation of a bivariate function from
uniformly random point samples: each point is embedded into a sparse vector
indexed by dyadic rectangles, and the coefficient vector is solved by a
randomized Kaczmarz sweep over the samples.  The classical center-sample
combination formula and its explicit weight vector are implemented
alongside as exact oracles.

Hot loops run on compiled kernels when the extension built, and on a NumPy
fallback otherwise; mhkz.kernels.BACKEND reports which one is active.
"""

from mhkz.approximator import (
    Model,
    ModelFormatError,
    ModelMeta,
    SampleSet,
    SpinEnsemble,
    default_iterations,
    draw_samples,
    ensemble_evaluate,
    ensemble_evaluate_many,
    evaluate,
    evaluate_many,
    fit,
    fit_spin,
    integrate,
    l2_error,
    load_ensemble,
    load_model,
    save_ensemble,
    save_model,
)
from mhkz.dyadic import DyadicRect, dim, locate, rect_of_index
from mhkz.embedding import CoefVector, SparseEmbedding, embed, full_matrix
from mhkz.kaczmarz import KaczmarzConfig, ConvergenceTrace, kaczmarz_dense, kaczmarz_run
from mhkz.kernels import BACKEND
from mhkz.smolyak import CenterSamples, build_weight_vector, smolyak_eval
from mhkz.functions import REGISTRY, TestFunction

__version__ = "0.1.0"
