from .checkpoint import load_parameters_csv, net_from_rows, net_to_rows, save_parameters_csv
from .gradcheck import max_relative_error, numerical_gradients
from .net import (
    DenseNet,
    GradientSet,
    backward,
    clipped_log_std,
    forward,
    log_likelihood_logit_gradient,
    softmax,
)
from .optim import (
    AdamState,
    SgdState,
    clip_gradients,
    make_optimizer_state,
    optimizer_step,
)
