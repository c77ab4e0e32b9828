"""Link-level simulation of physical-layer network coding for the K-user
multiple access relay channel."""

__version__ = "0.1.0"

from .channel import (ChannelRealization, LinkVariances, ReceivedSignals,
                      draw_channel, phase1_receive, phase2_receive)
from .codebook import (CoefficientSet, build_codeword_matrix, example_coefficients,
                       hr_orthogonality_check, rank_condition_check,
                       v_set_coefficients)
from .decoder import (Branch, DestinationDecision, PreconditionError, build_heq,
                      decode_naive, decode_novel_exhaustive, decode_novel_fast,
                      metric_m1, metric_m2, metric_m3, metric_m4, qr_2xn)
from .mc_sim import (ExperimentSpec, SchemeConfig, SepCurve, estimate_sep,
                     fit_diversity_slope, run_experiment, run_trial)
from .netcode import LatinHypercube, modular_sum_hypercube, validate_hypercube
from .relay import relay_ml_estimate
from .signal import SignalSet, difference_set, make_psk, map_bits, demap
