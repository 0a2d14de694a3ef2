"""
Valid prediction sets and plausibilities for poll-based election forecasts.
"""
from .forecaster import PollForecaster, load_joint_model, load_poll

__version__ = "0.1.0"

__all__ = ["PollForecaster", "load_joint_model", "load_poll", "__version__"]
