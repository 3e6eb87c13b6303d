"""Decision rules: generic feedback policies and the trading policies."""

from policies.base import ConstantPolicy, LinearFeedbackPolicy, Policy

__all__ = ["ConstantPolicy", "LinearFeedbackPolicy", "Policy"]
