"""Receiver error types."""


class FrameNotFoundError(RuntimeError):
    """No preamble plateau (or training-symbol fix) found in the buffer."""


class SignalFieldError(RuntimeError):
    """SIGNAL symbol failed parity, rate lookup, or length sanity checks."""
