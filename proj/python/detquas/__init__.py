from ._detquas import *  # noqa: F401,F403
