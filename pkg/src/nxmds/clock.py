"""Process-wide logical clock.

Error plans and challenge vectors carry a tick from this clock so the
verifier can prove the plan was fixed before the challenge was drawn.
Wall time would work too but a counter is exact and cannot collide.
"""

import itertools

_counter = itertools.count(1)


def tick() -> int:
    """Next value of the monotone counter; never repeats in a process."""
    return next(_counter)
