"""
This module extracts the walk seen at regeneration times, Y_k = X_{tau_k}
with tau_0 = 0, and attaches its increments to a regeneration report.
"""
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.lattice import origin


def _position_at(positions, n):
    if isinstance(positions, dict):
        if n not in positions:
            raise UsageError('No position recorded at regeneration index {}'
                             .format(n))
        return tuple(int(c) for c in positions[n])
    if n >= len(positions):
        raise UsageError('Trajectory has {} positions but the report has a '
                         'regeneration at index {}'.format(len(positions), n))
    return tuple(int(c) for c in positions[n])


def extract_subwalk(positions, report, dimension=None):
    """
    Arguments
    ---------
    positions : sequence of sites or dict
        X_0, X_1, ... recorded at stride 1, or a map from step index to
        site containing at least every confirmed regeneration index.
    report : RegenerationReport

    Keyword arguments
    -----------------
    dimension : int
        Needed only when `positions` is a dict without an entry at 0.

    Returns
    -------
    list
        [Y_0, Y_1, ...], Y_0 the starting site.
    """
    if isinstance(positions, dict) and 0 not in positions:
        if dimension is None:
            if not positions:
                raise UsageError('Cannot infer the dimension of an empty '
                                 'position map')
            dimension = len(next(iter(positions.values())))
        start = origin(dimension)
    else:
        if not isinstance(positions, dict) and len(positions) == 0:
            raise UsageError('Cannot extract a sub-walk from an empty '
                             'trajectory')
        start = _position_at(positions, 0)
    return [start] + [_position_at(positions, n)
                      for n in report.regen_indices]


def subwalk_increments(report, subwalk):
    """
    [tau_{k+1} - tau_k, Y_{k+1} - Y_k] for consecutive confirmed
    regenerations (k >= 1).
    """
    indices = report.regen_indices
    if len(subwalk) != len(indices) + 1:
        raise UsageError('Sub-walk has {} sites, expected {} for {} '
                         'regenerations'.format(len(subwalk),
                                                len(indices) + 1,
                                                len(indices)))
    increments = []
    for k in range(1, len(indices)):
        dy = [b - a for a, b in zip(subwalk[k], subwalk[k + 1])]
        increments.append([indices[k] - indices[k - 1]] + dy)
    return increments


def attach_subwalk(positions, report, dimension=None):
    """
    Returns (sub-walk, report with increments, number of confirmed
    regenerations at the origin).
    """
    subwalk = extract_subwalk(positions, report, dimension=dimension)
    with_increments = report.with_increments(
        subwalk_increments(report, subwalk))
    returns = sum(1 for y in subwalk[1:] if not any(y))
    return subwalk, with_increments, returns
