DEFAULTS = {
    'truncation_mass': 1e-12,
    'product_error': 1e-10,
    'confirmation_tolerance': 1e-6,
    'significance': 0.01,
    'standard_errors': 3.0,
    'heavy_tail_cutoff': 10.0,
    'min_clt_replicas': 500,
    'max_history_points': 5 * 10**7,
    'tau1_samples': 10**6,
    'tau1_max_horizon': 2**24,
    'tau1_chunk_cells': 2**22,
    'batch_cells': 2**27,
    'batch_uniforms': 2**22,
    's1_k_max': 20,
    'transience_fraction': 0.02,
    'tail_fraction': 0.01
}


def default(name, value=None):
    """Returns `value` unless it is None, in which case the package default
    registered under `name` is returned."""
    if value is None:
        return DEFAULTS[name]
    return value
