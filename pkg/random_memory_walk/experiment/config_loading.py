"""
This module reads experiment files (a TOML subset with the sections
[walk], [memory], [kernel], [experiment], [analysis] and [numerics]) into
ExperimentConfig objects.

Validation errors name the offending field and, when the configuration
came from a file, the line where that field is set.
"""
import copy
import re
try:
    import tomllib
except ImportError:
    import tomli as tomllib
from random_memory_walk.algorithm.exception import ConfigurationError
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.memory_law import FAMILIES, memory_law
from random_memory_walk.algorithm.walk.kernel_walk import KERNELS
from random_memory_walk.algorithm.walk.state_data import WalkConfig
from random_memory_walk.statistics.ensemble import AnalysisOptions

FORMATS = ('csv', 'jsonl')

# section -> key -> accepted python types
SCHEMA = {
    'walk': {
        'dimension': (int,),
        'delta': (int, float),
        'engine': (str,),
        'horizon': (int,),
        'record_stride': (int,),
        'ellipticity_split': (bool,),
        'batched': (bool,)
    },
    'memory': {
        'family': (str,),
        'k': (int,),
        'p1': (int, float),
        'p': (int, float),
        'm': (int,),
        'alpha': (int, float)
    },
    'kernel': {
        'name': (str,),
        'ellipticity_floor': (int, float),
        'debug': (bool,)
    },
    'experiment': {
        'replicas': (int,),
        'master_seed': (int,),
        'output': (str,),
        'format': (str,),
        'checkpoints': (list,),
        'workers': (int,)
    },
    'analysis': {
        'regen': (bool,),
        'clt': (bool,),
        'returns': (bool,),
        'tail': (bool,),
        'return_cutoff': (int,),
        'clt_step': (int,),
        'tail_fraction': (int, float)
    },
    'numerics': {
        'confirmation_tolerance': (int, float),
        'significance': (int, float),
        'standard_errors': (int, float),
        'max_history_points': (int,),
        'min_clt_replicas': (int,),
        'heavy_tail_cutoff': (int, float),
        'transience_fraction': (int, float)
    }
}

REQUIRED = (('walk', 'dimension'), ('walk', 'delta'), ('walk', 'horizon'),
            ('memory', 'family'), ('experiment', 'replicas'))

_HEADER = re.compile(r'^\s*\[\s*([A-Za-z0-9_.]+)\s*\]\s*(#.*)?$')


def locate(text, section, key):
    """
    Line number (1-based) where `key` is set inside [section], or where the
    section header is when the key is not found; None otherwise.
    """
    if text is None:
        return None
    current = None
    header_line = None
    pattern = re.compile(r'^\s*["\']?{}["\']?\s*='.format(re.escape(key))) \
        if key is not None else None
    for number, line in enumerate(text.splitlines(), start=1):
        match = _HEADER.match(line)
        if match:
            current = match.group(1)
            if current == section:
                header_line = number
            continue
        if current == section and pattern is not None and pattern.match(line):
            return number
    return header_line


class ExperimentConfig(object):
    """
    Everything needed to run and analyze one ensemble.

    Arguments
    ---------
    values : dict
        Section name -> {key: value}, as parsed from the TOML file.

    Keyword arguments
    -----------------
    source : str
        File the values came from; used in error messages.
    text : str
        Raw file text, used to find line numbers.
    """

    def __init__(self, values, source=None, text=None):
        self._values = copy.deepcopy(values)
        self._source = source
        self._text = text
        self._validate_schema()
        walk = self.section('walk')
        experiment = self.section('experiment')
        kernel = self.section('kernel')
        analysis = self.section('analysis')
        numerics = self.section('numerics')
        self.replicas = experiment['replicas']
        if self.replicas < 1:
            self.fail('experiment.replicas must be >= 1, got {}'.format(
                self.replicas), 'experiment.replicas')
        self.master_seed = experiment.get('master_seed', 0)
        if not 0 <= self.master_seed < 2**64:
            self.fail('experiment.master_seed must be a 64-bit unsigned '
                      'integer', 'experiment.master_seed')
        self.output = experiment.get('output', 'output')
        self.format = experiment.get('format', 'csv')
        if self.format not in FORMATS:
            self.fail('experiment.format must be one of {}, got {!r}'.format(
                ', '.join(FORMATS), self.format), 'experiment.format')
        self.workers = experiment.get('workers', 1)
        if self.workers == 0 or self.workers < -1:
            self.fail('experiment.workers must be >= 1 or -1 (all cores)',
                      'experiment.workers')
        checkpoints = experiment.get('checkpoints', [])
        if not all(isinstance(n, int) and not isinstance(n, bool)
                   for n in checkpoints):
            self.fail('experiment.checkpoints must be a list of integers',
                      'experiment.checkpoints')
        self.law = self._build_law()
        self.analysis = AnalysisOptions(
            regen=analysis.get('regen', False),
            clt=analysis.get('clt', False),
            returns=analysis.get('returns', True),
            tail=analysis.get('tail', False),
            return_cutoff=analysis.get('return_cutoff', 0),
            clt_step=analysis.get('clt_step'),
            tail_fraction=analysis.get('tail_fraction'),
            significance=numerics.get('significance'),
            standard_errors=numerics.get('standard_errors'),
            min_clt_replicas=numerics.get('min_clt_replicas'),
            transience_fraction=numerics.get('transience_fraction'))
        if self.analysis.tail and not self.analysis.regen:
            self.fail('analysis.tail needs analysis.regen = true',
                      'analysis.tail')
        if self.analysis.clt_step is not None \
                and self.analysis.clt_step not in checkpoints:
            self.fail('analysis.clt_step must be one of '
                      'experiment.checkpoints', 'analysis.clt_step')
        if self.analysis.clt and not any(n > 0 for n in checkpoints):
            self.fail('analysis.clt needs a checkpoint step > 0 in '
                      'experiment.checkpoints', 'analysis.clt')
        try:
            self.walk = WalkConfig(
                walk['dimension'], walk['delta'], self.law,
                engine=walk.get('engine', 'memory_walk'),
                horizon=walk['horizon'],
                record_stride=walk.get('record_stride', 0),
                checkpoints=checkpoints, regen=self.analysis.regen,
                kernel=kernel.get('name'),
                ellipticity_floor=kernel.get('ellipticity_floor'),
                ellipticity_split=walk.get('ellipticity_split', False),
                debug=kernel.get('debug', False),
                max_history_points=numerics.get('max_history_points'),
                confirmation_tolerance=numerics.get(
                    'confirmation_tolerance'),
                batched=walk.get('batched', False))
        except ConfigurationError as error:
            self.fail(error.args[0], error.field)
        if self.walk.engine == 'kernel' and isinstance(self.walk.kernel, str) \
                and self.walk.kernel not in KERNELS:
            self.fail('unknown kernel {!r}; registered kernels: {}'.format(
                self.walk.kernel, ', '.join(sorted(KERNELS))), 'kernel.name')

    @property
    def source(self):
        return self._source

    def section(self, name):
        return self._values.get(name, {})

    def fail(self, message, field):
        section, _, key = (field or '').partition('.')
        raise ConfigurationError(message, field=field,
                                 line=locate(self._text, section, key or None),
                                 source=self._source)

    def _validate_schema(self):
        for section, values in self._values.items():
            if section not in SCHEMA:
                raise ConfigurationError(
                    'unknown section [{}]; expected one of {}'.format(
                        section, ', '.join(sorted(SCHEMA))),
                    field=section, line=locate(self._text, section, None),
                    source=self._source)
            if not isinstance(values, dict):
                self.fail('[{}] must be a table'.format(section), section)
            for key, value in values.items():
                field = '{}.{}'.format(section, key)
                if key not in SCHEMA[section]:
                    self.fail('unknown key {}'.format(field), field)
                types = SCHEMA[section][key]
                if isinstance(value, bool) and bool not in types \
                        or not isinstance(value, types):
                    self.fail('{} must be of type {}, got {!r}'.format(
                        field, '/'.join(t.__name__ for t in types), value),
                        field)
        for section, key in REQUIRED:
            if key not in self.section(section):
                self.fail('missing required key {}.{}'.format(section, key),
                          '{}.{}'.format(section, key))

    def _build_law(self):
        params = dict(self.section('memory'))
        family = params.pop('family')
        try:
            return memory_law(family, **params)
        except UsageError as error:
            if family in FAMILIES and params:
                field = 'memory.{}'.format(sorted(params)[0])
            else:
                field = 'memory.family'
            self.fail(str(error), field)

    def with_overrides(self, seed=None, output_format=None, workers=None,
                       output=None):
        """Copy with command line flags applied over the file values."""
        values = copy.deepcopy(self._values)
        experiment = values.setdefault('experiment', {})
        if seed is not None:
            experiment['master_seed'] = seed
        if output_format is not None:
            experiment['format'] = output_format
        if workers is not None:
            experiment['workers'] = workers
        if output is not None:
            experiment['output'] = output
        return ExperimentConfig(values, source=self._source, text=self._text)

    def to_dict(self):
        """
        Resolved configuration as written to config.json. Where and how
        the run executes (output, workers) is left out.
        """
        values = copy.deepcopy(self._values)
        experiment = values.setdefault('experiment', {})
        experiment.pop('output', None)
        experiment.pop('workers', None)
        experiment['master_seed'] = self.master_seed
        experiment['format'] = self.format
        return values

    @classmethod
    def from_dict(cls, values, source=None):
        return cls(values, source=source)


def parse_toml(text, source=None):
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as error:
        raise ConfigurationError('invalid TOML: {}'.format(error),
                                 source=source)


def read_text(filepath):
    try:
        with open(filepath, 'r', encoding='utf-8') as file:
            return file.read()
    except OSError as error:
        raise ConfigurationError('cannot read configuration: {}'.format(
            error.strerror), source=str(filepath))


def load_experiment(filepath):
    """ExperimentConfig from a TOML file."""
    text = read_text(filepath)
    values = parse_toml(text, source=str(filepath))
    return ExperimentConfig(values, source=str(filepath), text=text)
