from random_memory_walk.statistics.ensemble import AnalysisOptions
from random_memory_walk.statistics.ensemble import EnsembleSummary
from random_memory_walk.statistics.ensemble import summarize
from random_memory_walk.statistics.estimators import hill_tail_index
from random_memory_walk.statistics.estimators import ks_two_sample
from random_memory_walk.statistics.estimators import msd_curve
from random_memory_walk.statistics.estimators import msd_linearity
from random_memory_walk.statistics.theorems import clt_tests
from random_memory_walk.statistics.theorems import return_statistics
