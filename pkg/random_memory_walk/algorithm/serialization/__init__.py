from random_memory_walk.algorithm.serialization.run_summary\
 import RegenerationReport
from random_memory_walk.algorithm.serialization.run_summary import RunSummary
