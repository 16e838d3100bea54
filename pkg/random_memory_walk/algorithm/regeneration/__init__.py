from random_memory_walk.algorithm.regeneration.detection import detect_offline
from random_memory_walk.algorithm.regeneration.detection\
 import detect_brute_force
from random_memory_walk.algorithm.regeneration.detection\
 import online_candidate
from random_memory_walk.algorithm.regeneration.detection\
 import RegenerationTracker
from random_memory_walk.algorithm.regeneration.renewal import sample_tau1
from random_memory_walk.algorithm.regeneration.renewal import tau1_pmf_oracle
from random_memory_walk.algorithm.regeneration.renewal import tau1_pmf_exact
from random_memory_walk.algorithm.regeneration.renewal\
 import conditioned_start_approx
from random_memory_walk.algorithm.regeneration.subwalk import extract_subwalk
