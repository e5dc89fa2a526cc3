from stegedge.errors import *
from stegedge.images import *
from stegedge.mmed import *
from stegedge.planner import *
from stegedge.metrics import *
from stegedge.codec import *
from stegedge.rs import *
from stegedge.baselines import *
from stegedge.evaluation import *
