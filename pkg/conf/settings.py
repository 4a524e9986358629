r"""
seqsim settings file.

Module-level defaults for every tunable the library and the command line
use. Each name here can be overridden from the environment by prefixing it
with `SEQSIM_` (for example `SEQSIM_ALPHA=1.0`); command-line flags win over
both. See `conf.get_setting`.

Don't read these constants directly from library code that takes a
parameter for the same value; pass the value in instead so calls stay
reproducible.

"""

######################################################################
# Weighted digraph descriptor
######################################################################

# Exponent of the positional weight (j - i) ** -alpha. Must be > 0.
ALPHA = 0.5
# Longest position gap that contributes an edge. None means unlimited.
MAX_DISTANCE = None

######################################################################
# Worm curve
######################################################################

# Grid width for the dark-spot lattice. None means ceil(sqrt(bit length)).
WORM_WIDTH = None

######################################################################
# Pairwise alignment
######################################################################

MATCH = 1
MISMATCH = -1
GAP = -2
# Inputs above this many bases are refused instead of filling a
# quadratic matrix.
MAX_ALIGNMENT_LENGTH = 100_000

######################################################################
# Distance engine / pipeline
######################################################################

# Worker threads for pair evaluation. None means available CPUs.
WORKERS = None
DEFAULT_METHOD = "digraph"
DEFAULT_METRIC = "euclidean"
DEFAULT_TREE_ALGORITHM = "nj"

######################################################################
# Emission
######################################################################

FASTA_LINE_WIDTH = 60
SVG_WIDTH = 640
SVG_HEIGHT = 480
SVG_MARGIN = 40
# Pixel size of one cell in PNG rasters (dot plots, spot grids).
PNG_CELL_SIZE = 4
