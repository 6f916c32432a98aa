import sys
from pathlib import Path

# the plot scripts are standalone files one directory up
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
