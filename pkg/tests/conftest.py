import os
import sys

from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

# evaluating random diagrams is slow enough to trip the default deadline
settings.register_profile("diagrams", deadline=None, max_examples=60)
settings.load_profile("diagrams")
