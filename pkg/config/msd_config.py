# msd settings

import os
from dotenv import load_dotenv

load_dotenv()

# Slide search
MSD_BUDGET = int(os.getenv("MSD_BUDGET", "50"))  # max handle slides per pair
GREEDY_ROUNDS = int(os.getenv("MSD_GREEDY_ROUNDS", "200"))

# Logging
MSD_LOG_LEVEL = os.getenv("MSD_LOG_LEVEL", "WARNING")
MSD_LOG_FILE = os.getenv("MSD_LOG_FILE", "msd.log")

# File formats
DIAGRAM_FORMAT_VERSION = 1
FRONT_FORMAT_VERSION = 1
PALF_FORMAT_VERSION = 1

# Curve growth guard for twist words
MAX_CURVE_LENGTH = int(os.getenv("MSD_MAX_CURVE_LENGTH", "20000"))

# SVG rendering
SVG_WIDTH = 720
SVG_HEIGHT = 480
SVG_MARGIN = 24
SVG_PALETTE = [
    "#d62728",  # red
    "#1f77b4",  # blue
    "#2ca02c",  # green
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
]
SVG_DIVIDES_COLOR = "#000000"
SVG_DIVIDES_DASH = "6,4"
SVG_SURFACE_STROKE = "#7f7f7f"

# User-facing status messages
STATUS_MESSAGES = {
    "Certified": "✅ pair standardized",
    "RefutedByHomology": "❌ pair is not a splitting of #S1xS2",
    "Unknown": "⚠️ inconclusive within the slide budget",
    "Genus1Tight": "✅ tight genus-1 pair",
    "Genus1Overtwisted": "❌ overtwisted genus-1 pair",
    "ByConstruction": "✅ tight by construction",
}
