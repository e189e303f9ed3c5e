"""Low-resolution thermal-array occupancy monitoring toolkit.

Reconstructs per-minute 16x12 thermal frames from two-file raw recordings,
detects and tracks a person's warm-blob centroid, classifies activity by
spatial zone (Sleeping / Daily / NoActivity), and produces per-day duration
reports and log-normalized spatial heatmaps. A synthetic scenario generator
with exact ground truth serves as the verification oracle.
"""

__version__ = "0.1.0"
