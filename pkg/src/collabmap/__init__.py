"""collabmap: country co-authorship networks and collaboration maps.

Pipeline: parse bibliographic records, filter to articles/reviews/letters
with a country address, count participation (integer, fractional), build
the single-relation co-authorship network, cosine-normalize, extract
thresholded/core/ego subnetworks, lay them out by stress minimization,
and export geographic and network-analysis file formats.
"""

__version__ = "0.1.0"
