"""Execution infrastructure: random substreams and parallel maps."""

from infrastructure.parallel import chunk_ranges, parallel_map
from infrastructure.streams import Stream, path_generator, path_uniforms, standard_normals

__all__ = [
    "Stream",
    "chunk_ranges",
    "parallel_map",
    "path_generator",
    "path_uniforms",
    "standard_normals",
]
