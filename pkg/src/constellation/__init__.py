from .qam import Constellation, draw_indices, draw_uniform, make_qam

__all__ = ["Constellation", "draw_indices", "draw_uniform", "make_qam"]
