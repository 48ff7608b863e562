"""Stack, queue and mixed linear layouts: validation, exact search, transformations and subdivisions."""

from .core import (
    QUEUE,
    STACK,
    Graph,
    LayoutError,
    LinearLayout,
    Page,
    VertexOrder,
    is_separated,
    to_grid,
    validate_layout,
)
from .solver import PageBudget, feasible, optimal_layout
from .treelayout import SubdivisionRecord, TreeLayout

__all__ = [
    "QUEUE",
    "STACK",
    "Graph",
    "LayoutError",
    "LinearLayout",
    "Page",
    "PageBudget",
    "SubdivisionRecord",
    "TreeLayout",
    "VertexOrder",
    "feasible",
    "is_separated",
    "optimal_layout",
    "to_grid",
    "validate_layout",
]

__version__ = "0.1.0"
