"""Design-verification toolkit for a flippered tracked rescue robot."""

__version__ = "0.1.0"

from karokit.model import RobotSpec, karo, load_spec, validate_spec

__all__ = ["RobotSpec", "karo", "load_spec", "validate_spec", "__version__"]
