"""Exception types shared across the simulator."""


class SemcomError(Exception):
    """Base class for all simulator errors."""


class InvalidParameterError(SemcomError):
    """A parameter is outside its documented range."""


class MalformedPacketError(SemcomError):
    """A bit packet has the wrong length or carries an out-of-range index."""


class DegenerateSceneError(SemcomError):
    """Segmentation found too few foreground pixels to work with."""


class DegenerateShapeError(SemcomError):
    """Too few angular sectors are populated to estimate a shape ratio."""


class DegenerateHueError(SemcomError):
    """The circular mean of the foreground hues is undefined."""
