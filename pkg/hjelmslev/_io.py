import logging
from pathlib import Path
from typing import Callable, Dict, Union

from ._choices import CHOICES_MAGIC, ConstructionChoices
from ._errors import FormatError
from ._hjelmslev import HjelmslevPlane
from ._incidence import INC_MAGIC, IncidenceStructure
from ._report import VerificationReport
from ._seeds import AffinePlane, OrthogonalArray, ProjectivePlane
from ._seeds._orthogonal_array import OA_MAGIC

logger = logging.getLogger(__name__)

Artifact = Union[IncidenceStructure, OrthogonalArray, ConstructionChoices, VerificationReport]
PathLike = Union[str, Path]

# Header line -> parser
ARTIFACT_PARSERS: Dict[str, Callable[[str], Artifact]] = {
    INC_MAGIC: IncidenceStructure.from_text,
    OA_MAGIC: OrthogonalArray.from_text,
    CHOICES_MAGIC: ConstructionChoices.from_text,
}


def _header(text: str) -> str:
    for row in text.split("\n"):
        row = row.strip()
        if row and not row.startswith("#"):
            return row
    return ""


def read_artifact(path: PathLike) -> Artifact:
    """
    Load any text artifact, dispatching on its header line: "INC 1",
    "OA 1", "CHOICES 1", or a verification report ("VERDICT ...").

    Raises:
        FormatError: If the header is unknown or the body is malformed
        OSError: If the file cannot be read
    """
    text = Path(path).read_text(encoding="utf-8")
    header = _header(text)
    if header.startswith("VERDICT "):
        return VerificationReport.from_text(text)
    parser = ARTIFACT_PARSERS.get(header)
    if parser is None:
        raise FormatError(1, f"{path}: unknown artifact header {header!r}")
    logger.debug("reading %s as %r", path, header)
    return parser(text)


def write_artifact(path: PathLike, obj) -> str:
    """
    Write an artifact in its canonical text form (UTF-8, LF endings) and
    return the text. Planes are written as their incidence structure.
    """
    if isinstance(obj, (HjelmslevPlane, ProjectivePlane, AffinePlane)):
        obj = obj.structure
    if not isinstance(obj, (IncidenceStructure, OrthogonalArray, ConstructionChoices, VerificationReport)):
        raise TypeError(f"cannot write {type(obj).__name__} as an artifact")
    text = obj.to_text()
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.debug("wrote %s (%d bytes)", path, len(text))
    return text
