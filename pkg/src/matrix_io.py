"""
Matrix I/O module for RANK FLOW.

Text formats shared by the CLI, the fuzz reports and certificate documents.

Matrix files:
    field Q            (or "field <p>")
    <nrows> <ncols>
    nrows lines of ncols whitespace-separated entries

Polynomials are ascending coefficient lists ("1 0 -1" is 1 - x^2); a factor
list separates polynomials with ';'. Blank lines in matrix files are ignored.
"""

import logging
import re
from pathlib import Path
from typing import List, Sequence, Tuple, Union

from src.error_handler import DimensionMismatch, ParseError
from src.exact_matrix import DenseMatrix
from src.field_core import FieldScalar, FieldSpec
from src.poly_ring import DensePolynomial

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r'\S+')


def _tokens(line: str) -> List[Tuple[int, str]]:
    """(1-based column, token) pairs of a line."""
    return [(m.start() + 1, m.group()) for m in _TOKEN_RE.finditer(line)]


def _parse_entry(token: str, spec: FieldSpec, line: int = None, column: int = None) -> FieldScalar:
    try:
        return FieldScalar.parse(token, spec)
    except ParseError:
        raise ParseError(f"Invalid {spec} entry {token!r}", line=line, column=column) from None


def parse_matrix_text(text: str) -> DenseMatrix:
    """
    Parse a matrix from the text format.

    Args:
        text: File contents

    Returns:
        DenseMatrix over the declared field

    Raises:
        ParseError: Malformed header or entry (with line and column)
        BadField: The declared modulus is not a supported prime
        DimensionMismatch: A row or the row count disagrees with the header
    """
    lines = [(number, line) for number, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not lines:
        raise ParseError("Empty matrix text", line=1)

    number, line = lines[0]
    header = _tokens(line)
    if len(header) != 2 or header[0][1] != 'field':
        raise ParseError("Expected 'field Q' or 'field <p>'", line=number, column=1)
    spec = FieldSpec.parse(header[1][1])

    if len(lines) < 2:
        raise ParseError("Missing dimension line", line=number + 1)
    number, line = lines[1]
    dims = _tokens(line)
    if len(dims) != 2 or not all(token.isdigit() and int(token) > 0 for _, token in dims):
        raise ParseError("Expected '<nrows> <ncols>' with positive integers", line=number, column=1)
    nrows, ncols = int(dims[0][1]), int(dims[1][1])

    body = lines[2:]
    if len(body) != nrows:
        raise DimensionMismatch(f"Header declares {nrows} rows, found {len(body)}")

    rows = []
    for number, line in body:
        tokens = _tokens(line)
        if len(tokens) != ncols:
            raise DimensionMismatch(f"Line {number} has {len(tokens)} entries, expected {ncols}")
        rows.append([_parse_entry(token, spec, number, column) for column, token in tokens])

    matrix = DenseMatrix.from_rows(rows, spec)
    logger.debug(f"parsed {nrows}x{ncols} matrix over {spec}")
    return matrix


def parse_matrix_file(path: Union[str, Path]) -> DenseMatrix:
    """Read and parse a matrix file (see parse_matrix_text)."""
    return parse_matrix_text(Path(path).read_text())


def format_matrix(P: DenseMatrix) -> str:
    """Text form of a matrix; parse_matrix_text reads it back exactly."""
    lines = [f"field {P.domain.label}", f"{P.nrows} {P.ncols}"]
    lines.extend(" ".join(row) for row in matrix_to_entries(P))
    return "\n".join(lines) + "\n"


def write_matrix_file(path: Union[str, Path], P: DenseMatrix) -> None:
    Path(path).write_text(format_matrix(P))


def parse_poly(text: str, spec: FieldSpec) -> DensePolynomial:
    """
    Parse an ascending coefficient list.

    "0 1" is x and "1 0 -1" is 1 - x^2; trailing zeros are stripped so
    "0 0 0" (or an empty list) is the zero polynomial.

    Raises:
        ParseError: On a malformed coefficient (column of the bad token)
    """
    coeffs = [_parse_entry(token, spec, column=column) for column, token in _tokens(text)]
    return DensePolynomial.from_values(coeffs, spec)


def format_poly(p: DensePolynomial) -> str:
    """Ascending coefficient list; "0" for the zero polynomial."""
    if p.is_zero():
        return "0"
    return " ".join(poly_to_entries(p))


def parse_factor_list(text: str, spec: FieldSpec) -> List[DensePolynomial]:
    """
    Parse "c... ; c... ; ..." into polynomials.

    Raises:
        ParseError: If a segment is empty or malformed
    """
    factors = []
    for index, segment in enumerate(text.split(';'), start=1):
        if not segment.strip():
            raise ParseError(f"Factor {index} is empty")
        try:
            factors.append(parse_poly(segment, spec))
        except ParseError as e:
            raise ParseError(f"Factor {index}: {e}") from None
    return factors


def matrix_to_entries(P: DenseMatrix) -> List[List[str]]:
    """Rows of entry strings."""
    return [[s.format_value() for s in row] for row in P.rows()]


def matrix_from_entries(rows: Sequence[Sequence[str]], spec: FieldSpec) -> DenseMatrix:
    """
    Matrix from rows of entry strings.

    Raises:
        ParseError: On a malformed entry (row as line, entry index as column)
        DimensionMismatch: If the rows are empty or ragged
    """
    parsed = [[_parse_entry(str(token), spec, i, j) for j, token in enumerate(row, start=1)]
              for i, row in enumerate(rows, start=1)]
    return DenseMatrix.from_rows(parsed, spec)


def poly_to_entries(p: DensePolynomial) -> List[str]:
    """Ascending coefficient strings ([] for the zero polynomial)."""
    return [c.format_value() for c in p.coeffs]


def poly_from_entries(entries: Sequence[str], spec: FieldSpec) -> DensePolynomial:
    return DensePolynomial.from_values(
        [_parse_entry(str(token), spec, column=j) for j, token in enumerate(entries, start=1)], spec
    )
