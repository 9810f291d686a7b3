"""Canonical column names of the metric CSV.

The order is a compatibility contract: readers and writers use these
tuples verbatim.
"""

SCHEMA_VERSION = 1

PROGRAM = "Program"
CC_GRADE = "CC Grade"

COVERAGE = "Code Coverage"
MAINTAINABILITY = "Maintainability Index"
COMPILING = "Compiling"
FUNCTIONALITY = "Functionality"
EDITS = "Edits"
SEQUENCE_RATIO = "Sequence Ratio"
CC_NUMBER = "CC Number"
LOC = "LOC"
ROUGE = tuple(
    f"ROUGE-{variant} {part}"
    for variant in ("1", "2", "L")
    for part in ("Precision", "Recall", "F1")
)
LLOC = "LLOC"
SLOC = "SLOC"
COMMENTS = "Comments"
C_PCT_L = "C%L"
C_PCT_S = "C%S"
CM_PCT_L = "C+M%L"
DIFFICULTY = "Difficulty"
EFFORT = "Effort"
PROGRAMMING_TIME = "Programming Time"
BUGS = "Bugs"
EXECUTION_TIME = "Execution Time"
COSINE = "Cosine similarity"
SOFT_COSINE = "Soft Cosine similarity"
BLEU = "BLEU"

FEATURE_COLUMNS: tuple[str, ...] = (
    COVERAGE,
    MAINTAINABILITY,
    COMPILING,
    EDITS,
    SEQUENCE_RATIO,
    CC_NUMBER,
    LOC,
    *ROUGE,
    LLOC,
    SLOC,
    COMMENTS,
    C_PCT_L,
    C_PCT_S,
    CM_PCT_L,
    DIFFICULTY,
    EFFORT,
    PROGRAMMING_TIME,
    BUGS,
    EXECUTION_TIME,
    COSINE,
    SOFT_COSINE,
    BLEU,
)
assert len(FEATURE_COLUMNS) == 30

INTEGER_COLUMNS = frozenset({COMPILING, FUNCTIONALITY, EDITS, LOC, LLOC, SLOC, COMMENTS})

# static columns are deterministic functions of the input files
DYNAMIC_COLUMNS = frozenset({EXECUTION_TIME})

LABEL = "Label"
COMPILE_ERRORS = "Compile Errors"
CC_MODULE_LEVEL = "CC Module Level"
INCOMPLETE = "Incomplete"

METADATA_TAIL: tuple[str, ...] = (LABEL, COMPILE_ERRORS, CC_MODULE_LEVEL, INCOMPLETE)

# Functionality is a human annotation that feeds the label rather than a
# model input; it keeps its customary slot between Compiling and Edits.
CSV_HEADER: tuple[str, ...] = (
    PROGRAM,
    *FEATURE_COLUMNS[:3],
    FUNCTIONALITY,
    *FEATURE_COLUMNS[3:5],
    CC_GRADE,
    *FEATURE_COLUMNS[5:],
    *METADATA_TAIL,
)

SIMILARITY_COLUMNS: tuple[str, ...] = (EDITS, SEQUENCE_RATIO, *ROUGE, COSINE, SOFT_COSINE, BLEU)
