"""Decision trees for categorical and discretized tabular data.

The package pairs two splitting criteria, a correlation-ratio score that
has no preference for many-valued attributes and classic information gain,
with the dataset plumbing needed to run them end to end: schema-driven
loading, discretization, missing-value policies, seeded k-fold and holdout
splitting, and criterion-comparison reports.  A scikit-learn estimator
layer (:class:`TreeClassifier`, :class:`Discretizer`,
:class:`MissingResolver`) wraps the functional core.
"""

from .criteria import (
    CrossTab,
    CrScore,
    build_crosstab,
    categorical_correlation_ratio,
    class_means,
    correlation_ratio_categorical,
    correlation_ratio_numeric,
    entropy,
    information_gain,
    numeric_correlation_ratio,
)
from .data import (
    MISSING,
    MISSING_LABEL,
    AttributeSchema,
    BinDirective,
    Dataset,
    GroupedColumn,
    SchemaSpec,
    group_by_class,
    load_table,
    read_schema,
)
from .errors import CrtreeError, ParseError, ValidationError
from .estimators import Discretizer, MissingResolver, TreeClassifier
from .evaluation import (
    ComparisonTable,
    ConfusionMatrix,
    EvaluationReport,
    FixedProtocol,
    HoldoutProtocol,
    KFoldProtocol,
    compare_criteria,
    cross_validate,
    evaluate_protocol,
    score_accuracy,
)
from .folds import FoldAssignment, assign_folds, split_holdout
from .preprocessing import (
    apply_schema_discretization,
    discretize,
    resolve_missing,
)
from .tree import (
    DecisionTree,
    Leaf,
    Split,
    build_tree,
    majority_class,
    predict,
    predict_dataset,
    render_tree,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeSchema",
    "BinDirective",
    "ComparisonTable",
    "ConfusionMatrix",
    "CrScore",
    "CrossTab",
    "CrtreeError",
    "Dataset",
    "DecisionTree",
    "Discretizer",
    "EvaluationReport",
    "FixedProtocol",
    "FoldAssignment",
    "GroupedColumn",
    "HoldoutProtocol",
    "KFoldProtocol",
    "Leaf",
    "MISSING",
    "MISSING_LABEL",
    "MissingResolver",
    "ParseError",
    "SchemaSpec",
    "Split",
    "TreeClassifier",
    "ValidationError",
    "apply_schema_discretization",
    "assign_folds",
    "build_crosstab",
    "build_tree",
    "categorical_correlation_ratio",
    "class_means",
    "compare_criteria",
    "correlation_ratio_categorical",
    "correlation_ratio_numeric",
    "cross_validate",
    "discretize",
    "entropy",
    "evaluate_protocol",
    "group_by_class",
    "information_gain",
    "load_table",
    "majority_class",
    "numeric_correlation_ratio",
    "predict",
    "predict_dataset",
    "read_schema",
    "render_tree",
    "resolve_missing",
    "score_accuracy",
    "split_holdout",
]
