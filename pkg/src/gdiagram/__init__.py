"""gdiagram: finite models from logical theories via generalized diagrams.

A theory (sorts, constructor symbols, predicates, facts, rule schemata,
ground equations, axioms) determines a canonical finite model: the universe
is the constructor-generated term set modulo the declared equations, and
predicates denote partial sets with an exact member / non-member / unknown
tripartition. Formulas evaluate under strong Kleene semantics at points of
reference (world, time); unknown atoms can be forced, elements added, and
partially specified predicates merged, each step producing a new snapshot.
"""
from .congruence import congruence_close
from .diagram import (
    Atom,
    DiagramRule,
    GDiagram,
    Model,
    PartialSet,
    build_canonical_model,
    lookup_atom,
)
from .errors import (
    CommandError,
    EngineError,
    InconsistencyError,
    ParseError,
    ResourceLimitError,
    SessionFormatError,
    SignatureError,
    SortError,
    UninhabitedSortError,
)
from .evaluate import (
    EvalTrace,
    PointOfReference,
    eval_formula,
    eval_modal,
    skolemize_existential,
    truth_set,
)
from .expand import (
    ConsistencyVerdict,
    ExpansionStep,
    Obligation,
    add_element,
    check_consistency,
    force,
    force_predicates_equal,
    test_function_equality,
)
from .formula import (
    IndexedFunctionFamily,
    apply_family,
    free_variables,
    parse_formula,
    render,
)
from .intension import (
    ConceptSet,
    IndexSet,
    IndividualConcept,
    IntensionalModel,
    IndexedDiagram,
    as_indexed_diagrams,
    build_intensional_model,
    list_individual_concepts,
)
from .session import (
    PendingChoice,
    Session,
    SessionConfig,
    load_theory,
    restore_session,
    run_command,
    save_session,
)
from .signature import (
    FuncSymbol,
    PredSymbol,
    Signature,
    Sort,
    Term,
    Variable,
    generate_terms,
    validate_signature,
)
from .theory import IntensionalTheory, Theory, parse_theory
from .truth import Truth3, kleene_all, kleene_and, kleene_any, kleene_implies, kleene_not, kleene_or

__version__ = "0.1.0"
