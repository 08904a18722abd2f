"""Sign assemblies with tau-box links, exact counting, and a finite set lab."""

from .assembly import (
    Assembly,
    Classification,
    LinearAssembly,
    Sign,
    build,
    classify,
    delinearize,
    is_balanced,
    linearize,
    occurrences,
    substitute,
    tau_bind,
)
from .counts import (
    CountVector,
    count_materialized,
    count_symbolic,
    growth_table,
    numeral_counts,
)
from .expander import expand, numeral_expr, parse_expression, print_expression
from .fixpoints import (
    InjectionPair,
    MonotoneMap,
    cantor_bernstein,
    cantor_diagonal,
    fixed_point_lattice,
    koenig_uncovered,
    tarski_extrema,
)
from .formative import formative_construction, verify_formative
from .hf import (
    EMPTY,
    HfSet,
    couple,
    decouple,
    equivalence_check,
    equivalence_closure,
    graph_compose,
    graph_image,
    graph_inverse,
    make_set,
    parse_hf,
    powerset,
    product,
    quotient,
)
from .ordinals import (
    FiniteOrder,
    cardinal_of,
    is_ordinal,
    is_well_order,
    lex_product,
    nat_arith,
    numeral,
    order_type,
    ordinal_compare,
    segment,
    successor,
    sup_ordinals,
    transfinite_recurse,
)

__version__ = "0.1.0"
