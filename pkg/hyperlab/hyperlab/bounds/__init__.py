from hyperlab.hyperlab.bounds.bounds import (
    MIN_MAIN_RADIUS,
    BoundReport,
    ConditionBound,
    LemmaConstruction,
    LemmaSolution,
    condition_ratio_lower,
    lemma_construction,
    lemma_last_solve,
    lemma_lhs,
    lemma_rhs,
    main_lower_bound,
)
