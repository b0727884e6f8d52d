//! Relation inventories used by the gap resolution procedures.

use crate::conllu::universal;

/// Dependents of a predicate that count as its arguments when aligning
/// conjuncts: core arguments, clausal and nominal non-core dependents and
/// adverbial modifiers.
pub const ARGUMENT_RELATIONS: &[&str] = &[
    "nsubj",
    "obj",
    "iobj",
    "csubj",
    "ccomp",
    "xcomp",
    "obl",
    "advcl",
    "advmod",
    "dislocated",
    "vocative",
    "expl",
];

/// Core arguments. A copy node is linked to every core argument of its
/// source that no remnant replaces.
pub const CORE_RELATIONS: &[&str] = &["nsubj", "obj", "iobj", "csubj", "ccomp", "xcomp"];

/// Which remnant heads a gapped conjunct in a basic tree, most preferred
/// first. Relations not listed rank below all listed ones.
pub const PROMOTION_ORDER: &[&str] = &[
    "nsubj", "obj", "iobj", "csubj", "ccomp", "xcomp", "obl", "advmod", "advcl",
];

/// Dependents of a gapped conjunct that attach to its copy node but are not
/// remnants.
pub const FUNCTIONAL_RELATIONS: &[&str] = &["cc", "punct"];

pub const ORPHAN: &str = "orphan";
pub const DEP: &str = "dep";
pub const XCOMP: &str = "xcomp";

pub fn is_argument(rel: &str) -> bool {
    ARGUMENT_RELATIONS.contains(&universal(rel))
}

pub fn is_core(rel: &str) -> bool {
    CORE_RELATIONS.contains(&universal(rel))
}

pub fn is_functional(rel: &str) -> bool {
    FUNCTIONAL_RELATIONS.contains(&universal(rel))
}

/// Rank of `rel` in [`PROMOTION_ORDER`]; lower is preferred.
pub fn promotion_rank(rel: &str) -> usize {
    let rel = universal(rel);
    PROMOTION_ORDER
        .iter()
        .position(|&r| r == rel)
        .unwrap_or(PROMOTION_ORDER.len())
}
