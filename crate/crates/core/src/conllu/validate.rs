use std::fmt;

use super::read::find_cycle;
use super::{NodeId, RelationLabel, Sentence};

/// A structural problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingHead(NodeId),
    UnknownHead { node: NodeId, head: NodeId },
    NoRoot,
    MultipleRoots(Vec<NodeId>),
    Cycle(NodeId),
    EmptyNodeInBasicTree(NodeId),
    UnresolvedDep { node: NodeId, head: NodeId },
    Disconnected(NodeId),
    CompositeInDeps { node: NodeId, rel: RelationLabel },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        use Violation::*;
        match self {
            MissingHead(node) => write!(f, "missing head for token {}", node),
            UnknownHead { node, head } => write!(f, "token {} has unknown head {}", node, head),
            NoRoot => f.write_str("no root"),
            MultipleRoots(_) => f.write_str("multiple roots"),
            Cycle(node) => write!(f, "cycle through token {}", node),
            EmptyNodeInBasicTree(node) => write!(f, "empty node {} in basic tree", node),
            UnresolvedDep { node, head } => {
                write!(f, "node {} has unresolved enhanced head {}", node, head)
            }
            Disconnected(node) => write!(f, "disconnected node {}", node),
            CompositeInDeps { node, rel } => {
                write!(
                    f,
                    "composite relation {} in enhanced graph of node {}",
                    rel, node
                )
            }
        }
    }
}

/// Check the basic tree and, if present, the enhanced graph of a sentence.
///
/// A sentence without any enhanced dependencies is treated as having no
/// enhanced graph. Composite labels are legal in the basic tree only.
pub fn validate(sentence: &Sentence) -> Vec<Violation> {
    let mut violations = Vec::new();
    let n = sentence.len();

    let mut roots = Vec::new();
    let mut heads_ok = true;
    for token in sentence.surface_tokens() {
        match token.head {
            None => {
                violations.push(Violation::MissingHead(token.id));
                heads_ok = false;
            }
            Some(head) if head.is_root() => roots.push(token.id),
            Some(head) if head.is_empty_node() || head.major() > n => {
                violations.push(Violation::UnknownHead {
                    node: token.id,
                    head,
                });
                heads_ok = false;
            }
            Some(_) => {}
        }
    }

    for token in sentence.empty_nodes() {
        if token.head.is_some() || token.deprel.is_some() {
            violations.push(Violation::EmptyNodeInBasicTree(token.id));
        }
    }

    match roots.len() {
        0 if heads_ok => violations.push(Violation::NoRoot),
        0 | 1 => {}
        _ => violations.push(Violation::MultipleRoots(roots)),
    }

    if let Some(node) = find_cycle(sentence) {
        violations.push(Violation::Cycle(node));
    }

    if sentence.has_enhanced_graph() {
        validate_enhanced(sentence, &mut violations);
    }

    violations
}

fn validate_enhanced(sentence: &Sentence, violations: &mut Vec<Violation>) {
    for token in sentence.tokens() {
        for dep in &token.deps {
            if !sentence.contains(dep.head) {
                violations.push(Violation::UnresolvedDep {
                    node: token.id,
                    head: dep.head,
                });
            }
            if dep.rel.is_composite() {
                violations.push(Violation::CompositeInDeps {
                    node: token.id,
                    rel: dep.rel.clone(),
                });
            }
        }
    }

    let reachable = sentence.enhanced_graph().reachable_from_root();
    for token in sentence.tokens() {
        let required = token.is_empty_node() || !token.is_punct();
        if required && !reachable.contains(&token.id) {
            violations.push(Violation::Disconnected(token.id));
        }
    }
}
