//! Pieces shared by the two gap resolution procedures.

use std::fmt;

use crate::conllu::{BasicTree, Dep, NodeId, RelationLabel, Sentence, Token};
use crate::relations::{is_core, promotion_rank};

/// An enhanced edge produced while resolving a gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub head: NodeId,
    pub dep: NodeId,
    pub rel: RelationLabel,
}

impl Attachment {
    pub fn new(head: NodeId, dep: NodeId, rel: RelationLabel) -> Self {
        Attachment { head, dep, rel }
    }
}

/// A gap that could not be (fully) resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub node: NodeId,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "node {}: {}", self.node, self.message)
    }
}

/// Result of enhancing one sentence.
#[derive(Clone, Debug)]
pub struct Enhancement {
    pub sentence: Sentence,
    pub diagnostics: Vec<Diagnostic>,
    pub gaps_found: usize,
    pub gaps_resolved: usize,
    pub copies_inserted: usize,
}

/// A copy of the sentence without empty nodes whose enhanced graph is the
/// basic tree.
pub(crate) fn lifted(sentence: &Sentence) -> Sentence {
    let mut work = sentence.clone();
    work.remove_empty_nodes();
    work.lift_basic_to_deps();
    work
}

/// Edges from copy nodes to the core arguments of their sources that are
/// not already covered by an edge with the same relation.
pub(crate) fn shared_core_edges(
    tree: &BasicTree,
    copies: &[(NodeId, NodeId)],
    attachments: &[Attachment],
) -> Vec<Attachment> {
    let mut shared = Vec::new();
    for &(source, copy) in copies {
        for &child in tree.children(source) {
            let rel = match tree.deprel(child) {
                Some(rel) if !rel.is_composite() && is_core(rel.first()) => rel,
                _ => continue,
            };
            let covered = attachments.iter().any(|a| a.head == copy && &a.rel == rel);
            if !covered {
                shared.push(Attachment::new(copy, child, rel.clone()));
            }
        }
    }
    shared
}

/// Insert copy nodes and edges into `sentence`. Nodes in `relocated` lose
/// their previous enhanced heads first.
pub(crate) fn apply(
    sentence: &mut Sentence,
    copies: &[(NodeId, NodeId)],
    attachments: &[Attachment],
    relocated: &[NodeId],
) {
    for &node in relocated {
        if let Some(token) = sentence.token_mut(node) {
            token.deps.clear();
        }
    }

    for &(source, copy) in copies {
        let token = Token::copy_of(sentence.token(source).expect("copy source exists"), copy);
        sentence
            .insert_empty_node(token)
            .expect("copy identifiers are fresh");
    }

    for attachment in attachments {
        let token = sentence
            .token_mut(attachment.dep)
            .expect("attachment target exists");
        let dep = Dep::new(attachment.head, attachment.rel.clone());
        if !token.deps.contains(&dep) {
            token.deps.push(dep);
        }
    }
}

/// The remnant that heads a gapped conjunct in a basic tree: best
/// [`promotion_rank`], leftmost on ties.
pub(crate) fn promoted<'a, I>(remnants: I) -> Option<NodeId>
where
    I: IntoIterator<Item = (NodeId, &'a str)>,
{
    remnants
        .into_iter()
        .min_by_key(|&(node, rel)| (promotion_rank(rel), node))
        .map(|(node, _)| node)
}
