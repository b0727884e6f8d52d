//! Conversions from enhanced graphs with copy nodes back to basic trees.

use std::collections::BTreeMap;

use crate::conllu::{join_label, NodeId, RelationLabel, Sentence};
use crate::enhancement::promoted;
use crate::error::Result;
use crate::relations::{is_functional, ORPHAN};

/// How a surface token hangs below a chain of copy nodes.
struct CopyPath {
    /// Surface head of the topmost copy.
    head: NodeId,
    /// Topmost copy.
    root: NodeId,
    /// Relations from `head` down to the token.
    path: Vec<String>,
}

/// The copy path of `node`, if all of its enhanced heads are copy nodes.
fn copy_path(sentence: &Sentence, node: NodeId) -> Option<CopyPath> {
    let token = sentence.token(node)?;
    if token.deps.is_empty() || token.deps.iter().any(|d| !d.head.is_empty_node()) {
        return None;
    }

    let mut path = token.deps[0].rel.parts().to_vec();
    let mut current = token.deps[0].head;
    let mut steps = 0;
    loop {
        let copy = sentence.token(current)?;
        let incoming = copy.deps.first()?;
        let mut parts = incoming.rel.parts().to_vec();
        parts.extend(path);
        path = parts;
        if !incoming.head.is_empty_node() {
            return Some(CopyPath {
                head: incoming.head,
                root: current,
                path,
            });
        }
        current = incoming.head;
        steps += 1;
        if steps > sentence.tokens().len() {
            return None;
        }
    }
}

fn copy_paths(sentence: &Sentence) -> Vec<(NodeId, CopyPath)> {
    sentence
        .surface_tokens()
        .filter_map(|t| copy_path(sentence, t.id).map(|p| (t.id, p)))
        .collect()
}

fn finish(mut sentence: Sentence) -> Sentence {
    sentence.remove_empty_nodes();
    sentence.clear_deps();
    sentence
}

/// Remove copy nodes and encode the paths through them as composite
/// relations on the basic tree.
///
/// Tokens with at least one enhanced head outside the copy nodes keep their
/// basic attachment. A sentence without empty nodes is returned unchanged.
pub fn enhanced_to_composite(sentence: &Sentence) -> Result<Sentence> {
    if !sentence.has_empty_nodes() {
        return Ok(sentence.clone());
    }

    let mut out = sentence.clone();
    for (node, copy_path) in copy_paths(sentence) {
        let label = join_label(&copy_path.path)?;
        let token = out.token_mut(node).expect("surface token");
        token.head = Some(copy_path.head);
        token.deprel = Some(label);
    }
    Ok(finish(out))
}

/// Remove copy nodes and attach each gapped conjunct in the basic tree by
/// promoting one remnant to its head.
///
/// The promoted remnant takes the conjunct's incoming relation. Other
/// remnants attach to it with `orphan`, coordinators and punctuation with
/// their own relation. A sentence without empty nodes is returned
/// unchanged.
pub fn enhanced_to_basic_orphan(sentence: &Sentence) -> Result<Sentence> {
    if !sentence.has_empty_nodes() {
        return Ok(sentence.clone());
    }

    let mut chains: BTreeMap<NodeId, Vec<(NodeId, CopyPath)>> = BTreeMap::new();
    for (node, copy_path) in copy_paths(sentence) {
        chains
            .entry(copy_path.root)
            .or_default()
            .push((node, copy_path));
    }

    let mut out = sentence.clone();
    for remnants in chains.values() {
        let last = |p: &CopyPath| p.path.last().cloned().unwrap_or_default();
        let head = promoted(
            remnants
                .iter()
                .filter(|(_, p)| !is_functional(p.path.last().map(String::as_str).unwrap_or("")))
                .map(|(node, p)| (*node, p.path.last().map(String::as_str).unwrap_or(""))),
        )
        .unwrap_or(remnants[0].0);
        let (_, head_path) = remnants
            .iter()
            .find(|(node, _)| *node == head)
            .expect("promoted remnant is in the chain");

        for (node, copy_path) in remnants {
            let (parent, rel) = if *node == head {
                (
                    head_path.head,
                    RelationLabel::atomic(head_path.path[0].clone()),
                )
            } else if is_functional(&last(copy_path)) {
                (head, RelationLabel::atomic(last(copy_path)))
            } else {
                (head, RelationLabel::atomic(ORPHAN))
            };
            let token = out.token_mut(*node).expect("surface token");
            token.head = Some(parent);
            token.deprel = Some(rel);
        }
    }
    Ok(finish(out))
}
