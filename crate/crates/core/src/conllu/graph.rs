use std::collections::{BTreeMap, BTreeSet};

use super::{Dep, NodeId, RelationLabel, Sentence};

/// Adjacency index over the basic tree of a sentence.
///
/// Only surface tokens take part in the basic tree. Tokens whose head is
/// unset have no parent.
#[derive(Clone, Debug)]
pub struct BasicTree {
    heads: Vec<Option<NodeId>>,
    deprels: Vec<Option<RelationLabel>>,
    children: Vec<Vec<NodeId>>,
}

impl BasicTree {
    pub(crate) fn new(sentence: &Sentence) -> Self {
        let n = sentence.len();
        let mut heads = vec![None; n + 1];
        let mut deprels = vec![None; n + 1];
        let mut children = vec![Vec::new(); n + 1];

        for token in sentence.surface_tokens() {
            let idx = token.id.major();
            heads[idx] = token.head;
            deprels[idx] = token.deprel.clone();
            if let Some(head) = token.head {
                if head.major() <= n && !head.is_empty_node() {
                    children[head.major()].push(token.id);
                }
            }
        }

        BasicTree {
            heads,
            deprels,
            children,
        }
    }

    /// Number of surface tokens.
    pub fn len(&self) -> usize {
        self.heads.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn head(&self, node: NodeId) -> Option<NodeId> {
        self.heads.get(node.major()).copied().flatten()
    }

    pub fn deprel(&self, node: NodeId) -> Option<&RelationLabel> {
        self.deprels.get(node.major()).and_then(Option::as_ref)
    }

    /// Dependents of `node` in surface order. `NodeId::ROOT` gives the
    /// tokens attached to the root.
    pub fn children(&self, node: NodeId) -> &[NodeId] {
        self.children
            .get(node.major())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Dependents of `node` attached with the atomic relation `rel`.
    pub fn children_with<'a>(
        &'a self,
        node: NodeId,
        rel: &'a str,
    ) -> impl Iterator<Item = NodeId> + 'a {
        self.children(node)
            .iter()
            .copied()
            .filter(move |&c| self.deprel(c).map(|l| l.is(rel)).unwrap_or(false))
    }

    /// Yield of the subtree rooted at `node`, sorted.
    pub fn subtree(&self, node: NodeId) -> Vec<NodeId> {
        self.subtree_where(node, |_| true)
    }

    /// Yield of the subtree rooted at `node`, pruning every descendant for
    /// which `keep` is false together with its own subtree.
    pub fn subtree_where<F>(&self, node: NodeId, keep: F) -> Vec<NodeId>
    where
        F: Fn(NodeId) -> bool,
    {
        let mut nodes = vec![node];
        let mut agenda = vec![node];
        let mut seen = BTreeSet::new();
        seen.insert(node);

        while let Some(current) = agenda.pop() {
            for &child in self.children(current) {
                if keep(child) && seen.insert(child) {
                    nodes.push(child);
                    agenda.push(child);
                }
            }
        }

        nodes.sort();
        nodes
    }
}

/// Adjacency index over the enhanced graph of a sentence.
#[derive(Clone, Debug, Default)]
pub struct EnhancedGraph {
    outgoing: BTreeMap<NodeId, Vec<(NodeId, RelationLabel)>>,
    incoming: BTreeMap<NodeId, Vec<Dep>>,
}

impl EnhancedGraph {
    pub(crate) fn new(sentence: &Sentence) -> Self {
        let mut graph = EnhancedGraph::default();
        for token in sentence.tokens() {
            for dep in &token.deps {
                graph
                    .outgoing
                    .entry(dep.head)
                    .or_default()
                    .push((token.id, dep.rel.clone()));
                graph
                    .incoming
                    .entry(token.id)
                    .or_default()
                    .push(dep.clone());
            }
        }
        graph
    }

    /// Dependents of `head` with their relations, in node order.
    pub fn dependents(&self, head: NodeId) -> &[(NodeId, RelationLabel)] {
        self.outgoing.get(&head).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Incoming edges of `node`.
    pub fn heads(&self, node: NodeId) -> &[Dep] {
        self.incoming.get(&node).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All edges as `(head, dependent, relation)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, &RelationLabel)> {
        self.outgoing
            .iter()
            .flat_map(|(&head, deps)| deps.iter().map(move |(dep, rel)| (head, *dep, rel)))
    }

    /// Nodes reachable from the root pseudo-node, including the root.
    pub fn reachable_from_root(&self) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::new();
        let mut agenda = vec![NodeId::ROOT];
        seen.insert(NodeId::ROOT);
        while let Some(node) = agenda.pop() {
            for (dep, _) in self.dependents(node) {
                if seen.insert(*dep) {
                    agenda.push(*dep);
                }
            }
        }
        seen
    }
}
