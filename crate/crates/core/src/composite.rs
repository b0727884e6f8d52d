//! Gap resolution for trees whose gapped conjuncts are encoded with
//! composite relations such as `conj>obj`.
//!
//! Each composite label is split into its atomic parts and a copy node is
//! inserted at every splitting point. Copies are found by walking the same
//! relation path through the full conjunct.

use std::collections::{BTreeMap, HashMap};

use crate::conllu::{BasicTree, NodeId, RelationLabel, Sentence};
use crate::enhancement::{
    apply, lifted, promoted, shared_core_edges, Attachment, Diagnostic, Enhancement,
};
use crate::relations::{is_functional, DEP};

/// Composite dependents of one head that belong to the same gapped
/// conjunct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjunctGroup {
    pub head: NodeId,
    /// First atomic relation shared by all dependents.
    pub relation: String,
    /// Dependents in surface order with their relation paths.
    pub dependents: Vec<(NodeId, Vec<String>)>,
}

impl ConjunctGroup {
    /// Distinct non-empty proper prefixes of the dependents' paths, each
    /// listed after its own prefixes.
    pub fn prefixes(&self) -> Vec<Vec<String>> {
        let mut prefixes: Vec<Vec<String>> = Vec::new();
        for (_, path) in &self.dependents {
            for k in 1..path.len() {
                let prefix = &path[..k];
                if !prefixes.iter().any(|p| p == prefix) {
                    prefixes.push(prefix.to_vec());
                }
            }
        }
        prefixes
    }

    /// The dependent that heads this conjunct in a basic tree.
    pub fn promoted_remnant(&self) -> NodeId {
        let remnants = self
            .dependents
            .iter()
            .filter(|(_, path)| !is_functional(last(path)))
            .map(|(node, path)| (*node, last(path)));
        promoted(remnants).unwrap_or(self.dependents[0].0)
    }

    fn has_content(&self) -> bool {
        self.dependents
            .iter()
            .any(|(_, path)| !is_functional(last(path)))
    }
}

fn last(path: &[String]) -> &str {
    path.last().map(String::as_str).unwrap_or("")
}

/// Split the surface-ordered composite dependents of `head` into conjuncts.
///
/// A dependent starts a new group when its final relation already occurs in
/// the current group, when its first relation differs from the group's, or
/// when it is a `conj>cc` following a group that already has a remnant.
pub fn segment_conjuncts(
    head: NodeId,
    composite_deps: &[(NodeId, RelationLabel)],
) -> Vec<ConjunctGroup> {
    let mut groups: Vec<ConjunctGroup> = Vec::new();
    for (node, label) in composite_deps {
        let path: Vec<String> = label.parts().to_vec();
        let boundary = match groups.last() {
            None => true,
            Some(group) => {
                group.relation != path[0]
                    || group.dependents.iter().any(|(_, p)| last(p) == last(&path))
                    || (path.len() == 2 && label.last() == "cc" && group.has_content())
            }
        };
        if boundary {
            groups.push(ConjunctGroup {
                head,
                relation: path[0].clone(),
                dependents: Vec::new(),
            });
        }
        groups
            .last_mut()
            .expect("a group exists")
            .dependents
            .push((*node, path));
    }
    groups
}

/// Composite dependents grouped by head, each list in surface order.
fn composite_dependents(sentence: &Sentence) -> BTreeMap<NodeId, Vec<(NodeId, RelationLabel)>> {
    let mut by_head: BTreeMap<NodeId, Vec<(NodeId, RelationLabel)>> = BTreeMap::new();
    for token in sentence.surface_tokens() {
        if let (Some(head), Some(rel)) = (token.head, &token.deprel) {
            if rel.is_composite() {
                by_head
                    .entry(head)
                    .or_default()
                    .push((token.id, rel.clone()));
            }
        }
    }
    by_head
}

fn walk(tree: &BasicTree, from: NodeId, rel: &str) -> Option<NodeId> {
    tree.children(from).iter().copied().find(|&child| {
        tree.deprel(child)
            .map(|r| !r.is_composite() && r.first() == rel)
            .unwrap_or(false)
    })
}

struct GroupResolution {
    copies: Vec<(NodeId, NodeId)>,
    attachments: Vec<Attachment>,
    relocated: Vec<NodeId>,
    diagnostics: Vec<Diagnostic>,
}

fn resolve_group(sentence: &Sentence, tree: &BasicTree, group: &ConjunctGroup) -> GroupResolution {
    let anchor = group.promoted_remnant().major();
    let first_idx = sentence.next_empty_index(anchor);
    let mut diagnostics = Vec::new();

    // Copy node of every walkable prefix.
    let mut copy_at: HashMap<Vec<String>, NodeId> = HashMap::new();
    let mut source_at: HashMap<Vec<String>, NodeId> = HashMap::new();
    let mut copies = Vec::new();
    let mut attachments = Vec::new();
    for prefix in group.prefixes() {
        let source = if prefix.len() == 1 {
            Some(group.head)
        } else {
            source_at
                .get(&prefix[..prefix.len() - 1])
                .and_then(|&parent| walk(tree, parent, last(&prefix)))
        };
        let Some(source) = source else {
            if prefix.len() > 1 && source_at.contains_key(&prefix[..prefix.len() - 1]) {
                diagnostics.push(Diagnostic {
                    node: group.dependents[0].0,
                    message: format!(
                        "relation path {} not found in the full conjunct",
                        prefix.join(">")
                    ),
                });
            }
            continue;
        };

        let copy = NodeId::empty(anchor, first_idx + copies.len());
        let parent = if prefix.len() == 1 {
            group.head
        } else {
            copy_at[&prefix[..prefix.len() - 1]]
        };
        attachments.push(Attachment::new(
            parent,
            copy,
            RelationLabel::atomic(last(&prefix)),
        ));
        copies.push((source, copy));
        copy_at.insert(prefix.clone(), copy);
        source_at.insert(prefix, source);
    }

    let mut relocated = Vec::new();
    for (node, path) in &group.dependents {
        let parent_path = &path[..path.len() - 1];
        let attachment = match copy_at.get(parent_path) {
            Some(&copy) => Attachment::new(copy, *node, RelationLabel::atomic(last(path))),
            None => {
                let deepest = (1..parent_path.len())
                    .rev()
                    .find_map(|k| copy_at.get(&parent_path[..k]))
                    .copied()
                    .unwrap_or(copies[0].1);
                Attachment::new(deepest, *node, RelationLabel::atomic(DEP))
            }
        };
        attachments.push(attachment);
        relocated.push(*node);
    }

    let shared = shared_core_edges(tree, &copies, &attachments);
    attachments.extend(shared);

    GroupResolution {
        copies,
        attachments,
        relocated,
        diagnostics,
    }
}

/// Split every composite relation of `sentence` into atomic edges through
/// copy nodes. The rest of the basic tree is lifted into the enhanced
/// graph unchanged. Existing empty nodes are discarded.
pub fn enhance_sentence_composite(sentence: &Sentence) -> Enhancement {
    let tree = sentence.basic_tree();
    let mut work = lifted(sentence);
    let mut diagnostics = Vec::new();
    let mut gaps_found = 0;
    let mut gaps_resolved = 0;
    let mut copies_inserted = 0;

    for (head, deps) in composite_dependents(sentence) {
        for group in segment_conjuncts(head, &deps) {
            gaps_found += 1;
            let resolution = resolve_group(&work, &tree, &group);
            if resolution.diagnostics.is_empty() {
                gaps_resolved += 1;
            }
            apply(
                &mut work,
                &resolution.copies,
                &resolution.attachments,
                &resolution.relocated,
            );
            copies_inserted += resolution.copies.len();
            diagnostics.extend(resolution.diagnostics);
        }
    }

    Enhancement {
        sentence: work,
        diagnostics,
        gaps_found,
        gaps_resolved,
        copies_inserted,
    }
}

#[cfg(test)]
mod tests {
    use super::{enhance_sentence_composite, segment_conjuncts};
    use crate::conllu::{
        parse_document, serialize_sentence, validate, NodeId, RelationLabel, Sentence,
    };

    fn sentence(rows: &[&str]) -> Sentence {
        let text: String = rows
            .iter()
            .map(|r| format!("{}\n", r.replace(' ', "\t")))
            .collect();
        parse_document(&text).unwrap().sentences.remove(0)
    }

    fn deps(labels: &[(usize, &str)]) -> Vec<(NodeId, RelationLabel)> {
        labels
            .iter()
            .map(|&(i, l)| (NodeId::surface(i), l.parse().unwrap()))
            .collect()
    }

    fn deps_column(s: &Sentence) -> Vec<String> {
        serialize_sentence(s)
            .lines()
            .map(|l| {
                let cols: Vec<&str> = l.split('\t').collect();
                format!("{} {}", cols[0], cols[8])
            })
            .collect()
    }

    #[test]
    fn one_group() {
        let groups = segment_conjuncts(
            NodeId::surface(2),
            &deps(&[(4, "conj>cc"), (5, "conj>nsubj"), (6, "conj>obj")]),
        );
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].relation, "conj");
        assert_eq!(groups[0].promoted_remnant(), NodeId::surface(5));
    }

    #[test]
    fn repeated_relation_starts_group() {
        let groups = segment_conjuncts(
            NodeId::surface(2),
            &deps(&[
                (4, "conj>nsubj"),
                (5, "conj>obj"),
                (7, "conj>nsubj"),
                (8, "conj>obj"),
            ]),
        );
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[1].dependents[0].0, NodeId::surface(7));
    }

    #[test]
    fn coordinator_starts_group() {
        let groups = segment_conjuncts(
            NodeId::surface(2),
            &deps(&[
                (4, "conj>punct"),
                (5, "conj>nsubj"),
                (6, "conj>obj"),
                (7, "conj>cc"),
                (8, "conj>obl"),
            ]),
        );
        assert_eq!(groups.len(), 2);
        let groups = segment_conjuncts(
            NodeId::surface(2),
            &deps(&[(4, "conj>punct"), (5, "conj>cc"), (6, "conj>obj")]),
        );
        assert_eq!(groups.len(), 1);
    }

    #[test]
    fn single_dependent() {
        let groups = segment_conjuncts(NodeId::surface(1), &deps(&[(3, "conj>nsubj")]));
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].prefixes(), vec![vec!["conj".to_string()]]);
    }

    #[test]
    fn splits_labels() {
        let s = sentence(&[
            "1 John _ PROPN _ _ 2 nsubj _ _",
            "2 bought _ VERB _ _ 0 root _ _",
            "3 books _ NOUN _ _ 2 obj _ _",
            "4 and _ CCONJ _ _ 2 conj>cc _ _",
            "5 Mary _ PROPN _ _ 2 conj>nsubj _ _",
            "6 flowers _ NOUN _ _ 2 conj>obj _ _",
        ]);
        let result = enhance_sentence_composite(&s);
        assert_eq!(result.copies_inserted, 1);
        assert_eq!(
            deps_column(&result.sentence),
            vec![
                "1 2:nsubj",
                "2 0:root",
                "3 2:obj",
                "4 5.1:cc",
                "5 5.1:nsubj",
                "5.1 2:conj",
                "6 5.1:obj"
            ]
        );
        assert_eq!(validate(&result.sentence), vec![]);
    }

    #[test]
    fn verb_cluster_chain() {
        let s = sentence(&[
            "1 Mary _ PROPN _ _ 2 nsubj _ _",
            "2 wants _ VERB _ _ 0 root _ _",
            "3 to _ PART _ _ 4 mark _ _",
            "4 write _ VERB _ _ 2 xcomp _ _",
            "5 a _ DET _ _ 6 det _ _",
            "6 play _ NOUN _ _ 4 obj _ _",
            "7 and _ CCONJ _ _ 2 conj>cc _ _",
            "8 Sue _ PROPN _ _ 2 conj>nsubj _ _",
            "9 a _ DET _ _ 10 det _ _",
            "10 book _ NOUN _ _ 2 conj>xcomp>obj _ _",
        ]);
        let result = enhance_sentence_composite(&s);
        assert!(result.diagnostics.is_empty());
        let copies: Vec<(String, String)> = result
            .sentence
            .empty_nodes()
            .map(|t| (t.id.to_string(), t.form.clone()))
            .collect();
        assert_eq!(
            copies,
            vec![
                ("8.1".into(), "wants".into()),
                ("8.2".into(), "write".into())
            ]
        );
        assert!(deps_column(&result.sentence).contains(&"10 8.2:obj".to_string()));
        assert!(deps_column(&result.sentence).contains(&"8.2 8.1:xcomp".to_string()));
    }

    #[test]
    fn unwalkable_path() {
        let s = sentence(&[
            "1 John _ PROPN _ _ 2 nsubj _ _",
            "2 slept _ VERB _ _ 0 root _ _",
            "3 Mary _ PROPN _ _ 2 conj>nsubj _ _",
            "4 book _ NOUN _ _ 2 conj>xcomp>obj _ _",
        ]);
        let result = enhance_sentence_composite(&s);
        assert_eq!(result.diagnostics.len(), 1);
        assert_eq!(result.gaps_resolved, 0);
        assert!(deps_column(&result.sentence).contains(&"4 3.1:dep".to_string()));
        assert_eq!(validate(&result.sentence), vec![]);
    }

    #[test]
    fn no_composite_labels() {
        let s = sentence(&["1 Hi _ INTJ _ _ 0 root _ _"]);
        let result = enhance_sentence_composite(&s);
        assert_eq!(result.gaps_found, 0);
        assert_eq!(deps_column(&result.sentence), vec!["1 0:root"]);
    }
}
