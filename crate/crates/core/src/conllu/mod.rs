//! CoNLL-U documents with basic trees, enhanced graphs and empty nodes.
//!
//! The enhanced graph is stored the way CoNLL-U stores it: as a list of
//! `(head, relation)` pairs on every node. [`EnhancedGraph`] and
//! [`BasicTree`] build adjacency indices on demand.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

mod graph;
pub use self::graph::{BasicTree, EnhancedGraph};

mod label;
pub use self::label::{join_label, split_label, universal, RelationLabel, PATH_SEPARATOR};

mod read;
pub use self::read::parse_document;

mod validate;
pub use self::validate::{validate, Violation};

mod write;
pub use self::write::{serialize_document, serialize_sentence};

/// Placeholder for unset columns.
pub const UNSET: &str = "_";

/// MISC attribute that links a copy node to the node it duplicates.
pub const COPY_OF: &str = "CopyOf";

/// Identifier of a node: `i` for surface tokens, `i.j` for empty nodes.
///
/// The root pseudo-node is `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    major: usize,
    minor: usize,
}

impl NodeId {
    pub const ROOT: NodeId = NodeId { major: 0, minor: 0 };

    pub fn surface(idx: usize) -> Self {
        NodeId {
            major: idx,
            minor: 0,
        }
    }

    /// Empty node `anchor.idx`, placed after surface token `anchor`.
    pub fn empty(anchor: usize, idx: usize) -> Self {
        assert!(idx > 0, "empty node index must be positive");
        NodeId {
            major: anchor,
            minor: idx,
        }
    }

    pub fn major(self) -> usize {
        self.major
    }

    pub fn minor(self) -> usize {
        self.minor
    }

    pub fn is_root(self) -> bool {
        self == Self::ROOT
    }

    pub fn is_empty_node(self) -> bool {
        self.minor != 0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.minor == 0 {
            write!(f, "{}", self.major)
        } else {
            write!(f, "{}.{}", self.major, self.minor)
        }
    }
}

impl FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |part: &str| -> Result<usize> {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Format(format!("invalid node id `{}`", s)));
            }
            part.parse()
                .map_err(|_| Error::Format(format!("invalid node id `{}`", s)))
        };

        match s.split_once('.') {
            None => Ok(NodeId::surface(parse(s)?)),
            Some((major, minor)) => {
                let minor = parse(minor)?;
                if minor == 0 {
                    return Err(Error::Format(format!("invalid empty node id `{}`", s)));
                }
                Ok(NodeId::empty(parse(major)?, minor))
            }
        }
    }
}

/// An enhanced dependency: `head` governs the node carrying this value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dep {
    pub head: NodeId,
    pub rel: RelationLabel,
}

impl Dep {
    pub fn new(head: NodeId, rel: RelationLabel) -> Self {
        Dep { head, rel }
    }
}

/// One token or empty-node line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: NodeId,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    /// Basic-tree head; `None` when the column is unset.
    pub head: Option<NodeId>,
    /// Basic-tree relation; may be composite.
    pub deprel: Option<RelationLabel>,
    /// Enhanced graph column.
    pub deps: Vec<Dep>,
    pub misc: String,
}

impl Token {
    /// A token with all annotation columns unset.
    pub fn new(id: NodeId, form: impl Into<String>) -> Self {
        Token {
            id,
            form: form.into(),
            lemma: UNSET.into(),
            upos: UNSET.into(),
            xpos: UNSET.into(),
            feats: UNSET.into(),
            head: None,
            deprel: None,
            deps: Vec::new(),
            misc: UNSET.into(),
        }
    }

    /// An empty node duplicating `source`, marked with `CopyOf=<source>`.
    pub fn copy_of(source: &Token, id: NodeId) -> Self {
        Token {
            id,
            form: source.form.clone(),
            lemma: source.lemma.clone(),
            upos: source.upos.clone(),
            xpos: source.xpos.clone(),
            feats: source.feats.clone(),
            head: None,
            deprel: None,
            deps: Vec::new(),
            misc: format!("{}={}", COPY_OF, source.id),
        }
    }

    pub fn is_empty_node(&self) -> bool {
        self.id.is_empty_node()
    }

    pub fn is_punct(&self) -> bool {
        self.upos == "PUNCT"
    }

    /// Value of a `key=value` attribute in MISC.
    pub fn misc_value(&self, key: &str) -> Option<&str> {
        if self.misc == UNSET {
            return None;
        }
        self.misc.split('|').find_map(|attr| {
            let (k, v) = attr.split_once('=')?;
            (k == key).then_some(v)
        })
    }

    /// Node this token was copied from, according to its `CopyOf` marker.
    pub fn copy_source(&self) -> Option<NodeId> {
        self.misc_value(COPY_OF)?.parse().ok()
    }
}

/// A multiword token range line (`i-j`), kept verbatim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiwordToken {
    /// First surface token covered by the range.
    pub first: usize,
    pub line: String,
}

/// A sentence: comments, surface tokens and empty nodes.
///
/// Tokens are kept sorted by [`NodeId`], which places every empty node
/// `i.j` directly after surface token `i`, ordered by `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    comments: Vec<String>,
    tokens: Vec<Token>,
    multiword: Vec<MultiwordToken>,
}

impl Sentence {
    pub fn new() -> Self {
        Sentence::default()
    }

    /// Comment lines, including the leading `#`.
    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn comments_mut(&mut self) -> &mut Vec<String> {
        &mut self.comments
    }

    pub fn multiword_tokens(&self) -> &[MultiwordToken] {
        &self.multiword
    }

    pub fn push_multiword(&mut self, mwt: MultiwordToken) {
        self.multiword.push(mwt);
    }

    /// All nodes in file order.
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Mutable access to all nodes. Identifiers must not be changed.
    pub fn tokens_mut(&mut self) -> impl Iterator<Item = &mut Token> {
        self.tokens.iter_mut()
    }

    pub fn surface_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| !t.is_empty_node())
    }

    pub fn empty_nodes(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_empty_node())
    }

    /// Number of surface tokens.
    pub fn len(&self) -> usize {
        self.surface_tokens().count()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn has_empty_nodes(&self) -> bool {
        self.empty_nodes().next().is_some()
    }

    /// Append a surface token. Its identifier must be the next surface index.
    pub fn push(&mut self, token: Token) {
        assert_eq!(
            token.id,
            NodeId::surface(self.len() + 1),
            "surface tokens must be pushed in order"
        );
        self.tokens.push(token);
    }

    fn position(&self, id: NodeId) -> std::result::Result<usize, usize> {
        self.tokens.binary_search_by(|t| t.id.cmp(&id))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.is_root() || self.position(id).is_ok()
    }

    pub fn token(&self, id: NodeId) -> Option<&Token> {
        self.position(id).ok().map(|idx| &self.tokens[idx])
    }

    pub fn token_mut(&mut self, id: NodeId) -> Option<&mut Token> {
        self.position(id).ok().map(move |idx| &mut self.tokens[idx])
    }

    /// Insert an empty node at its canonical position.
    pub fn insert_empty_node(&mut self, token: Token) -> Result<()> {
        let id = token.id;
        if !id.is_empty_node() {
            return Err(Error::Format(format!("{} is not an empty node id", id)));
        }
        if id.major() > self.len() {
            return Err(Error::Format(format!(
                "empty node {} anchored after the last token",
                id
            )));
        }
        match self.position(id) {
            Ok(_) => Err(Error::Format(format!("duplicate node {}", id))),
            Err(idx) => {
                self.tokens.insert(idx, token);
                Ok(())
            }
        }
    }

    pub fn remove_empty_node(&mut self, id: NodeId) -> Option<Token> {
        if !id.is_empty_node() {
            return None;
        }
        let idx = self.position(id).ok()?;
        Some(self.tokens.remove(idx))
    }

    /// Remove all empty nodes and every enhanced edge that touches them.
    pub fn remove_empty_nodes(&mut self) {
        self.tokens.retain(|t| !t.is_empty_node());
        for token in &mut self.tokens {
            token.deps.retain(|dep| !dep.head.is_empty_node());
        }
    }

    /// Smallest unused minor index for empty nodes anchored at `anchor`.
    pub fn next_empty_index(&self, anchor: usize) -> usize {
        self.empty_nodes()
            .filter(|t| t.id.major() == anchor)
            .map(|t| t.id.minor())
            .max()
            .unwrap_or(0)
            + 1
    }

    /// Returns `true` if any token has enhanced dependencies.
    pub fn has_enhanced_graph(&self) -> bool {
        self.tokens.iter().any(|t| !t.deps.is_empty())
    }

    /// Replace the enhanced graph by the basic tree.
    pub fn lift_basic_to_deps(&mut self) {
        for token in &mut self.tokens {
            token.deps = match (token.head, &token.deprel) {
                (Some(head), Some(rel)) => vec![Dep::new(head, rel.clone())],
                _ => Vec::new(),
            };
        }
    }

    /// Remove all enhanced dependencies.
    pub fn clear_deps(&mut self) {
        for token in &mut self.tokens {
            token.deps.clear();
        }
    }

    pub fn basic_tree(&self) -> BasicTree {
        BasicTree::new(self)
    }

    pub fn enhanced_graph(&self) -> EnhancedGraph {
        EnhancedGraph::new(self)
    }
}

/// A sequence of sentences.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn new(sentences: Vec<Sentence>) -> Self {
        Document { sentences }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

impl FromStr for Document {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_document(s)
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(&serialize_document(self))
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::{NodeId, Sentence, Token};

    fn sentence(n: usize) -> Sentence {
        let mut s = Sentence::new();
        for i in 1..=n {
            s.push(Token::new(NodeId::surface(i), format!("w{}", i)));
        }
        s
    }

    fn ordered(s: &Sentence) -> bool {
        s.tokens().windows(2).all(|w| w[0].id < w[1].id)
    }

    #[test]
    fn node_id_text() {
        assert_eq!("5".parse::<NodeId>().unwrap(), NodeId::surface(5));
        assert_eq!("6.1".parse::<NodeId>().unwrap(), NodeId::empty(6, 1));
        assert_eq!(NodeId::empty(6, 12).to_string(), "6.12");
        assert!("6.0".parse::<NodeId>().is_err());
        assert!("x".parse::<NodeId>().is_err());
        assert!("1-2".parse::<NodeId>().is_err());
        assert!("-1".parse::<NodeId>().is_err());
    }

    #[test]
    fn node_id_order() {
        assert!(NodeId::surface(5) < NodeId::empty(5, 1));
        assert!(NodeId::empty(5, 1) < NodeId::empty(5, 2));
        assert!(NodeId::empty(5, 9) < NodeId::surface(6));
        assert!(NodeId::ROOT < NodeId::empty(0, 1));
    }

    #[test]
    fn empty_node_follows_anchor() {
        let mut s = sentence(6);
        s.insert_empty_node(Token::new(NodeId::empty(5, 1), "x"))
            .unwrap();
        let ids: Vec<String> = s.tokens().iter().map(|t| t.id.to_string()).collect();
        assert_eq!(ids, ["1", "2", "3", "4", "5", "5.1", "6"]);
        assert!(s
            .insert_empty_node(Token::new(NodeId::empty(5, 1), "y"))
            .is_err());
        assert!(s
            .insert_empty_node(Token::new(NodeId::empty(7, 1), "y"))
            .is_err());
        assert_eq!(s.next_empty_index(5), 2);
        assert_eq!(s.next_empty_index(2), 1);
    }

    #[test]
    fn misc_lookup() {
        let mut t = Token::new(NodeId::empty(3, 1), "bought");
        t.misc = "SpaceAfter=No|CopyOf=2".into();
        assert_eq!(t.copy_source(), Some(NodeId::surface(2)));
        assert_eq!(t.misc_value("SpaceAfter"), Some("No"));
        t.misc = "_".into();
        assert_eq!(t.copy_source(), None);
    }

    proptest! {
        #[test]
        fn ordering_survives_edits(ops in prop::collection::vec((any::<bool>(), 0usize..6, 1usize..4), 0..40)) {
            let mut s = sentence(5);
            for (insert, anchor, minor) in ops {
                let id = NodeId::empty(anchor, minor);
                if insert {
                    let _ = s.insert_empty_node(Token::new(id, "e"));
                } else {
                    s.remove_empty_node(id);
                }
                prop_assert!(ordered(&s));
                prop_assert_eq!(s.len(), 5);
            }
        }
    }
}
