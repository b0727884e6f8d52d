//! Evaluation of gap resolution: precision and recall over copy nodes and
//! their dependents, attachment of remnant heads, and corpus statistics.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write};

use crate::conllu::{Document, NodeId, Sentence, COPY_OF};
use crate::error::{Error, Result};
use crate::relations::ORPHAN;

/// Identity of a node that is comparable across two analyses of the same
/// sentence. Copy nodes are identified by what they copy, not by their id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum NodeKey {
    Surface(NodeId),
    Copy {
        source: String,
        depth: usize,
        occurrence: usize,
    },
}

type Edge = (NodeKey, NodeKey, String);

fn node_keys(sentence: &Sentence) -> HashMap<NodeId, NodeKey> {
    let mut keys = HashMap::new();
    let mut seen: HashMap<(String, usize), usize> = HashMap::new();
    for token in sentence.tokens() {
        let key = if token.is_empty_node() {
            let source = token
                .misc_value(COPY_OF)
                .map(str::to_owned)
                .unwrap_or_else(|| token.form.clone());
            let depth = copy_depth(sentence, token.id);
            let occurrence = seen.entry((source.clone(), depth)).or_insert(0);
            let key = NodeKey::Copy {
                source,
                depth,
                occurrence: *occurrence,
            };
            *occurrence += 1;
            key
        } else {
            NodeKey::Surface(token.id)
        };
        keys.insert(token.id, key);
    }
    keys.insert(NodeId::ROOT, NodeKey::Surface(NodeId::ROOT));
    keys
}

/// Number of copy nodes above `node` along first enhanced heads.
fn copy_depth(sentence: &Sentence, node: NodeId) -> usize {
    let mut depth = 0;
    let mut current = node;
    while let Some(dep) = sentence.token(current).and_then(|t| t.deps.first()) {
        if !dep.head.is_empty_node() || depth > sentence.tokens().len() {
            break;
        }
        depth += 1;
        current = dep.head;
    }
    depth
}

/// Enhanced edges that touch a copy node, excluding punctuation and
/// coordinating conjunctions.
fn scored_edges(sentence: &Sentence) -> BTreeSet<Edge> {
    let keys = node_keys(sentence);
    let key = |id: NodeId| keys.get(&id).cloned().unwrap_or(NodeKey::Surface(id));
    let mut edges = BTreeSet::new();
    for token in sentence.tokens() {
        for dep in &token.deps {
            if !(token.is_empty_node() || dep.head.is_empty_node()) {
                continue;
            }
            if matches!(dep.rel.universal(), "punct" | "cc") {
                continue;
            }
            edges.insert((key(dep.head), key(token.id), dep.rel.to_string()));
        }
    }
    edges
}

fn check_alignment(system: &Document, gold: &Document) -> Result<()> {
    if system.sentences.len() != gold.sentences.len() {
        return Err(Error::Input(format!(
            "system has {} sentences, gold has {}",
            system.sentences.len(),
            gold.sentences.len()
        )));
    }
    for (idx, (s, g)) in system.sentences.iter().zip(&gold.sentences).enumerate() {
        let forms = |x: &Sentence| {
            x.surface_tokens()
                .map(|t| t.form.clone())
                .collect::<Vec<_>>()
        };
        if forms(s) != forms(g) {
            return Err(Error::Input(format!(
                "tokens of sentence {} differ between system and gold",
                idx + 1
            )));
        }
    }
    Ok(())
}

/// `100 * num / den`, or 100 when `den` is zero.
fn percentage(num: usize, den: usize) -> f64 {
    if den == 0 {
        100.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

/// Outcome for one sentence of [`score_enhanced`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SentenceScore {
    /// The gold analysis contains a copy node.
    pub gapped: bool,
    /// The system's scored edges equal the gold ones, labels included.
    pub correct: bool,
}

/// Scores over copy nodes and their dependents, in percent.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub up: f64,
    pub ur: f64,
    pub lp: f64,
    pub lr: f64,
    /// Over sentences that are gapped in gold.
    pub sentence_accuracy: f64,
    pub matched_unlabeled: usize,
    pub matched_labeled: usize,
    pub system_edges: usize,
    pub gold_edges: usize,
    pub gapped_sentences: usize,
    pub correct_sentences: usize,
    /// Set when the system has no scored edges; precision is reported as 100.
    pub precision_undefined: bool,
    /// Set when gold has no scored edges; recall is reported as 100.
    pub recall_undefined: bool,
    /// Set when gold has no gapped sentences; accuracy is reported as 100.
    pub accuracy_undefined: bool,
    pub sentences: Vec<SentenceScore>,
}

impl EvalReport {
    /// Machine-readable `key=value` lines.
    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for (key, value) in [
            ("UP", self.up),
            ("UR", self.ur),
            ("LP", self.lp),
            ("LR", self.lr),
            ("SAcc", self.sentence_accuracy),
        ] {
            writeln!(out, "{}={:.2}", key, value).unwrap();
        }
        for (key, value) in [
            ("matched_unlabeled", self.matched_unlabeled),
            ("matched_labeled", self.matched_labeled),
            ("system_edges", self.system_edges),
            ("gold_edges", self.gold_edges),
            ("gapped_sentences", self.gapped_sentences),
            ("correct_sentences", self.correct_sentences),
        ] {
            writeln!(out, "{}={}", key, value).unwrap();
        }
        for (key, value) in [
            ("precision_undefined", self.precision_undefined),
            ("recall_undefined", self.recall_undefined),
            ("accuracy_undefined", self.accuracy_undefined),
        ] {
            writeln!(out, "{}={}", key, value).unwrap();
        }
        out
    }
}

impl fmt::Display for EvalReport {
    /// Aligned plain-text table.
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        writeln!(
            f,
            "{:>8} {:>8} {:>8} {:>8} {:>8}",
            "UP", "UR", "LP", "LR", "SAcc"
        )?;
        writeln!(
            f,
            "{:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
            self.up, self.ur, self.lp, self.lr, self.sentence_accuracy
        )
    }
}

/// Precision, recall and sentence accuracy of the enhanced graphs in
/// `system` against `gold`, restricted to edges into or out of copy nodes.
pub fn score_enhanced(system: &Document, gold: &Document) -> Result<EvalReport> {
    check_alignment(system, gold)?;

    let mut matched_unlabeled = 0;
    let mut matched_labeled = 0;
    let mut system_edges = 0;
    let mut gold_edges = 0;
    let mut sentences = Vec::with_capacity(gold.sentences.len());

    for (s, g) in system.sentences.iter().zip(&gold.sentences) {
        let sys = scored_edges(s);
        let gld = scored_edges(g);
        let unlabeled = |edges: &BTreeSet<Edge>| -> BTreeSet<(NodeKey, NodeKey)> {
            edges
                .iter()
                .map(|(h, d, _)| (h.clone(), d.clone()))
                .collect()
        };

        matched_unlabeled += unlabeled(&sys).intersection(&unlabeled(&gld)).count();
        matched_labeled += sys.intersection(&gld).count();
        system_edges += sys.len();
        gold_edges += gld.len();
        sentences.push(SentenceScore {
            gapped: g.has_empty_nodes(),
            correct: sys == gld,
        });
    }

    let gapped_sentences = sentences.iter().filter(|s| s.gapped).count();
    let correct_sentences = sentences.iter().filter(|s| s.gapped && s.correct).count();

    Ok(EvalReport {
        up: percentage(matched_unlabeled, system_edges),
        ur: percentage(matched_unlabeled, gold_edges),
        lp: percentage(matched_labeled, system_edges),
        lr: percentage(matched_labeled, gold_edges),
        sentence_accuracy: percentage(correct_sentences, gapped_sentences),
        matched_unlabeled,
        matched_labeled,
        system_edges,
        gold_edges,
        gapped_sentences,
        correct_sentences,
        precision_undefined: system_edges == 0,
        recall_undefined: gold_edges == 0,
        accuracy_undefined: gapped_sentences == 0,
        sentences,
    })
}

/// Attachment scores restricted to remnant heads, in percent.
#[derive(Clone, Debug, PartialEq)]
pub struct RemnantScore {
    pub uas: f64,
    pub las: f64,
    pub remnants: usize,
    pub attached: usize,
    pub labeled: usize,
}

impl RemnantScore {
    pub fn key_values(&self) -> String {
        format!(
            "UAS_g={:.2}\nLAS_g={:.2}\nremnants={}\nattached={}\nlabeled={}\n",
            self.uas, self.las, self.remnants, self.attached, self.labeled
        )
    }
}

impl fmt::Display for RemnantScore {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        writeln!(f, "{:>8} {:>8} {:>8}", "UAS_g", "LAS_g", "tokens")?;
        writeln!(
            f,
            "{:>8.2} {:>8.2} {:>8}",
            self.uas, self.las, self.remnants
        )
    }
}

/// Basic-tree attachment accuracy of the tokens that gold attaches with
/// `orphan` or a composite relation. Punctuation is excluded.
pub fn score_remnant_attachment(system: &Document, gold: &Document) -> Result<RemnantScore> {
    check_alignment(system, gold)?;

    let mut remnants = 0;
    let mut attached = 0;
    let mut labeled = 0;
    for (s, g) in system.sentences.iter().zip(&gold.sentences) {
        for (st, gt) in s.surface_tokens().zip(g.surface_tokens()) {
            let is_remnant = match &gt.deprel {
                Some(rel) => rel.is(ORPHAN) || rel.is_composite(),
                None => false,
            };
            if !is_remnant || gt.is_punct() {
                continue;
            }
            remnants += 1;
            if st.head == gt.head {
                attached += 1;
                if st.deprel == gt.deprel {
                    labeled += 1;
                }
            }
        }
    }

    Ok(RemnantScore {
        uas: percentage(attached, remnants),
        las: percentage(labeled, remnants),
        remnants,
        attached,
        labeled,
    })
}

/// Counts describing a corpus of gapping annotations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub sentences: usize,
    pub tokens: usize,
    /// Sentences with an `orphan` relation, a composite relation or a copy node.
    pub gapped_sentences: usize,
    pub orphan_sentences: usize,
    pub composite_sentences: usize,
    pub copy_sentences: usize,
    pub copy_nodes: usize,
    pub composite_relations: BTreeSet<String>,
    /// Histogram of `GapType` MISC values.
    pub gap_types: BTreeMap<String, usize>,
}

/// MISC attribute holding the type of a gap.
pub const GAP_TYPE: &str = "GapType";

impl CorpusStats {
    pub fn unique_composite_relations(&self) -> usize {
        self.composite_relations.len()
    }
}

impl fmt::Display for CorpusStats {
    /// `key=value` lines; gap types only when present.
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        writeln!(f, "sentences={}", self.sentences)?;
        writeln!(f, "tokens={}", self.tokens)?;
        writeln!(f, "gapped_sentences={}", self.gapped_sentences)?;
        writeln!(f, "orphan_sentences={}", self.orphan_sentences)?;
        writeln!(f, "composite_sentences={}", self.composite_sentences)?;
        writeln!(f, "copy_sentences={}", self.copy_sentences)?;
        writeln!(f, "copy_nodes={}", self.copy_nodes)?;
        writeln!(
            f,
            "unique_composite_relations={}",
            self.unique_composite_relations()
        )?;
        for (gap_type, count) in &self.gap_types {
            writeln!(f, "gap_type.{}={}", gap_type, count)?;
        }
        Ok(())
    }
}

pub fn corpus_stats(doc: &Document) -> CorpusStats {
    let mut stats = CorpusStats::default();
    for sentence in &doc.sentences {
        stats.sentences += 1;
        stats.tokens += sentence.len();

        let mut orphan = false;
        let mut composite = false;
        for token in sentence.surface_tokens() {
            if let Some(rel) = &token.deprel {
                orphan |= rel.is(ORPHAN);
                if rel.is_composite() {
                    composite = true;
                    stats.composite_relations.insert(rel.to_string());
                }
            }
        }
        for token in sentence.tokens() {
            if let Some(gap_type) = token.misc_value(GAP_TYPE) {
                *stats.gap_types.entry(gap_type.to_owned()).or_insert(0) += 1;
            }
        }
        let copies = sentence.empty_nodes().count();

        stats.copy_nodes += copies;
        stats.orphan_sentences += usize::from(orphan);
        stats.composite_sentences += usize::from(composite);
        stats.copy_sentences += usize::from(copies > 0);
        stats.gapped_sentences += usize::from(orphan || composite || copies > 0);
    }
    stats
}
