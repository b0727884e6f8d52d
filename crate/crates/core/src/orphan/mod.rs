//! Gap resolution for basic trees in which gapped conjuncts are marked
//! with the `orphan` relation.
//!
//! The remnants of a gapped conjunct are aligned to the arguments of the
//! predicate in the full conjunct. The predicate (and, for verb clusters,
//! the chain of `xcomp` predicates down to the aligned arguments) is copied,
//! and each remnant is attached to the copy with the relation of the
//! argument it was aligned to.

use std::collections::{BTreeMap, BTreeSet};

use crate::align::{align, Alignment};
use crate::conllu::{BasicTree, NodeId, RelationLabel, Sentence};
use crate::embeddings::{phrase_vector, sim, EmbeddingTable, SimilarityParams};
use crate::enhancement::{apply, lifted, shared_core_edges, Attachment, Diagnostic, Enhancement};
use crate::error::Result;
use crate::relations::{is_argument, is_functional, DEP, ORPHAN, XCOMP};

/// Maximum number of embedded `xcomp` predicates copied for one conjunct.
pub const MAX_CHAIN_DEPTH: usize = 5;

/// An argument of a predicate or a remnant of a gapped conjunct.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgumentSpan {
    pub head: NodeId,
    /// Basic-tree relation of `head`.
    pub relation: RelationLabel,
    /// Tokens of the argument phrase, sorted.
    pub span: Vec<NodeId>,
    /// Universal POS tag of `head`.
    pub head_upos: String,
    /// Phrase vector; empty when no embeddings are used.
    pub vector: Vec<f64>,
}

impl ArgumentSpan {
    pub fn start(&self) -> NodeId {
        self.span[0]
    }
}

/// Arguments that remnants can be aligned to, together with the embedded
/// predicates that must be copied when this list is used.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateArgumentList {
    pub args: Vec<ArgumentSpan>,
    /// Path of `xcomp` dependents below the full-conjunct head.
    pub copy_chain: Vec<NodeId>,
}

/// A conjunct whose predicate was elided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GappedConjunct {
    /// Head of the full conjunct, whose predicate is copied.
    pub full_head: NodeId,
    /// Promoted remnant that heads the gapped conjunct.
    pub gapped_head: NodeId,
    /// `orphan` dependents of `gapped_head`.
    pub orphans: Vec<NodeId>,
}

/// The copies and edges that resolve one gapped conjunct.
#[derive(Clone, Debug, PartialEq)]
pub struct GapResolution {
    pub conjunct_head: NodeId,
    /// `(source, copy)` in chain order.
    pub copies: Vec<(NodeId, NodeId)>,
    pub attachments: Vec<Attachment>,
    /// Nodes whose basic-tree attachment is replaced by `attachments`.
    pub relocated: Vec<NodeId>,
    /// Alignment score of the chosen argument list.
    pub score: f64,
}

/// Gapped conjuncts in basic-tree order. Conjuncts whose head has no parent
/// cannot be resolved and are reported as diagnostics instead.
pub fn find_gapped_conjuncts(sentence: &Sentence) -> (Vec<GappedConjunct>, Vec<Diagnostic>) {
    let tree = sentence.basic_tree();

    let mut orphans: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for token in sentence.surface_tokens() {
        if let (Some(head), Some(rel)) = (token.head, &token.deprel) {
            if rel.is(ORPHAN) {
                orphans.entry(head).or_default().push(token.id);
            }
        }
    }

    let mut conjuncts = Vec::new();
    let mut diagnostics = Vec::new();
    for (&gapped_head, orphan_ids) in &orphans {
        if gapped_head.is_root() {
            diagnostics.push(Diagnostic {
                node: orphan_ids[0],
                message: "orphan attached to the root".into(),
            });
            continue;
        }

        // A conjunct attached to another gapped conjunct shares its full head.
        let mut full_head = tree.head(gapped_head);
        let mut steps = 0;
        while let Some(parent) = full_head {
            if parent.is_root() || !orphans.contains_key(&parent) || steps > tree.len() {
                break;
            }
            full_head = tree.head(parent);
            steps += 1;
        }

        match full_head {
            Some(full_head) if !full_head.is_root() => conjuncts.push(GappedConjunct {
                full_head,
                gapped_head,
                orphans: orphan_ids.clone(),
            }),
            _ => diagnostics.push(Diagnostic {
                node: gapped_head,
                message: "gapped conjunct without a full conjunct".into(),
            }),
        }
    }

    (conjuncts, diagnostics)
}

struct Context<'s> {
    sentence: &'s Sentence,
    tree: BasicTree,
    gapped_heads: BTreeSet<NodeId>,
}

impl<'s> Context<'s> {
    fn new(sentence: &'s Sentence) -> Self {
        let tree = sentence.basic_tree();
        let gapped_heads = sentence
            .surface_tokens()
            .filter(|t| t.deprel.as_ref().map(|r| r.is(ORPHAN)).unwrap_or(false))
            .filter_map(|t| t.head)
            .collect();
        Context {
            sentence,
            tree,
            gapped_heads,
        }
    }

    fn relation(&self, node: NodeId) -> RelationLabel {
        self.tree
            .deprel(node)
            .cloned()
            .unwrap_or_else(|| RelationLabel::atomic(DEP))
    }

    fn is_punct(&self, node: NodeId) -> bool {
        self.tree
            .deprel(node)
            .map(|r| r.universal() == "punct")
            .unwrap_or(false)
    }
}

/// Gap resolution with a fixed embedding table and scoring parameters.
#[derive(Clone, Debug)]
pub struct OrphanEnhancer<'a> {
    table: Option<&'a EmbeddingTable>,
    params: SimilarityParams,
}

impl<'a> OrphanEnhancer<'a> {
    /// Without a table, arguments are compared by their POS tags only.
    pub fn new(table: Option<&'a EmbeddingTable>, params: SimilarityParams) -> Result<Self> {
        params.validate()?;
        Ok(OrphanEnhancer { table, params })
    }

    pub fn params(&self) -> &SimilarityParams {
        &self.params
    }

    fn span<F>(&self, ctx: &Context, head: NodeId, keep: F) -> ArgumentSpan
    where
        F: Fn(NodeId) -> bool,
    {
        let span = ctx.tree.subtree_where(head, keep);
        let vector = match self.table {
            Some(table) if self.params.use_embeddings => phrase_vector(
                span.iter()
                    .map(|&id| ctx.sentence.token(id).expect("span token").form.as_str()),
                table,
                self.params.lowercase_fallback,
            ),
            _ => Vec::new(),
        };
        ArgumentSpan {
            head,
            relation: ctx.relation(head),
            span,
            head_upos: ctx
                .sentence
                .token(head)
                .map(|t| t.upos.clone())
                .unwrap_or_default(),
            vector,
        }
    }

    fn arguments_of(&self, ctx: &Context, predicate: NodeId) -> Vec<ArgumentSpan> {
        let mut args: Vec<ArgumentSpan> = ctx
            .tree
            .children(predicate)
            .iter()
            .copied()
            .filter(|&child| !ctx.gapped_heads.contains(&child))
            .filter(|&child| {
                ctx.tree
                    .deprel(child)
                    .map(|r| !r.is_composite() && is_argument(r.first()))
                    .unwrap_or(false)
            })
            .map(|child| self.span(ctx, child, |n| !ctx.is_punct(n)))
            .collect();
        args.sort_by_key(ArgumentSpan::start);
        args
    }

    /// Arguments of `full_head`, ordered by their first token.
    pub fn extract_full_arguments(
        &self,
        sentence: &Sentence,
        full_head: NodeId,
    ) -> CandidateArgumentList {
        let ctx = Context::new(sentence);
        CandidateArgumentList {
            args: self.arguments_of(&ctx, full_head),
            copy_chain: Vec::new(),
        }
    }

    /// The top-level argument list followed by every list obtained by
    /// replacing an `xcomp` argument with the arguments of its head,
    /// recursively up to [`MAX_CHAIN_DEPTH`] predicates deep.
    pub fn expand_partial_arguments(
        &self,
        sentence: &Sentence,
        top: &CandidateArgumentList,
    ) -> Vec<CandidateArgumentList> {
        let ctx = Context::new(sentence);
        self.expand(&ctx, top)
    }

    fn expand(&self, ctx: &Context, top: &CandidateArgumentList) -> Vec<CandidateArgumentList> {
        let mut candidates = vec![top.clone()];
        let mut agenda = vec![0];
        while let Some(idx) = agenda.pop() {
            let candidate = candidates[idx].clone();
            if candidate.copy_chain.len() >= MAX_CHAIN_DEPTH {
                continue;
            }
            let tip = candidate.copy_chain.last().copied();

            for (pos, arg) in candidate.args.iter().enumerate() {
                if !arg.relation.is(XCOMP) {
                    continue;
                }
                // Only descend below the predicate expanded last.
                if tip.is_some() && ctx.tree.head(arg.head) != tip {
                    continue;
                }
                let embedded = self.arguments_of(ctx, arg.head);
                if embedded.is_empty() {
                    continue;
                }

                let mut args = candidate.args.clone();
                args.splice(pos..=pos, embedded);
                args.sort_by_key(ArgumentSpan::start);
                let mut copy_chain = candidate.copy_chain.clone();
                copy_chain.push(arg.head);

                candidates.push(CandidateArgumentList { args, copy_chain });
                agenda.push(candidates.len() - 1);
            }
        }

        // Depth-first order: every chain directly after its prefix.
        candidates.sort_by(|a, b| a.copy_chain.cmp(&b.copy_chain));
        candidates
    }

    fn gapped_arguments(&self, ctx: &Context, conjunct: &GappedConjunct) -> Vec<ArgumentSpan> {
        let head = conjunct.gapped_head;
        let mut args = vec![self.span(ctx, head, |n| {
            if ctx.is_punct(n) {
                return false;
            }
            if ctx.tree.head(n) != Some(head) {
                return true;
            }
            match ctx.tree.deprel(n) {
                Some(rel) => {
                    !(rel.is(ORPHAN) || is_functional(rel.first()) || rel.universal() == "conj")
                }
                None => true,
            }
        })];
        for &orphan in &conjunct.orphans {
            args.push(self.span(ctx, orphan, |n| !ctx.is_punct(n)));
        }
        args.sort_by_key(ArgumentSpan::start);
        args
    }

    fn score(&self, g: &[ArgumentSpan], f: &[ArgumentSpan]) -> Alignment {
        align(
            g,
            f,
            |a, b| sim(a, b, &self.params),
            self.params.gap_penalty,
        )
    }

    /// Decide which nodes to copy for `conjunct` and where its remnants
    /// attach. Copies are numbered after the gapped conjunct's head.
    pub fn resolve_gap(&self, sentence: &Sentence, conjunct: &GappedConjunct) -> GapResolution {
        let ctx = Context::new(sentence);
        let g = self.gapped_arguments(&ctx, conjunct);

        let top = CandidateArgumentList {
            args: self.arguments_of(&ctx, conjunct.full_head),
            copy_chain: Vec::new(),
        };
        let mut best: Option<(CandidateArgumentList, Alignment)> = None;
        for candidate in self.expand(&ctx, &top) {
            let alignment = self.score(&g, &candidate.args);
            let better = match &best {
                None => true,
                Some((current, current_alignment)) => {
                    alignment.score > current_alignment.score
                        || (alignment.score == current_alignment.score
                            && candidate.copy_chain.len() < current.copy_chain.len())
                }
            };
            if better {
                best = Some((candidate, alignment));
            }
        }
        let (candidate, alignment) = best.expect("the top-level list is always a candidate");

        let anchor = conjunct.gapped_head.major();
        let first_idx = sentence.next_empty_index(anchor);
        let sources: Vec<NodeId> = std::iter::once(conjunct.full_head)
            .chain(candidate.copy_chain.iter().copied())
            .collect();
        let copies: Vec<(NodeId, NodeId)> = sources
            .iter()
            .enumerate()
            .map(|(k, &source)| (source, NodeId::empty(anchor, first_idx + k)))
            .collect();
        let copy_of = |source: NodeId| {
            copies
                .iter()
                .find(|(s, _)| *s == source)
                .map(|&(_, c)| c)
                .unwrap_or(copies[0].1)
        };

        let mut attachments = vec![Attachment::new(
            conjunct.full_head,
            copies[0].1,
            ctx.relation(conjunct.gapped_head),
        )];
        for pair in copies.windows(2) {
            attachments.push(Attachment::new(
                pair[0].1,
                pair[1].1,
                ctx.relation(pair[1].0),
            ));
        }

        let mut relocated = Vec::new();
        for (gi, arg) in g.iter().enumerate() {
            let attachment = match alignment.partner_of(gi) {
                Some(fi) => {
                    let f = &candidate.args[fi];
                    let parent = ctx.tree.head(f.head).unwrap_or(conjunct.full_head);
                    Attachment::new(copy_of(parent), arg.head, f.relation.clone())
                }
                None => Attachment::new(copies[0].1, arg.head, RelationLabel::atomic(DEP)),
            };
            attachments.push(attachment);
            relocated.push(arg.head);
        }

        for &child in ctx.tree.children(conjunct.gapped_head) {
            let rel = ctx.relation(child);
            if is_functional(rel.first()) {
                attachments.push(Attachment::new(copies[0].1, child, rel));
                relocated.push(child);
            }
        }

        let shared = shared_core_edges(&ctx.tree, &copies, &attachments);
        attachments.extend(shared);

        GapResolution {
            conjunct_head: conjunct.gapped_head,
            copies,
            attachments,
            relocated,
            score: alignment.score,
        }
    }

    /// Rebuild the enhanced graph of `sentence` from its basic tree and
    /// resolve every gapped conjunct. Existing empty nodes are discarded.
    pub fn enhance(&self, sentence: &Sentence) -> Enhancement {
        let mut work = lifted(sentence);
        let (conjuncts, diagnostics) = find_gapped_conjuncts(sentence);

        let gaps_found = conjuncts.len() + diagnostics.len();
        let mut copies_inserted = 0;
        for conjunct in &conjuncts {
            let resolution = self.resolve_gap(&work, conjunct);
            apply(
                &mut work,
                &resolution.copies,
                &resolution.attachments,
                &resolution.relocated,
            );
            copies_inserted += resolution.copies.len();
        }

        Enhancement {
            sentence: work,
            diagnostics,
            gaps_found,
            gaps_resolved: conjuncts.len(),
            copies_inserted,
        }
    }
}

/// Resolve all `orphan`-marked gaps of a sentence.
pub fn enhance_sentence_orphan(
    sentence: &Sentence,
    table: Option<&EmbeddingTable>,
    params: &SimilarityParams,
) -> Result<Enhancement> {
    Ok(OrphanEnhancer::new(table, params.clone())?.enhance(sentence))
}
