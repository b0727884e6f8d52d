use std::fmt::Write;

use super::{Dep, Document, Sentence, Token, UNSET};

/// Serialize a document in canonical CoNLL-U form.
///
/// Every sentence is terminated by a blank line. Enhanced dependencies are
/// written sorted by head and relation text.
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    for sentence in &doc.sentences {
        write_sentence(&mut out, sentence);
        out.push('\n');
    }
    out
}

/// Serialize a single sentence, without the terminating blank line.
pub fn serialize_sentence(sentence: &Sentence) -> String {
    let mut out = String::new();
    write_sentence(&mut out, sentence);
    out
}

fn write_sentence(out: &mut String, sentence: &Sentence) {
    for comment in sentence.comments() {
        out.push_str(comment);
        out.push('\n');
    }

    let mut multiword = sentence.multiword_tokens().iter().peekable();
    for token in sentence.tokens() {
        if !token.is_empty_node() {
            while let Some(mwt) = multiword.next_if(|mwt| mwt.first == token.id.major()) {
                out.push_str(&mwt.line);
                out.push('\n');
            }
        }
        write_token(out, token);
    }
}

fn write_token(out: &mut String, token: &Token) {
    let head = token
        .head
        .map(|h| h.to_string())
        .unwrap_or_else(|| UNSET.to_owned());
    let deprel = token
        .deprel
        .as_ref()
        .map(|r| r.to_string())
        .unwrap_or_else(|| UNSET.to_owned());

    writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        token.id,
        token.form,
        token.lemma,
        token.upos,
        token.xpos,
        token.feats,
        head,
        deprel,
        deps_column(&token.deps),
        token.misc
    )
    .expect("writing to a string cannot fail");
}

fn deps_column(deps: &[Dep]) -> String {
    if deps.is_empty() {
        return UNSET.to_owned();
    }

    let mut pairs: Vec<_> = deps
        .iter()
        .map(|dep| (dep.head, dep.rel.to_string()))
        .collect();
    pairs.sort();

    pairs
        .iter()
        .map(|(head, rel)| format!("{}:{}", head, rel))
        .collect::<Vec<_>>()
        .join("|")
}
