use std::collections::HashMap;

use super::{Dep, Document, MultiwordToken, NodeId, RelationLabel, Sentence, Token, UNSET};
use crate::error::{Error, Result};

const N_COLUMNS: usize = 10;

/// Parse a CoNLL-U document.
///
/// All columns are kept verbatim except HEAD, DEPREL and DEPS, which are
/// parsed. Structural errors (wrong column count, bad identifiers, heads
/// outside the sentence, cyclic basic trees) are reported as
/// [`Error::Parse`]; enhanced dependencies that reference a missing node
/// are reported as [`Error::Validation`].
pub fn parse_document(text: &str) -> Result<Document> {
    let mut sentences = Vec::new();
    let mut builder: Option<SentenceBuilder> = None;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;

        if line.trim().is_empty() {
            if let Some(b) = builder.take() {
                sentences.push(b.finish()?);
            }
            continue;
        }

        let b = builder.get_or_insert_with(|| SentenceBuilder::new(line_no));
        if line.starts_with('#') {
            b.comment(line_no, line)?;
        } else {
            b.token_line(line_no, line)?;
        }
    }

    if let Some(b) = builder.take() {
        sentences.push(b.finish()?);
    }

    Ok(Document::new(sentences))
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct SentenceBuilder {
    sentence: Sentence,
    start_line: usize,
    lines: HashMap<NodeId, usize>,
    last_surface: usize,
    last_minor: usize,
}

impl SentenceBuilder {
    fn new(start_line: usize) -> Self {
        SentenceBuilder {
            sentence: Sentence::new(),
            start_line,
            lines: HashMap::new(),
            last_surface: 0,
            last_minor: 0,
        }
    }

    fn comment(&mut self, line_no: usize, line: &str) -> Result<()> {
        if !self.sentence.is_empty() || !self.sentence.multiword_tokens().is_empty() {
            return Err(parse_error(line_no, "comment after token lines"));
        }
        self.sentence.comments_mut().push(line.to_owned());
        Ok(())
    }

    fn token_line(&mut self, line_no: usize, line: &str) -> Result<()> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != N_COLUMNS {
            return Err(parse_error(
                line_no,
                format!("expected {} columns, found {}", N_COLUMNS, fields.len()),
            ));
        }

        let id_field = fields[0];
        if let Some((first, last)) = id_field.split_once('-') {
            let range = first.parse::<usize>().ok().zip(last.parse::<usize>().ok());
            match range {
                Some((first, last)) if first == self.last_surface + 1 && last > first => {
                    self.sentence.push_multiword(MultiwordToken {
                        first,
                        line: line.to_owned(),
                    });
                    return Ok(());
                }
                _ => {
                    return Err(parse_error(
                        line_no,
                        format!("invalid multiword token range `{}`", id_field),
                    ))
                }
            }
        }

        let id: NodeId = id_field
            .parse()
            .map_err(|_| parse_error(line_no, format!("invalid token id `{}`", id_field)))?;

        if id.is_empty_node() {
            if id.major() != self.last_surface || id.minor() <= self.last_minor {
                return Err(parse_error(
                    line_no,
                    format!("empty node {} out of order", id),
                ));
            }
            self.last_minor = id.minor();
        } else {
            if id.major() != self.last_surface + 1 {
                return Err(parse_error(
                    line_no,
                    format!("expected token id {}, found {}", self.last_surface + 1, id),
                ));
            }
            self.last_surface = id.major();
            self.last_minor = 0;
        }

        let head = match fields[6] {
            UNSET => None,
            text => {
                let head: NodeId = text
                    .parse()
                    .map_err(|_| parse_error(line_no, format!("invalid head `{}`", text)))?;
                if head.is_empty_node() {
                    return Err(parse_error(line_no, "basic head cannot be an empty node"));
                }
                Some(head)
            }
        };

        let deprel = match fields[7] {
            UNSET => None,
            text => Some(
                text.parse::<RelationLabel>()
                    .map_err(|e| parse_error(line_no, e.to_string()))?,
            ),
        };

        if id.is_empty_node() && (head.is_some() || deprel.is_some()) {
            return Err(parse_error(
                line_no,
                format!("empty node {} has basic head or relation", id),
            ));
        }

        let deps = parse_deps(fields[8]).map_err(|e| parse_error(line_no, e.to_string()))?;

        self.lines.insert(id, line_no);
        // Ids are checked above, so tokens arrive in canonical order.
        let token = Token {
            id,
            form: fields[1].to_owned(),
            lemma: fields[2].to_owned(),
            upos: fields[3].to_owned(),
            xpos: fields[4].to_owned(),
            feats: fields[5].to_owned(),
            head,
            deprel,
            deps,
            misc: fields[9].to_owned(),
        };
        if id.is_empty_node() {
            self.sentence.insert_empty_node(token)?;
        } else {
            self.sentence.push(token);
        }

        Ok(())
    }

    fn finish(self) -> Result<Sentence> {
        if self.sentence.is_empty() {
            return Err(parse_error(self.start_line, "sentence without tokens"));
        }

        let n = self.sentence.len();
        let line_of = |id: NodeId| self.lines.get(&id).copied().unwrap_or(self.start_line);

        for mwt in self.sentence.multiword_tokens() {
            if mwt.first > n {
                return Err(parse_error(
                    self.start_line,
                    "multiword token range beyond the last token",
                ));
            }
        }

        for token in self.sentence.surface_tokens() {
            if let Some(head) = token.head {
                if head.major() > n {
                    return Err(parse_error(
                        line_of(token.id),
                        format!("head {} does not exist", head),
                    ));
                }
            }
        }

        if let Some(node) = find_cycle(&self.sentence) {
            return Err(parse_error(
                line_of(node),
                format!("basic tree has a cycle through token {}", node),
            ));
        }

        for token in self.sentence.tokens() {
            for dep in &token.deps {
                if !self.sentence.contains(dep.head) {
                    return Err(Error::Validation {
                        line: line_of(token.id),
                        message: format!(
                            "enhanced head {} of node {} does not exist",
                            dep.head, token.id
                        ),
                    });
                }
            }
        }

        Ok(self.sentence)
    }
}

fn parse_deps(field: &str) -> Result<Vec<Dep>> {
    if field == UNSET {
        return Ok(Vec::new());
    }

    field
        .split('|')
        .map(|pair| {
            let (head, rel) = pair
                .split_once(':')
                .ok_or_else(|| Error::Format(format!("invalid enhanced dependency `{}`", pair)))?;
            Ok(Dep::new(head.parse()?, rel.parse()?))
        })
        .collect()
}

/// Returns a token on a cycle of the basic tree, if there is one.
pub(super) fn find_cycle(sentence: &Sentence) -> Option<NodeId> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        New,
        Active,
        Done,
    }

    let n = sentence.len();
    let mut heads = vec![None; n + 1];
    for token in sentence.surface_tokens() {
        heads[token.id.major()] = token.head.map(NodeId::major).filter(|&h| h <= n);
    }

    let mut state = vec![State::New; n + 1];
    for start in 1..=n {
        let mut path = Vec::new();
        let mut current = start;
        while current != 0 && state[current] == State::New {
            state[current] = State::Active;
            path.push(current);
            match heads[current] {
                Some(head) => current = head,
                None => break,
            }
        }
        if current != 0 && state[current] == State::Active && heads[current].is_some() {
            return Some(NodeId::surface(current));
        }
        for node in path {
            state[node] = State::Done;
        }
    }

    None
}

#[cfg(test)]
mod tests {
    use super::parse_document;
    use crate::conllu::{NodeId, RelationLabel};
    use crate::error::Error;

    #[test]
    fn minimal_sentence() {
        let doc = parse_document(
            "1\tHi\thi\tINTJ\t_\t_\t0\troot\t0:root\t_\n2\t!\t!\tPUNCT\t_\t_\t1\tpunct\t1:punct\t_\n\n",
        )
        .unwrap();
        assert_eq!(doc.len(), 1);
        assert_eq!(doc.sentences[0].len(), 2);
        assert_eq!(doc.sentences[0].tokens()[1].head, Some(NodeId::surface(1)));
    }

    #[test]
    fn empty_node_in_enhanced_graph() {
        let text = "1\tJohn\t_\tPROPN\t_\t_\t2\tnsubj\t2:nsubj\t_\n\
                    2\tbought\t_\tVERB\t_\t_\t0\troot\t0:root\t_\n\
                    2.1\tbought\t_\tVERB\t_\t_\t_\t_\t2:conj\tCopyOf=2\n";
        let doc = parse_document(text).unwrap();
        let copy = doc.sentences[0].token(NodeId::empty(2, 1)).unwrap();
        assert_eq!(copy.head, None);
        assert_eq!(copy.deps.len(), 1);
        assert_eq!(copy.deps[0].head, NodeId::surface(2));
        assert_eq!(copy.deps[0].rel, "conj".parse::<RelationLabel>().unwrap());
    }

    #[test]
    fn deps_split_on_first_colon() {
        let text = "1\tit\t_\tPRON\t_\t_\t2\tnsubj:pass\t2:nsubj:pass|3:conj>obj\t_\n\
                    2\tgrows\t_\tVERB\t_\t_\t0\troot\t0:root\t_\n\
                    3\tx\t_\tX\t_\t_\t2\tdep\t2:dep\t_\n";
        let doc = parse_document(text).unwrap();
        let deps = &doc.sentences[0].tokens()[0].deps;
        assert_eq!(deps[0].rel.to_string(), "nsubj:pass");
        assert_eq!(deps[1].rel.parts(), ["conj", "obj"]);
    }

    fn parse_line(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn wrong_column_count() {
        let err = parse_document("# c\n1\ta\t_\tX\t_\t_\t0\troot\t_\n").unwrap_err();
        assert_eq!(parse_line(err), 2);
    }

    #[test]
    fn bad_ids() {
        let err =
            parse_document("1\ta\t_\tX\t_\t_\t0\troot\t_\t_\n3\tb\t_\tX\t_\t_\t1\tdep\t_\t_\n")
                .unwrap_err();
        assert_eq!(parse_line(err), 2);
        let err = parse_document("x\ta\t_\tX\t_\t_\t0\troot\t_\t_\n").unwrap_err();
        assert_eq!(parse_line(err), 1);
        let err = parse_document(
            "1\ta\t_\tX\t_\t_\t0\troot\t_\t_\n1.2\tb\t_\tX\t_\t_\t_\t_\t_\t_\n1.1\tb\t_\tX\t_\t_\t_\t_\t_\t_\n",
        )
        .unwrap_err();
        assert_eq!(parse_line(err), 3);
    }

    #[test]
    fn cycle_is_a_parse_error() {
        let err = parse_document(
            "1\ta\t_\tX\t_\t_\t0\troot\t_\t_\n2\tb\t_\tX\t_\t_\t3\tdep\t_\t_\n3\tc\t_\tX\t_\t_\t2\tdep\t_\t_\n",
        )
        .unwrap_err();
        let line = parse_line(err);
        assert!(line == 2 || line == 3);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let err = parse_document("1\ta\t_\tX\t_\t_\t1\tdep\t_\t_\n").unwrap_err();
        assert_eq!(parse_line(err), 1);
    }

    #[test]
    fn missing_enhanced_head() {
        let err = parse_document("1\ta\t_\tX\t_\t_\t0\troot\t4.1:dep\t_\n").unwrap_err();
        assert!(matches!(err, Error::Validation { line: 1, .. }));
    }

    #[test]
    fn head_out_of_range() {
        let err = parse_document("1\ta\t_\tX\t_\t_\t7\tdep\t_\t_\n").unwrap_err();
        assert_eq!(parse_line(err), 1);
    }

    #[test]
    fn empty_node_with_basic_head() {
        let err =
            parse_document("1\ta\t_\tX\t_\t_\t0\troot\t_\t_\n1.1\tb\t_\tX\t_\t_\t1\tdep\t_\t_\n")
                .unwrap_err();
        assert_eq!(parse_line(err), 2);
    }

    #[test]
    fn malformed_composite_label() {
        let err = parse_document("1\ta\t_\tX\t_\t_\t0\tconj>>obj\t_\t_\n").unwrap_err();
        assert_eq!(parse_line(err), 1);
    }

    #[test]
    fn multiword_tokens_are_kept() {
        let text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
                    1\tdo\tdo\tAUX\t_\t_\t2\taux\t_\t_\n\
                    2\tn't\tnot\tPART\t_\t_\t0\troot\t_\t_\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.sentences[0].multiword_tokens().len(), 1);
        assert_eq!(doc.sentences[0].len(), 2);
    }
}
