use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Separator between the atomic parts of a composite relation.
pub const PATH_SEPARATOR: char = '>';

/// A dependency relation label.
///
/// Most labels are atomic (`nsubj`, `nsubj:pass`). Trees that encode
/// gapping with composite relations use labels such as `conj>obj`, which
/// spell out the path through the elided material.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationLabel {
    parts: Vec<String>,
}

impl RelationLabel {
    /// Construct an atomic label. The caller guarantees that `rel` is a
    /// non-empty relation without a path separator.
    pub fn atomic(rel: impl Into<String>) -> Self {
        let rel = rel.into();
        debug_assert!(!rel.is_empty() && !rel.contains(PATH_SEPARATOR));
        RelationLabel { parts: vec![rel] }
    }

    pub fn parts(&self) -> &[String] {
        &self.parts
    }

    pub fn is_composite(&self) -> bool {
        self.parts.len() > 1
    }

    pub fn first(&self) -> &str {
        &self.parts[0]
    }

    pub fn last(&self) -> &str {
        &self.parts[self.parts.len() - 1]
    }

    /// Universal relation of the first part, without subtype.
    pub fn universal(&self) -> &str {
        universal(self.first())
    }

    /// Returns `true` if this is the atomic label `rel`.
    pub fn is(&self, rel: &str) -> bool {
        self.parts.len() == 1 && self.parts[0] == rel
    }
}

/// Strip the subtype from an atomic relation (`nsubj:pass` -> `nsubj`).
pub fn universal(rel: &str) -> &str {
    rel.split(':').next().unwrap_or(rel)
}

/// Split a label into its atomic relations.
pub fn split_label(label: &RelationLabel) -> Vec<String> {
    label.parts.clone()
}

/// Join atomic relations into a (possibly composite) label.
pub fn join_label<S: AsRef<str>>(parts: &[S]) -> Result<RelationLabel> {
    if parts.is_empty() {
        return Err(Error::Format("relation label without parts".into()));
    }

    let mut owned = Vec::with_capacity(parts.len());
    for part in parts {
        let part = part.as_ref();
        if part.is_empty() {
            return Err(Error::Format("empty part in relation label".into()));
        }
        if part.contains(PATH_SEPARATOR) {
            return Err(Error::Format(format!(
                "atomic relation `{}` contains `{}`",
                part, PATH_SEPARATOR
            )));
        }
        owned.push(part.to_owned());
    }

    Ok(RelationLabel { parts: owned })
}

impl FromStr for RelationLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Format("empty relation label".into()));
        }

        let parts: Vec<&str> = s.split(PATH_SEPARATOR).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::Format(format!(
                "relation label `{}` has an empty part",
                s
            )));
        }
        if parts
            .iter()
            .any(|p| p.chars().any(|c| c.is_whitespace() || c == '|'))
        {
            return Err(Error::Format(format!(
                "relation label `{}` contains whitespace or `|`",
                s
            )));
        }

        join_label(&parts)
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for (idx, part) in self.parts.iter().enumerate() {
            if idx != 0 {
                f.write_str(">")?;
            }
            f.write_str(part)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::{join_label, split_label, RelationLabel};

    #[test]
    fn splits_verb_cluster_path() {
        let label: RelationLabel = "conj>xcomp>xcomp>xcomp>obj".parse().unwrap();
        assert_eq!(
            split_label(&label),
            vec!["conj", "xcomp", "xcomp", "xcomp", "obj"]
        );
        assert!(label.is_composite());
        assert_eq!(label.first(), "conj");
        assert_eq!(label.last(), "obj");
    }

    #[test]
    fn atomic_label() {
        let label: RelationLabel = "nsubj".parse().unwrap();
        assert_eq!(split_label(&label), vec!["nsubj"]);
        assert!(!label.is_composite());
    }

    #[test]
    fn subtypes_are_kept() {
        let label: RelationLabel = "conj>nsubj:pass".parse().unwrap();
        assert_eq!(label.last(), "nsubj:pass");
        assert_eq!(label.universal(), "conj");
        let label: RelationLabel = "obl:tmod".parse().unwrap();
        assert_eq!(label.universal(), "obl");
    }

    #[test]
    fn rejects_empty_parts() {
        assert!("conj>>obj".parse::<RelationLabel>().is_err());
        assert!(">obj".parse::<RelationLabel>().is_err());
        assert!("conj>".parse::<RelationLabel>().is_err());
        assert!("".parse::<RelationLabel>().is_err());
        assert!(join_label(&["conj", ""]).is_err());
        assert!(join_label::<&str>(&[]).is_err());
    }

    proptest! {
        #[test]
        fn join_inverts_split(parts in prop::collection::vec("[a-z]{1,8}(:[a-z]{1,5})?", 1..6)) {
            let text = parts.join(">");
            let label: RelationLabel = text.parse().unwrap();
            prop_assert_eq!(label.to_string(), text);
            prop_assert_eq!(join_label(&split_label(&label)).unwrap(), label);
        }
    }
}
