//! Pre-trained word vectors and argument similarity.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};
use crate::orphan::ArgumentSpan;

/// Word vectors read from a GloVe or word2vec text file.
#[derive(Clone, Debug, Default)]
pub struct EmbeddingTable {
    dim: usize,
    entries: HashMap<String, Vec<f32>>,
}

impl EmbeddingTable {
    /// Build a table from `(word, vector)` pairs. Duplicate words keep the
    /// first vector.
    pub fn from_entries<I, S>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut table = EmbeddingTable {
            dim,
            entries: HashMap::new(),
        };
        for (idx, (word, vector)) in entries.into_iter().enumerate() {
            if vector.len() != dim {
                return Err(Error::Embeddings {
                    line: idx + 1,
                    message: format!("expected {} components, found {}", dim, vector.len()),
                });
            }
            table.entries.entry(word.into()).or_insert(vector);
        }
        Ok(table)
    }

    /// Read a table from a file. Files ending in `.gz` are decompressed.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path)?;
        if path.extension().map(|ext| ext == "gz").unwrap_or(false) {
            Self::from_reader(BufReader::new(MultiGzDecoder::new(file)))
        } else {
            Self::from_reader(BufReader::new(file))
        }
    }

    /// Read whitespace-separated `word c1 ... cd` lines. A first line of
    /// exactly two integers is taken to be a word2vec `count dim` header.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut dim = None;
        let mut entries = HashMap::new();
        let mut first = true;

        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            let mut fields = line.split_whitespace();
            let word = match fields.next() {
                Some(word) => word,
                None => continue,
            };
            let rest: Vec<&str> = fields.collect();

            if first {
                first = false;
                if rest.len() == 1 {
                    if let (Ok(_), Ok(header_dim)) =
                        (word.parse::<usize>(), rest[0].parse::<usize>())
                    {
                        dim = Some(header_dim);
                        continue;
                    }
                }
            }

            let vector = rest
                .iter()
                .map(|c| c.parse::<f32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Embeddings {
                    line: line_no,
                    message: format!("invalid component: {}", e),
                })?;

            match dim {
                None if vector.is_empty() => {
                    return Err(Error::Embeddings {
                        line: line_no,
                        message: "entry without components".into(),
                    })
                }
                None => dim = Some(vector.len()),
                Some(d) if d != vector.len() => {
                    return Err(Error::Embeddings {
                        line: line_no,
                        message: format!("expected {} components, found {}", d, vector.len()),
                    })
                }
                Some(_) => {}
            }

            entries.entry(word.to_owned()).or_insert(vector);
        }

        Ok(EmbeddingTable {
            dim: dim.unwrap_or(0),
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Case-sensitive lookup.
    pub fn get(&self, word: &str) -> Option<&[f32]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Lookup that retries with the lowercased word on a miss when
    /// `lowercase_fallback` is set.
    pub fn lookup(&self, word: &str, lowercase_fallback: bool) -> Option<&[f32]> {
        self.get(word).or_else(|| {
            if lowercase_fallback {
                let lower = word.to_lowercase();
                if lower != word {
                    return self.get(&lower);
                }
            }
            None
        })
    }
}

/// Load a word-vector table.
pub fn load_table(path: impl AsRef<Path>) -> Result<EmbeddingTable> {
    EmbeddingTable::load(path)
}

/// Mean of the vectors of the words found in `table`.
///
/// Out-of-vocabulary words are skipped. If none of the words is known, the
/// zero vector is returned.
pub fn phrase_vector<'a, I>(words: I, table: &EmbeddingTable, lowercase_fallback: bool) -> Vec<f64>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut sum = vec![0f64; table.dim()];
    let mut found = 0usize;
    for word in words {
        if let Some(vector) = table.lookup(word, lowercase_fallback) {
            for (acc, &c) in sum.iter_mut().zip(vector) {
                *acc += f64::from(c);
            }
            found += 1;
        }
    }

    if found > 0 {
        for c in &mut sum {
            *c /= found as f64;
        }
    }

    sum
}

/// Which tag comparison triggers the POS penalty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PosIndicator {
    /// Penalize arguments whose head tags differ.
    #[default]
    Mismatch,
    /// Apply the penalty when the head tags are equal.
    Match,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityParams {
    /// Added to the score of arguments with differing tags. Must be <= 0.
    pub pos_mismatch_penalty: f64,
    /// Score of leaving an argument unaligned. Must be <= 0.
    pub gap_penalty: f64,
    pub lowercase_fallback: bool,
    pub indicator: PosIndicator,
    /// Include the embedding distance term. Without it only tags count.
    pub use_embeddings: bool,
}

impl Default for SimilarityParams {
    fn default() -> Self {
        SimilarityParams {
            pos_mismatch_penalty: -2.0,
            gap_penalty: -4.0,
            lowercase_fallback: true,
            indicator: PosIndicator::Mismatch,
            use_embeddings: true,
        }
    }
}

impl SimilarityParams {
    pub fn validate(&self) -> Result<()> {
        if self.pos_mismatch_penalty.is_nan() || self.pos_mismatch_penalty > 0.0 {
            return Err(Error::Parameter(format!(
                "POS mismatch penalty must be <= 0, got {}",
                self.pos_mismatch_penalty
            )));
        }
        if self.gap_penalty.is_nan() || self.gap_penalty > 0.0 {
            return Err(Error::Parameter(format!(
                "gap penalty must be <= 0, got {}",
                self.gap_penalty
            )));
        }
        Ok(())
    }
}

/// Similarity of a gapped-conjunct argument `g` and a full-conjunct
/// argument `f`: the negated Euclidean distance of their phrase vectors plus
/// the POS penalty when their head tags differ.
///
/// Spans without vectors contribute no distance. Panics if both spans carry
/// vectors of different dimensionality.
pub fn sim(g: &ArgumentSpan, f: &ArgumentSpan, params: &SimilarityParams) -> f64 {
    let distance = if params.use_embeddings && !g.vector.is_empty() && !f.vector.is_empty() {
        euclidean(&g.vector, &f.vector)
    } else {
        0.0
    };

    let penalize = match params.indicator {
        PosIndicator::Mismatch => g.head_upos != f.head_upos,
        PosIndicator::Match => g.head_upos == f.head_upos,
    };

    let penalty = if penalize {
        params.pos_mismatch_penalty
    } else {
        0.0
    };

    -distance + penalty
}

fn euclidean(u: &[f64], v: &[f64]) -> f64 {
    assert_eq!(u.len(), v.len(), "phrase vectors differ in dimensionality");
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}
