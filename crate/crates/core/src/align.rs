//! Global monotonic alignment of two argument sequences.

use std::cmp::Ordering;

/// Largest input accepted by [`brute_force_align`] on either side.
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// A monotonic partial matching between two sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    /// `(g_index, f_index)` pairs, strictly increasing in both coordinates.
    pub pairs: Vec<(usize, usize)>,
    pub score: f64,
}

impl Alignment {
    /// The element of the second sequence aligned to `g`, if any.
    pub fn partner_of(&self, g: usize) -> Option<usize> {
        self.pairs.iter().find(|(gi, _)| *gi == g).map(|&(_, f)| f)
    }

    /// Returns `true` if pairs are strictly increasing in both coordinates.
    pub fn is_monotonic(&self) -> bool {
        self.pairs
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
    }
}

/// Order alignments by score, then number of pairs, then the reverse
/// lexicographic order of their pair lists. `Greater` is better.
fn preference(a: &Alignment, b: &Alignment) -> Ordering {
    a.score
        .partial_cmp(&b.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.pairs.len().cmp(&b.pairs.len()))
        .then_with(|| b.pairs.cmp(&a.pairs))
}

fn score_matrix<G, F, S>(g: &[G], f: &[F], scorer: S) -> Vec<Vec<f64>>
where
    S: Fn(&G, &F) -> f64,
{
    g.iter()
        .map(|gi| f.iter().map(|fj| scorer(gi, fj)).collect())
        .collect()
}

/// Highest-scoring monotonic alignment of `g` to `f` (Needleman-Wunsch).
///
/// The score of an alignment is the sum of `scorer` over its pairs plus
/// `gap_penalty` for every unaligned element of either sequence. Ties are
/// broken in favour of more pairs, then the lexicographically smallest
/// pair list.
pub fn align<G, F, S>(g: &[G], f: &[F], scorer: S, gap_penalty: f64) -> Alignment
where
    S: Fn(&G, &F) -> f64,
{
    let scores = score_matrix(g, f, scorer);
    let (n, m) = (g.len(), f.len());

    // best[i][j] is the best alignment of the suffixes g[i..] and f[j..].
    // Prepending the same element to two suffix solutions preserves their
    // preference order, so suffix optima compose.
    let mut best: Vec<Vec<Alignment>> = vec![Vec::with_capacity(m + 1); n + 1];
    for i in (0..=n).rev() {
        let mut row: Vec<Alignment> = vec![
            Alignment {
                pairs: Vec::new(),
                score: 0.0
            };
            m + 1
        ];
        for j in (0..=m).rev() {
            row[j] = if i == n {
                Alignment {
                    pairs: Vec::new(),
                    score: gap_penalty * (m - j) as f64,
                }
            } else if j == m {
                Alignment {
                    pairs: Vec::new(),
                    score: gap_penalty * (n - i) as f64,
                }
            } else {
                let diagonal = &best[i + 1][j + 1];
                let mut pairs = Vec::with_capacity(diagonal.pairs.len() + 1);
                pairs.push((i, j));
                pairs.extend_from_slice(&diagonal.pairs);
                let matched = Alignment {
                    pairs,
                    score: scores[i][j] + diagonal.score,
                };

                let skip_g = Alignment {
                    pairs: best[i + 1][j].pairs.clone(),
                    score: gap_penalty + best[i + 1][j].score,
                };
                let skip_f = Alignment {
                    pairs: row[j + 1].pairs.clone(),
                    score: gap_penalty + row[j + 1].score,
                };

                [matched, skip_g, skip_f]
                    .into_iter()
                    .max_by(preference)
                    .expect("three candidates")
            };
        }
        best[i] = row;
    }

    best.swap_remove(0).swap_remove(0)
}

/// Exhaustive search over all monotonic partial matchings, using the same
/// objective and tie-break as [`align`].
///
/// Panics if either input is longer than [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_align<G, F, S>(g: &[G], f: &[F], scorer: S, gap_penalty: f64) -> Alignment
where
    S: Fn(&G, &F) -> f64,
{
    assert!(
        g.len() <= BRUTE_FORCE_LIMIT && f.len() <= BRUTE_FORCE_LIMIT,
        "brute force alignment is limited to {} elements per side",
        BRUTE_FORCE_LIMIT
    );

    let scores = score_matrix(g, f, scorer);
    let mut best: Option<Alignment> = None;
    let mut pairs = Vec::new();
    enumerate(
        &scores,
        g.len(),
        f.len(),
        gap_penalty,
        0,
        0,
        &mut pairs,
        &mut best,
    );
    best.expect("the empty alignment always exists")
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    scores: &[Vec<f64>],
    n: usize,
    m: usize,
    gap_penalty: f64,
    i: usize,
    min_j: usize,
    pairs: &mut Vec<(usize, usize)>,
    best: &mut Option<Alignment>,
) {
    if i == n {
        let matched: f64 = pairs.iter().map(|&(gi, fj)| scores[gi][fj]).sum();
        let gaps = (n - pairs.len()) + (m - pairs.len());
        let candidate = Alignment {
            pairs: pairs.clone(),
            score: matched + gap_penalty * gaps as f64,
        };
        let better = match best {
            None => true,
            Some(current) => preference(&candidate, current) == Ordering::Greater,
        };
        if better {
            *best = Some(candidate);
        }
        return;
    }

    enumerate(scores, n, m, gap_penalty, i + 1, min_j, pairs, best);
    for j in min_j..m {
        pairs.push((i, j));
        enumerate(scores, n, m, gap_penalty, i + 1, j + 1, pairs, best);
        pairs.pop();
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::{align, brute_force_align, Alignment};

    #[test]
    fn subject_object_alignment() {
        let g = [("Mary", "PROPN"), ("flowers", "NOUN")];
        let f = [("John", "PROPN"), ("books", "NOUN")];
        let scorer = |a: &(&str, &str), b: &(&str, &str)| if a.1 == b.1 { 0.0 } else { -2.0 };
        let alignment = align(&g, &f, scorer, -4.0);
        assert_eq!(alignment.pairs, vec![(0, 0), (1, 1)]);
        assert_eq!(alignment.score, 0.0);
    }

    #[test]
    fn empty_g() {
        let f = [1, 2, 3];
        let alignment = align::<i32, i32, _>(&[], &f, |_, _| 0.0, -4.0);
        assert!(alignment.pairs.is_empty());
        assert_eq!(alignment.score, -12.0);
        assert_eq!(align::<i32, i32, _>(&[], &[], |_, _| 0.0, -4.0).score, 0.0);
    }

    #[test]
    fn gaps_beat_bad_match() {
        let alignment = brute_force_align(&[0], &[0], |_, _| -5.0, -1.0);
        assert_eq!(
            alignment,
            Alignment {
                pairs: vec![],
                score: -2.0
            }
        );
        assert_eq!(align(&[0], &[0], |_, _| -5.0, -1.0), alignment);
    }

    #[test]
    fn identity_favouring_scorer() {
        let scorer = |a: &usize, b: &usize| if a == b { 0.0 } else { -3.0 };
        let alignment = brute_force_align(&[0, 1], &[0, 1], scorer, -4.0);
        assert_eq!(alignment.pairs, vec![(0, 0), (1, 1)]);
        assert_eq!(
            align(&[0, 1], &[0, 1], scorer, -4.0).pairs,
            vec![(0, 0), (1, 1)]
        );
    }

    #[test]
    fn tie_prefers_more_pairs() {
        // Matching costs exactly two gaps.
        let alignment = align(&[0], &[0], |_, _| -2.0, -1.0);
        assert_eq!(alignment.pairs, vec![(0, 0)]);
    }

    #[test]
    fn tie_prefers_lexicographically_smallest() {
        let alignment = align(&[0], &[0, 1, 2], |_, _| 0.0, -1.0);
        assert_eq!(alignment.pairs, vec![(0, 0)]);
        let alignment = brute_force_align(&[0], &[0, 1, 2], |_, _| 0.0, -1.0);
        assert_eq!(alignment.pairs, vec![(0, 0)]);
    }

    #[test]
    #[should_panic]
    fn brute_force_size_bound() {
        brute_force_align(&[0; 9], &[0; 2], |_, _| 0.0, -1.0);
    }

    fn instance() -> impl Strategy<Value = (Vec<Vec<f64>>, f64)> {
        (0usize..=5, 0usize..=5).prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(prop::collection::vec((-8i32..=0).prop_map(f64::from), m), n),
                (-5i32..=0).prop_map(f64::from),
            )
        })
    }

    fn run(matrix: &[Vec<f64>], gap: f64, brute: bool) -> Alignment {
        let n = matrix.len();
        let m = matrix.first().map(Vec::len).unwrap_or(0);
        let g: Vec<usize> = (0..n).collect();
        let f: Vec<usize> = (0..m).collect();
        let scorer = |a: &usize, b: &usize| matrix[*a][*b];
        if brute {
            brute_force_align(&g, &f, scorer, gap)
        } else {
            align(&g, &f, scorer, gap)
        }
    }

    proptest! {
        #[test]
        fn matches_oracle((matrix, gap) in instance()) {
            let dp = run(&matrix, gap, false);
            let oracle = run(&matrix, gap, true);
            prop_assert!(dp.is_monotonic());
            prop_assert_eq!(dp, oracle);
        }

        #[test]
        fn scale_covariance((matrix, gap) in instance(), factor in 1u32..6) {
            let k = f64::from(factor);
            let scaled: Vec<Vec<f64>> = matrix.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
            prop_assert_eq!(run(&matrix, gap, false).pairs, run(&scaled, gap * k, false).pairs);
        }

        #[test]
        fn unalignable_extra_element((matrix, gap) in instance()) {
            // An extra F element that scores below two gaps everywhere is
            // never aligned and costs exactly one gap.
            let base = run(&matrix, gap, false);
            let extended: Vec<Vec<f64>> = matrix.iter().map(|r| {
                let mut r = r.clone();
                r.push(2.0 * gap - 100.0);
                r
            }).collect();
            if !matrix.is_empty() {
                let more = run(&extended, gap, false);
                prop_assert_eq!(&more.pairs, &base.pairs);
                prop_assert!((more.score - (base.score + gap)).abs() < 1e-9);
            }
        }
    }
}
