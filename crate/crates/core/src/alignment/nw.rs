use crate::error::{Error, Result};
use crate::grapheme::Grapheme;

/// Scoring constants for global alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignmentParams {
    pub match_score: i32,
    pub mismatch_score: i32,
    pub gap_penalty: i32,
}

impl Default for AlignmentParams {
    fn default() -> Self {
        AlignmentParams {
            match_score: 1,
            mismatch_score: -1,
            gap_penalty: -1,
        }
    }
}

/// One alignment column; `None` is a gap. Never both `None`.
pub type Column = (Option<Grapheme>, Option<Grapheme>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub score: i32,
    pub columns: Vec<Column>,
}

impl Alignment {
    /// Debug rendering, `−` for gaps: `(ف/و)(ی/ی)(ە/−)`.
    pub fn render(&self) -> String {
        let side = |g: &Option<Grapheme>| g.as_ref().map_or("−".to_string(), |g| g.as_str().to_string());
        self.columns
            .iter()
            .map(|(a, b)| format!("({}/{})", side(a), side(b)))
            .collect()
    }
}

#[derive(Clone, Copy)]
enum Step {
    Diag,
    Up,
    Left,
}

/// Global alignment maximizing matches. On equal scores the traceback
/// prefers the diagonal, then a gap in `b`, then a gap in `a`.
pub fn needleman_wunsch(a: &[Grapheme], b: &[Grapheme], params: &AlignmentParams) -> Result<Alignment> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("cannot align an empty sequence".into()));
    }
    let (n, m) = (a.len(), b.len());
    let w = params.gap_penalty;
    let mut d = vec![0i32; (n + 1) * (m + 1)];
    let at = |i: usize, j: usize| i * (m + 1) + j;
    for i in 1..=n {
        d[at(i, 0)] = i as i32 * w;
    }
    for j in 1..=m {
        d[at(0, j)] = j as i32 * w;
    }
    for i in 1..=n {
        for j in 1..=m {
            let s = if a[i - 1] == b[j - 1] {
                params.match_score
            } else {
                params.mismatch_score
            };
            d[at(i, j)] = (d[at(i - 1, j - 1)] + s)
                .max(d[at(i - 1, j)] + w)
                .max(d[at(i, j - 1)] + w);
        }
    }

    let mut columns = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[at(i, j)];
        let step = if i > 0 && j > 0 {
            let s = if a[i - 1] == b[j - 1] {
                params.match_score
            } else {
                params.mismatch_score
            };
            if here == d[at(i - 1, j - 1)] + s {
                Step::Diag
            } else if here == d[at(i - 1, j)] + w {
                Step::Up
            } else {
                Step::Left
            }
        } else if i > 0 {
            Step::Up
        } else {
            Step::Left
        };
        match step {
            Step::Diag => {
                columns.push((Some(a[i - 1].clone()), Some(b[j - 1].clone())));
                i -= 1;
                j -= 1;
            }
            Step::Up => {
                columns.push((Some(a[i - 1].clone()), None));
                i -= 1;
            }
            Step::Left => {
                columns.push((None, Some(b[j - 1].clone())));
                j -= 1;
            }
        }
    }
    columns.reverse();
    Ok(Alignment {
        score: d[at(n, m)],
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Vec<Grapheme> {
        s.chars().map(Grapheme::from_char).collect()
    }

    #[test]
    fn identity() {
        let al = needleman_wunsch(&g("abc"), &g("abc"), &AlignmentParams::default()).unwrap();
        assert_eq!(al.score, 3);
        assert!(al.columns.iter().all(|(a, b)| a.is_some() && b.is_some()));
    }

    #[test]
    fn leading_gap() {
        let al = needleman_wunsch(&g("ab"), &g("b"), &AlignmentParams::default()).unwrap();
        assert_eq!(al.score, 0);
        assert_eq!(al.render(), "(a/−)(b/b)");
    }

    #[test]
    fn vietnam() {
        let al = needleman_wunsch(&g("فیەتنام"), &g("ویتنام"), &AlignmentParams::default()).unwrap();
        assert_eq!(al.score, 3);
        assert_eq!(al.render(), "(ف/و)(ی/ی)(ە/−)(ت/ت)(ن/ن)(ا/ا)(م/م)");
    }

    #[test]
    fn rejects_empty() {
        assert!(needleman_wunsch(&[], &g("a"), &AlignmentParams::default()).is_err());
    }
}
