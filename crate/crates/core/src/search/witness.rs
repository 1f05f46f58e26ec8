//! Text form of a witness coloring.
//!
//! ```text
//! 2 3 8
//! 00110011
//! ```
//!
//! The first line is `r k N`, the second the colors of positions `1..=N`.

use std::fmt;
use std::str::FromStr;

use super::{has_mono_ap, Coloring, SearchError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFile {
    pub k: usize,
    pub coloring: Coloring,
}

impl WitnessFile {
    pub fn new(k: usize, coloring: Coloring) -> Self {
        Self { k, coloring }
    }

    /// True when the coloring has no monochromatic `k`-AP (full scan).
    pub fn is_valid(&self) -> bool {
        !has_mono_ap(&self.coloring, self.k)
    }
}

impl fmt::Display for WitnessFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} {}",
            self.coloring.num_colors(),
            self.k,
            self.coloring.n_points()
        )?;
        writeln!(f, "{}", self.coloring.digits())
    }
}

impl FromStr for WitnessFile {
    type Err = SearchError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| SearchError::Parse("empty witness file".into()))?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| SearchError::Parse(format!("bad header field {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        let [r, k, n] = fields[..] else {
            return Err(SearchError::Parse(format!(
                "header must be `r k N`, got {header:?}"
            )));
        };
        let body = lines.next().unwrap_or("");
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(SearchError::Parse("trailing content after colors".into()));
        }
        let coloring = Coloring::parse_digits(r, body).map_err(|e| match e {
            SearchError::Domain(m) => SearchError::Parse(m),
            other => other,
        })?;
        if coloring.n_points() != n {
            return Err(SearchError::Parse(format!(
                "header says {n} positions, found {}",
                coloring.n_points()
            )));
        }
        Ok(Self { k, coloring })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let w = WitnessFile::new(3, Coloring::parse_digits(2, "00110011").unwrap());
        let text = w.to_string();
        assert_eq!(text, "2 3 8\n00110011\n");
        assert_eq!(text.parse::<WitnessFile>().unwrap(), w);
        assert!(w.is_valid());
    }

    #[test]
    fn flipped_color_is_invalid() {
        let w: WitnessFile = "2 3 8\n00010011\n".parse().unwrap();
        assert!(!w.is_valid());
    }

    #[test]
    fn malformed() {
        for bad in ["", "2 3\n01\n", "2 3 3\n01\n", "2 3 2\n0a\n", "2 3 2\n02\n", "x 3 2\n01\n", "2 3 2\n01\n11\n"] {
            assert!(bad.parse::<WitnessFile>().is_err(), "{bad:?}");
        }
        let empty: WitnessFile = "2 1 0\n".parse().unwrap();
        assert_eq!(empty.coloring.n_points(), 0);
    }
}
