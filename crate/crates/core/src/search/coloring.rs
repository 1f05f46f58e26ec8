use std::fmt;

use serde::{Deserialize, Serialize};

use super::SearchError;

/// An assignment of one of `num_colors` colors to each integer in `[1, n_points]`.
///
/// `assignment[i]` is the color of the integer `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    num_colors: usize,
    assignment: Vec<u8>,
}

impl Coloring {
    pub fn new(num_colors: usize, assignment: Vec<u8>) -> Result<Self, SearchError> {
        if !(2..=256).contains(&num_colors) {
            return Err(SearchError::Domain(format!(
                "number of colors must lie in [2, 256], got {num_colors}"
            )));
        }
        if let Some((i, &c)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &c)| c as usize >= num_colors)
        {
            return Err(SearchError::Domain(format!(
                "position {} has color {c}, outside [0, {}]",
                i + 1,
                num_colors - 1
            )));
        }
        Ok(Self {
            num_colors,
            assignment,
        })
    }

    /// The empty coloring of `[1, 0]`.
    pub fn empty(num_colors: usize) -> Result<Self, SearchError> {
        Self::new(num_colors, Vec::new())
    }

    pub(crate) fn from_raw(num_colors: usize, assignment: Vec<u8>) -> Self {
        debug_assert!(assignment.iter().all(|&c| (c as usize) < num_colors));
        Self {
            num_colors,
            assignment,
        }
    }

    pub fn n_points(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    /// Color of the integer `pos` (1-based).
    pub fn color_of(&self, pos: usize) -> Option<u8> {
        pos.checked_sub(1).and_then(|i| self.assignment.get(i).copied())
    }

    /// Returns a copy with the color at `pos` (1-based) replaced.
    pub fn with_color(&self, pos: usize, color: u8) -> Result<Self, SearchError> {
        if pos == 0 || pos > self.n_points() {
            return Err(SearchError::Domain(format!(
                "position {pos} outside [1, {}]",
                self.n_points()
            )));
        }
        let mut assignment = self.assignment.clone();
        assignment[pos - 1] = color;
        Self::new(self.num_colors, assignment)
    }

    /// Renders the assignment as color digits (`0`-`9`) when `num_colors <= 10`,
    /// otherwise as comma-separated integers.
    pub fn digits(&self) -> String {
        if self.num_colors <= 10 {
            self.assignment
                .iter()
                .map(|&c| char::from(b'0' + c))
                .collect()
        } else {
            self.assignment
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Inverse of [`Coloring::digits`].
    pub fn parse_digits(num_colors: usize, text: &str) -> Result<Self, SearchError> {
        let text = text.trim();
        let assignment = if text.is_empty() {
            Vec::new()
        } else if num_colors <= 10 {
            text.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| SearchError::Parse(format!("invalid color digit {ch:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        } else {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u8>()
                        .map_err(|_| SearchError::Parse(format!("invalid color {tok:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Self::new(num_colors, assignment)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}

/// Relabels colors in order of first appearance, so the result is the
/// lexicographically least member of its color-permutation class.
pub(crate) fn canonical_labels(assignment: &[u8]) -> Vec<u8> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    assignment
        .iter()
        .map(|&c| {
            if map[c as usize] == u8::MAX {
                map[c as usize] = next;
                next += 1;
            }
            map[c as usize]
        })
        .collect()
}

/// Naive full scan: is there a monochromatic `k`-term arithmetic progression?
///
/// This is the verification oracle. It shares no code with the search kernel.
pub fn has_mono_ap(c: &Coloring, k: usize) -> bool {
    let n = c.n_points();
    if n == 0 || k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let col = c.assignment();
    for a in 1..=n {
        let mut d = 1;
        while a + (k - 1) * d <= n {
            let first = col[a - 1];
            if (1..k).all(|j| col[a + j * d - 1] == first) {
                return true;
            }
            d += 1;
        }
    }
    false
}

/// Is there a monochromatic `k`-AP whose last element is `pos` (1-based)?
pub fn has_mono_ap_ending_at(c: &Coloring, k: usize, pos: usize) -> Result<bool, SearchError> {
    if pos == 0 || pos > c.n_points() {
        return Err(SearchError::Domain(format!(
            "position {pos} outside [1, {}]",
            c.n_points()
        )));
    }
    if k == 0 {
        return Ok(false);
    }
    if k == 1 {
        return Ok(true);
    }
    let col = c.assignment();
    let target = col[pos - 1];
    let max_d = (pos - 1) / (k - 1);
    Ok((1..=max_d).any(|d| (1..k).all(|j| col[pos - j * d - 1] == target)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(r: usize, a: &[u8]) -> Coloring {
        Coloring::new(r, a.to_vec()).unwrap()
    }

    #[test]
    fn all_one_color_has_ap() {
        assert!(has_mono_ap(&col(2, &[0, 0, 0]), 3));
    }

    #[test]
    fn two_points_pigeonhole() {
        assert!(!has_mono_ap(&col(2, &[0, 1]), 2));
        assert!(has_mono_ap(&col(2, &[0, 1, 0]), 2));
    }

    #[test]
    fn degenerate_lengths() {
        assert!(!has_mono_ap(&col(2, &[]), 1));
        assert!(has_mono_ap(&col(2, &[1]), 1));
        assert!(!has_mono_ap(&col(2, &[]), 3));
    }

    #[test]
    fn ending_at_examples() {
        assert!(has_mono_ap_ending_at(&col(2, &[0, 0, 0]), 3, 3).unwrap());
        assert!(!has_mono_ap_ending_at(&col(2, &[0, 1, 0, 1]), 3, 4).unwrap());
        assert!(has_mono_ap_ending_at(&col(2, &[0, 1, 0, 1]), 2, 4).unwrap());
        assert!(matches!(
            has_mono_ap_ending_at(&col(2, &[0, 1]), 3, 3),
            Err(SearchError::Domain(_))
        ));
        assert!(has_mono_ap_ending_at(&col(2, &[0]), 3, 0).is_err());
    }

    #[test]
    fn every_two_coloring_of_nine_has_three_ap() {
        for mask in 0u32..(1 << 9) {
            let a: Vec<u8> = (0..9).map(|i| ((mask >> i) & 1) as u8).collect();
            assert!(has_mono_ap(&col(2, &a), 3), "mask {mask:#b}");
        }
    }

    #[test]
    fn rejects_out_of_range_colors() {
        assert!(Coloring::new(2, vec![0, 2]).is_err());
        assert!(Coloring::new(1, vec![]).is_err());
    }

    #[test]
    fn digits_roundtrip_small_and_wide() {
        let c = col(3, &[0, 2, 1, 1]);
        assert_eq!(c.digits(), "0211");
        assert_eq!(Coloring::parse_digits(3, "0211").unwrap(), c);
        let wide = col(12, &[11, 0, 10]);
        assert_eq!(wide.digits(), "11,0,10");
        assert_eq!(Coloring::parse_digits(12, "11,0,10").unwrap(), wide);
        assert!(Coloring::parse_digits(2, "01x").is_err());
        assert!(Coloring::parse_digits(2, "012").is_err());
    }
}
