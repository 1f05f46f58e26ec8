//! Word-parallel occupancy sets.
//!
//! Position `i` (0-based, standing for the integer `i + 1`) lives in bit
//! `i % 64` of word `i / 64`.

use super::Coloring;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

#[inline]
pub(crate) fn test(bits: &[u64], i: usize) -> bool {
    (bits[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
pub(crate) fn set(bits: &mut [u64], i: usize) {
    bits[i >> 6] |= 1u64 << (i & 63);
}

#[inline]
pub(crate) fn clear(bits: &mut [u64], i: usize) {
    bits[i >> 6] &= !(1u64 << (i & 63));
}

/// `dst &= src >> shift` (towards lower positions).
fn and_shifted_down(dst: &mut [u64], src: &[u64], shift: usize) {
    let w = shift / 64;
    let b = shift % 64;
    let len = src.len();
    for (i, out) in dst.iter_mut().enumerate() {
        let lo = if i + w < len { src[i + w] >> b } else { 0 };
        let hi = if b != 0 && i + w + 1 < len {
            src[i + w + 1] << (64 - b)
        } else {
            0
        };
        *out &= lo | hi;
    }
}

/// Per-color occupancy bitsets of a coloring.
#[derive(Clone, Debug)]
pub struct ColorSets {
    n: usize,
    words: usize,
    sets: Vec<u64>,
}

impl ColorSets {
    pub fn from_coloring(c: &Coloring) -> Self {
        let n = c.n_points();
        let words = words_for(n);
        let mut sets = vec![0u64; words * c.num_colors()];
        for (i, &col) in c.assignment().iter().enumerate() {
            set(&mut sets[col as usize * words..(col as usize + 1) * words], i);
        }
        Self { n, words, sets }
    }

    pub fn color(&self, c: usize) -> &[u64] {
        &self.sets[c * self.words..(c + 1) * self.words]
    }

    pub fn num_colors(&self) -> usize {
        self.sets.len() / self.words
    }

    /// For each color and common difference `d`, intersects the occupancy
    /// set with its translates by `d, 2d, ..., (k-1)d`; any surviving bit is
    /// the first term of a monochromatic progression.
    pub fn has_mono_ap(&self, k: usize) -> bool {
        if self.n == 0 || k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        (0..self.num_colors()).any(|c| self.color_has_ap(c, k))
    }

    fn color_has_ap(&self, c: usize, k: usize) -> bool {
        let max_d = (self.n - 1) / (k - 1);
        let occ = self.color(c);
        let mut acc = vec![0u64; self.words];
        for d in 1..=max_d {
            acc.copy_from_slice(occ);
            for j in 1..k {
                and_shifted_down(&mut acc, occ, j * d);
                if acc.iter().all(|&w| w == 0) {
                    break;
                }
            }
            if acc.iter().any(|&w| w != 0) {
                return true;
            }
        }
        false
    }
}

/// Bitset-accelerated counterpart of [`super::has_mono_ap`].
pub fn has_mono_ap_bitset(c: &Coloring, k: usize) -> bool {
    ColorSets::from_coloring(c).has_mono_ap(k)
}
