//! Depth-first coloring search with constraint propagation.
//!
//! After every branch the engine propagates the "no monochromatic `k`-AP"
//! constraints over the whole interval: whenever a progression has `k - 1`
//! members of color `c`, color `c` is struck from the remaining member, and a
//! position left with a single color is colored immediately. A position left
//! with no color refutes the branch. Propagation only discards colorings that
//! contain a monochromatic progression.
//!
//! Two branching orders are available:
//!
//! * [`Order::Lexicographic`] branches on positions left to right, colors in
//!   ascending order, so the first coloring reached is the lexicographically
//!   least one. A `floor` coloring lets the search start part way through the
//!   tree when everything below it is already known to be refuted.
//! * [`Order::Constrained`] branches on the uncolored position with the fewest
//!   colors left (ties go to the position nearest the middle, then the
//!   leftmost), trying a hinted color first. It refutes much faster but the
//!   coloring it finds is not the lexicographically least one.
//!
//! In both orders colors are interchangeable, so a color that does not occur
//! yet is only ever tried as the next unused index.

use super::bitset::{clear, set, test, words_for};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    Found,
    Refuted,
    Exhausted,
    Aborted,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Order<'a> {
    Lexicographic { floor: &'a [u8] },
    Constrained { hint: &'a [u8] },
}

/// A subtree root produced by [`Engine::split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Leaf {
    /// Branch decisions from the root, in order.
    pub decisions: Vec<(usize, u8)>,
    /// Nodes counted by the splitting pass up to and including this leaf.
    pub nodes_before: u64,
}

const ABORT_POLL_MASK: u64 = (1 << 12) - 1;
const UNMAPPED: u8 = u8::MAX;

pub(crate) struct Engine<'a> {
    n: usize,
    r: usize,
    k: usize,
    words: usize,
    /// Per level: `r` occupancy sets followed by `r` availability sets.
    stride: usize,
    levels: Vec<u64>,
    order: Order<'a>,
    /// Per level: hint color -> search color, for colors matched so far.
    hint_maps: Vec<u8>,
    path: Vec<(usize, u8)>,
    queue: Vec<(usize, usize)>,
    strikes: Vec<u64>,
    counts: Vec<u64>,
    colors: Vec<u8>,
    nodes: u64,
    limit: u64,
    abort: Option<&'a (dyn Fn() -> bool + Sync)>,
    split_depth: Option<usize>,
    leaves: Vec<Leaf>,
}

impl<'a> Engine<'a> {
    pub fn new(n: usize, r: usize, k: usize, limit: u64, order: Order<'a>) -> Self {
        debug_assert!((2..usize::from(UNMAPPED)).contains(&r) && k >= 2);
        let words = words_for(n);
        let stride = 2 * r * words;
        let mut levels = vec![0u64; (n + 1) * stride];
        for c in 0..r {
            let avail = &mut levels[(r + c) * words..(r + c + 1) * words];
            for i in 0..n {
                set(avail, i);
            }
        }
        Self {
            n,
            r,
            k,
            words,
            stride,
            levels,
            order,
            hint_maps: vec![UNMAPPED; (n + 1) * r],
            path: Vec::with_capacity(n),
            queue: Vec::with_capacity(n),
            strikes: vec![0; words],
            counts: vec![0; r + 2],
            colors: vec![0; n],
            nodes: 0,
            limit,
            abort: None,
            split_depth: None,
            leaves: Vec::new(),
        }
    }

    pub fn with_abort(mut self, abort: &'a (dyn Fn() -> bool + Sync)) -> Self {
        self.abort = Some(abort);
        self
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// The coloring reached by the last `Found` step.
    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn run(&mut self) -> Step {
        self.descend(0)
    }

    /// Walks the tree down to `depth` branch decisions and records every
    /// surviving node there instead of descending further. Returns `Found`
    /// only when a complete coloring is reached above `depth`.
    pub fn split(&mut self, depth: usize) -> (Step, Vec<Leaf>) {
        self.split_depth = Some(depth);
        let step = self.descend(0);
        self.split_depth = None;
        (step, std::mem::take(&mut self.leaves))
    }

    /// Searches the subtree under `leaf`; the decisions leading to it are not
    /// counted again.
    pub fn run_from(&mut self, leaf: &Leaf) -> Step {
        for (level, &(p, c)) in leaf.decisions.iter().enumerate() {
            self.enter(level, p, c as usize);
            let ok = self.commit(level + 1, p, c as usize);
            debug_assert!(ok, "split leaves are consistent");
        }
        self.descend(leaf.decisions.len())
    }

    #[inline]
    fn occ(&self, level: usize, c: usize) -> &[u64] {
        let base = level * self.stride + c * self.words;
        &self.levels[base..base + self.words]
    }

    #[inline]
    fn avail(&self, level: usize, c: usize) -> &[u64] {
        self.occ(level, self.r + c)
    }

    fn color_at(&self, level: usize, p: usize) -> Option<usize> {
        (0..self.r).find(|&c| test(self.occ(level, c), p))
    }

    /// Copies `level` into `level + 1` and records the decision `p := c`.
    fn enter(&mut self, level: usize, p: usize, c: usize) {
        let (cur, next) = self.levels.split_at_mut((level + 1) * self.stride);
        next[..self.stride].copy_from_slice(&cur[level * self.stride..]);
        self.path.truncate(level);
        self.path.push((p, c as u8));
        let r = self.r;
        let (cur, next) = self.hint_maps.split_at_mut((level + 1) * r);
        next[..r].copy_from_slice(&cur[level * r..]);
        if let Order::Constrained { hint } = self.order {
            if let Some(&h) = hint.get(p) {
                let map = &mut next[..r];
                if (h as usize) < r && map[h as usize] == UNMAPPED && !map.contains(&(c as u8)) {
                    map[h as usize] = c as u8;
                }
            }
        }
    }

    fn descend(&mut self, level: usize) -> Step {
        let Some(p) = self.next_position(level) else {
            for i in 0..self.n {
                self.colors[i] = self.color_at(level, i).expect("complete coloring") as u8;
            }
            return Step::Found;
        };
        let Some((first, end, preferred)) = self.branch_colors(level, p) else {
            return Step::Refuted;
        };
        if self.split_depth == Some(level) {
            self.leaves.push(Leaf {
                decisions: self.path[..level].to_vec(),
                nodes_before: self.nodes,
            });
            return Step::Refuted;
        }
        let candidates = preferred
            .into_iter()
            .chain((first..end).filter(move |&c| Some(c) != preferred));
        for c in candidates {
            if !test(self.avail(level, c), p) {
                continue;
            }
            if self.nodes >= self.limit {
                return Step::Exhausted;
            }
            self.nodes += 1;
            if self.nodes & ABORT_POLL_MASK == 0 {
                if let Some(abort) = self.abort {
                    if abort() {
                        return Step::Aborted;
                    }
                }
            }
            self.enter(level, p, c);
            let step = if self.commit(level + 1, p, c) {
                self.descend(level + 1)
            } else {
                Step::Refuted
            };
            if step != Step::Refuted {
                return step;
            }
        }
        Step::Refuted
    }

    /// The next position to branch on, or `None` when everything is colored.
    fn next_position(&mut self, level: usize) -> Option<usize> {
        match self.order {
            Order::Lexicographic { .. } => (0..self.n).find(|&p| self.color_at(level, p).is_none()),
            Order::Constrained { .. } => self.most_constrained(level),
        }
    }

    /// Colors to try at `p`: the range `first..end` plus an optional color to
    /// try before the others. `None` when the lexicographic floor rules out
    /// the whole subtree.
    fn branch_colors(&self, level: usize, p: usize) -> Option<(usize, usize, Option<usize>)> {
        match self.order {
            Order::Lexicographic { floor } => {
                // Every position before p is colored. Only colors seen to the
                // left count as used; fresh colors must appear in order.
                let mut used = 0;
                let mut on_floor = true;
                for i in 0..p {
                    let c = self.color_at(level, i).expect("colored prefix");
                    used = used.max(c + 1);
                    if on_floor && i < floor.len() {
                        let f = floor[i] as usize;
                        if c < f {
                            return None;
                        }
                        on_floor = c == f;
                    }
                }
                let first = if on_floor && p < floor.len() {
                    floor[p] as usize
                } else {
                    0
                };
                Some((first, (used + 1).min(self.r), None))
            }
            Order::Constrained { hint } => {
                let used = (0..self.r)
                    .rev()
                    .find(|&c| self.occ(level, c).iter().any(|&w| w != 0))
                    .map_or(0, |c| c + 1);
                let end = (used + 1).min(self.r);
                let map = &self.hint_maps[level * self.r..(level + 1) * self.r];
                // An unmatched hint color stands for the next fresh color.
                let preferred = hint
                    .get(p)
                    .and_then(|&h| map.get(h as usize))
                    .map(|&m| if m == UNMAPPED { used } else { usize::from(m) })
                    .filter(|&m| m < end);
                Some((0, end, preferred))
            }
        }
    }

    /// Uncolored position with the fewest colors left; ties go to the position
    /// nearest the middle, then to the leftmost.
    fn most_constrained(&mut self, level: usize) -> Option<usize> {
        let (n, r, words) = (self.n, self.r, self.words);
        let base = level * self.stride;
        let mut best: Option<(usize, usize, usize)> = None;
        for wi in 0..words {
            let mut colored = 0u64;
            for c in 0..r {
                colored |= self.levels[base + c * words + wi];
            }
            let valid = if (wi + 1) * 64 <= n {
                u64::MAX
            } else {
                (1u64 << (n - wi * 64)) - 1
            };
            let open = valid & !colored;
            if open == 0 {
                continue;
            }
            // counts[j]: positions with at least j colors available.
            let counts = &mut self.counts;
            counts.fill(0);
            counts[0] = u64::MAX;
            for c in 0..r {
                let a = self.levels[base + (r + c) * words + wi];
                for j in (1..=c + 1).rev() {
                    counts[j] |= counts[j - 1] & a;
                }
            }
            for j in 1..=r {
                let exact = open & counts[j] & !counts[j + 1];
                if exact == 0 {
                    continue;
                }
                if best.is_some_and(|(bj, _, _)| bj < j) {
                    break;
                }
                let mut m = exact;
                while m != 0 {
                    let z = (wi << 6) | m.trailing_zeros() as usize;
                    m &= m - 1;
                    let cand = (j, (2 * z).abs_diff(n - 1), z);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
                break;
            }
        }
        best.map(|(_, _, z)| z)
    }

    /// Colors `p` with `c` at `level` and propagates to a fixed point.
    /// Returns false on contradiction.
    fn commit(&mut self, level: usize, p: usize, c: usize) -> bool {
        self.queue.clear();
        self.queue.push((p, c));
        while let Some((x, c)) = self.queue.pop() {
            if !self.assign(level, x, c) {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, level: usize, x: usize, c: usize) -> bool {
        let (n, r, k, words) = (self.n, self.r, self.k, self.words);
        let base = level * self.stride;
        let state = &mut self.levels[base..base + self.stride];
        let occ_at = c * words;
        if test(&state[occ_at..occ_at + words], x) {
            return true;
        }
        if !test(&state[(r + c) * words..(r + c + 1) * words], x) {
            return false;
        }
        set(&mut state[occ_at..occ_at + words], x);
        for other in (0..r).filter(|&o| o != c) {
            clear(&mut state[(r + other) * words..(r + other + 1) * words], x);
        }

        // Collect every position that would complete a progression of color c.
        let (occs, avails) = state.split_at_mut(r * words);
        let occ = &occs[occ_at..occ_at + words];
        let strikes = &mut self.strikes;
        strikes.fill(0);
        if k == 3 {
            for (wi, &word) in occ.iter().enumerate() {
                let mut m = word;
                while m != 0 {
                    let y = (wi << 6) | m.trailing_zeros() as usize;
                    m &= m - 1;
                    if y == x {
                        continue;
                    }
                    let (lo, hi) = if y < x { (y, x) } else { (x, y) };
                    let d = hi - lo;
                    if lo >= d {
                        set(strikes, lo - d);
                    }
                    if hi + d < n {
                        set(strikes, hi + d);
                    }
                    if d % 2 == 0 {
                        set(strikes, lo + d / 2);
                    }
                }
            }
        } else {
            // x sits at index j of a progression a, a+d, ..., a+(k-1)d.
            for j in 0..k {
                let mut d = 1;
                while j * d <= x && x + (k - 1 - j) * d < n {
                    let a = x - j * d;
                    let mut missing = None;
                    let mut misses = 0;
                    for i in (0..k).filter(|&i| i != j) {
                        let m = a + i * d;
                        if !test(occ, m) {
                            misses += 1;
                            if misses > 1 {
                                break;
                            }
                            missing = Some(m);
                        }
                    }
                    match (misses, missing) {
                        (0, _) => return false,
                        (1, Some(z)) => set(strikes, z),
                        _ => {}
                    }
                    d += 1;
                }
            }
        }

        for wi in 0..words {
            let hit = strikes[wi] & avails[c * words + wi];
            if hit == 0 {
                continue;
            }
            avails[c * words + wi] &= !hit;
            let (mut one, mut two) = (0u64, 0u64);
            for cc in 0..r {
                let a = avails[cc * words + wi];
                two |= one & a;
                one |= a;
            }
            if hit & !one != 0 {
                return false;
            }
            let mut forced = hit & !two;
            while forced != 0 {
                let bit = forced.trailing_zeros() as usize;
                forced &= forced - 1;
                let only = (0..r)
                    .find(|&cc| (avails[cc * words + wi] >> bit) & 1 == 1)
                    .expect("exactly one color left");
                self.queue.push(((wi << 6) | bit, only));
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEX: Order<'static> = Order::Lexicographic { floor: &[] };
    const MRV: Order<'static> = Order::Constrained { hint: &[] };

    #[test]
    fn finds_lexicographically_least_witness() {
        let mut e = Engine::new(8, 2, 3, u64::MAX, LEX);
        assert_eq!(e.run(), Step::Found);
        assert_eq!(e.colors(), &[0, 0, 1, 1, 0, 0, 1, 1]);
    }

    #[test]
    fn both_orders_refute_nine_points() {
        for order in [LEX, MRV] {
            let mut e = Engine::new(9, 2, 3, u64::MAX, order);
            assert_eq!(e.run(), Step::Refuted);
        }
    }

    #[test]
    fn honours_node_limit() {
        let mut e = Engine::new(34, 2, 4, 5, LEX);
        assert_eq!(e.run(), Step::Exhausted);
        assert_eq!(e.nodes(), 5);
    }

    #[test]
    fn floor_skips_smaller_prefixes_without_changing_the_answer() {
        let mut plain = Engine::new(20, 3, 3, u64::MAX, LEX);
        assert_eq!(plain.run(), Step::Found);
        let mut shorter = Engine::new(19, 3, 3, u64::MAX, LEX);
        assert_eq!(shorter.run(), Step::Found);
        let floor = shorter.colors().to_vec();
        let mut resumed = Engine::new(20, 3, 3, u64::MAX, Order::Lexicographic { floor: &floor });
        assert_eq!(resumed.run(), Step::Found);
        assert_eq!(resumed.colors(), plain.colors());
        assert!(resumed.nodes() <= plain.nodes());
    }

    #[test]
    fn hint_that_is_a_solution_is_followed() {
        let mut lex = Engine::new(26, 3, 3, u64::MAX, LEX);
        assert_eq!(lex.run(), Step::Found);
        let hint = lex.colors().to_vec();
        let mut e = Engine::new(26, 3, 3, u64::MAX, Order::Constrained { hint: &hint });
        assert_eq!(e.run(), Step::Found);
        assert_eq!(super::super::coloring::canonical_labels(e.colors()), hint);
        assert!(e.nodes() <= 26);
    }

    fn split_and_sum(n: usize, r: usize, k: usize, order: Order<'_>, depth: usize) -> (Option<Vec<u8>>, u64) {
        let mut splitter = Engine::new(n, r, k, u64::MAX, order);
        let (step, leaves) = splitter.split(depth);
        let mut subtree_total = 0;
        for leaf in &leaves {
            let mut e = Engine::new(n, r, k, u64::MAX, order);
            if e.run_from(leaf) == Step::Found {
                return (Some(e.colors().to_vec()), leaf.nodes_before + subtree_total + e.nodes());
            }
            subtree_total += e.nodes();
        }
        let witness = (step == Step::Found).then(|| splitter.colors().to_vec());
        (witness, splitter.nodes() + subtree_total)
    }

    #[test]
    fn split_then_resume_matches_direct_run() {
        for order in [LEX, MRV] {
            for (n, r, k) in [(5, 2, 3), (26, 3, 3), (27, 3, 3), (34, 2, 4), (35, 2, 4)] {
                let mut direct = Engine::new(n, r, k, u64::MAX, order);
                let found = direct.run() == Step::Found;
                for depth in [1, 3, 6] {
                    let (witness, nodes) = split_and_sum(n, r, k, order, depth);
                    assert_eq!(witness.is_some(), found);
                    if let Some(w) = witness {
                        assert_eq!(w.as_slice(), direct.colors());
                    }
                    assert_eq!(nodes, direct.nodes(), "{order:?} n={n} r={r} k={k} depth={depth}");
                }
            }
        }
    }
}
