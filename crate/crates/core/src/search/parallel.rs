//! Splits the search tree at a fixed decision depth and searches the
//! resulting subtrees on worker threads.
//!
//! The outcome, including the node count, is exactly what a single engine
//! would report: subtree results are combined in tree order, a witness in an
//! earlier subtree always wins, and a node limit is charged as if the
//! subtrees had been visited one after another.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::engine::{Engine, Leaf, Order, Step};

/// Result of one search over a fixed interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Run {
    pub step: Step,
    pub colors: Option<Vec<u8>>,
    pub nodes: u64,
}

/// Subtrees per worker; more keeps threads busy when subtree sizes vary.
const LEAVES_PER_WORKER: usize = 32;

fn split_depth(n: usize, r: usize, workers: usize) -> usize {
    let target = workers * LEAVES_PER_WORKER;
    let mut depth = 0;
    let mut width = 1usize;
    while width < target && depth < n {
        width = width.saturating_mul(r);
        depth += 1;
    }
    depth
}

pub(crate) fn search(n: usize, r: usize, k: usize, limit: u64, order: Order<'_>, workers: usize) -> Run {
    if workers <= 1 {
        let mut e = Engine::new(n, r, k, limit, order);
        let step = e.run();
        let colors = (step == Step::Found).then(|| e.colors().to_vec());
        return Run {
            step,
            colors,
            nodes: e.nodes(),
        };
    }

    // The splitter walks the whole top of the tree, which a sequential run
    // interleaves with the subtrees; the replay below applies the limit.
    let mut splitter = Engine::new(n, r, k, u64::MAX, order);
    let (top, leaves) = splitter.split(split_depth(n, r, workers));
    let top_colors = (top == Step::Found).then(|| splitter.colors().to_vec());

    let results = search_leaves(n, r, k, limit, order, workers, &leaves);

    // Replay in tree order.
    let mut subtree_nodes = 0u64;
    for (leaf, (step, nodes, colors)) in leaves.iter().zip(results) {
        let start = leaf.nodes_before + subtree_nodes;
        if start > limit {
            break;
        }
        if step == Step::Exhausted || start + nodes > limit {
            return Run {
                step: Step::Exhausted,
                colors: None,
                nodes: limit,
            };
        }
        if step == Step::Found {
            return Run {
                step,
                colors,
                nodes: start + nodes,
            };
        }
        debug_assert_eq!(step, Step::Refuted);
        subtree_nodes += nodes;
    }
    let nodes = splitter.nodes() + subtree_nodes;
    if nodes > limit {
        return Run {
            step: Step::Exhausted,
            colors: None,
            nodes: limit,
        };
    }
    Run {
        step: if top == Step::Found { Step::Found } else { Step::Refuted },
        colors: top_colors,
        nodes,
    }
}

type LeafResult = (Step, u64, Option<Vec<u8>>);

fn search_leaves(
    n: usize,
    r: usize,
    k: usize,
    limit: u64,
    order: Order<'_>,
    workers: usize,
    leaves: &[Leaf],
) -> Vec<LeafResult> {
    let next = AtomicUsize::new(0);
    // Lowest index of a leaf that ends the replay (witness or limit hit);
    // leaves after it cannot affect the outcome.
    let cutoff = AtomicUsize::new(usize::MAX);
    let results: Mutex<Vec<Option<LeafResult>>> = Mutex::new(vec![None; leaves.len()]);

    std::thread::scope(|scope| {
        for _ in 0..workers.min(leaves.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= leaves.len() {
                    break;
                }
                let leaf = &leaves[i];
                let result = if i > cutoff.load(Ordering::Relaxed) {
                    (Step::Aborted, 0, None)
                } else {
                    let abort = || i > cutoff.load(Ordering::Relaxed);
                    let budget = limit.saturating_sub(leaf.nodes_before);
                    let mut e = Engine::new(n, r, k, budget, order).with_abort(&abort);
                    let step = e.run_from(leaf);
                    if matches!(step, Step::Found | Step::Exhausted) {
                        cutoff.fetch_min(i, Ordering::Relaxed);
                    }
                    let colors = (step == Step::Found).then(|| e.colors().to_vec());
                    (step, e.nodes(), colors)
                };
                results.lock().expect("no worker panicked")[i] = Some(result);
            });
        }
    });

    let results = results.into_inner().expect("no worker panicked");
    let end = cutoff.into_inner().saturating_add(1).min(leaves.len());
    results
        .into_iter()
        .take(end)
        .map(|r| r.expect("every leaf up to the cutoff was searched"))
        .collect()
}
