//! Level-synchronous breadth-first search that returns the canonical witness:
//! shortest word, ties broken by the lexicographically least index sequence.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::instance::Word;

/// How a new letter extends the word of its parent node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extend {
    /// Word grows on the right (matrix products, machine runs).
    Append,
    /// Word grows on the left (generator applied to a vector from the left).
    Prepend,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome<N> {
    Found { node: N, word: Word },
    /// Reachable set closed without a hit and nothing was discarded.
    Saturated,
    /// Frontier emptied but some nodes were dropped by the `within` filter.
    Truncated,
    /// Depth bound reached with a non-empty frontier.
    DepthExhausted,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    pub visited: usize,
}

/// Explores words of length `<= max_depth` over `letters` symbols.
///
/// `step(node, letter)` yields the successor or `None` if the letter is not
/// applicable. Successors failing `within` are discarded and turn a would-be
/// saturation into [`Outcome::Truncated`]; accepted nodes are never discarded.
/// Node identity is the deduplication key; for every node only the canonical
/// word reaching it is retained, which makes the returned witness canonical.
pub fn canonical_bfs<N, S, W, A>(
    start: N,
    letters: usize,
    extend: Extend,
    max_depth: usize,
    mut step: S,
    mut within: W,
    mut accept: A,
) -> (Outcome<N>, SearchStats)
where
    N: Clone + Eq + Hash,
    S: FnMut(&N, usize) -> Option<N>,
    W: FnMut(&N) -> bool,
    A: FnMut(&N) -> bool,
{
    let mut stats = SearchStats { visited: 1 };
    if accept(&start) {
        return (Outcome::Found { node: start, word: Vec::new() }, stats);
    }
    let mut visited: HashSet<N> = HashSet::from([start.clone()]);
    let mut frontier: Vec<(N, Word)> = vec![(start, Vec::new())];
    let mut truncated = false;

    for _ in 0..max_depth {
        let mut next: HashMap<N, Word> = HashMap::new();
        for (node, word) in &frontier {
            for letter in 0..letters {
                let Some(succ) = step(node, letter) else { continue };
                if visited.contains(&succ) {
                    continue;
                }
                if !accept(&succ) && !within(&succ) {
                    truncated = true;
                    continue;
                }
                let candidate = extended(word, letter, extend);
                match next.get_mut(&succ) {
                    Some(best) if *best <= candidate => {}
                    Some(best) => *best = candidate,
                    None => {
                        next.insert(succ, candidate);
                    }
                }
            }
        }
        if next.is_empty() {
            let outcome = if truncated { Outcome::Truncated } else { Outcome::Saturated };
            return (outcome, stats);
        }
        let mut level: Vec<(N, Word)> = next.into_iter().collect();
        level.sort_by(|a, b| a.1.cmp(&b.1));
        stats.visited += level.len();
        if let Some(pos) = level.iter().position(|(n, _)| accept(n)) {
            let (node, word) = level.swap_remove(pos);
            return (Outcome::Found { node, word }, stats);
        }
        for (n, _) in &level {
            visited.insert(n.clone());
        }
        frontier = level;
    }
    (Outcome::DepthExhausted, stats)
}

fn extended(word: &Word, letter: usize, extend: Extend) -> Word {
    let mut w = Vec::with_capacity(word.len() + 1);
    match extend {
        Extend::Append => {
            w.extend_from_slice(word);
            w.push(letter);
        }
        Extend::Prepend => {
            w.push(letter);
            w.extend_from_slice(word);
        }
    }
    w
}
