//! Enumeration of complete partial spreads as maximal cliques of the
//! generator disjointness graph.

use std::collections::BTreeMap;

use crate::mask::BitMask;
use crate::polar::{GenIndex, PolarSpace};

use super::{PartialSpread, Result, SpreadError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every complete partial spread, sorted by member list.
    Exhaustive,
    /// The first complete partial spread of the given size, if any.
    FirstOfSize(usize),
}

const EXHAUSTIVE_SPACES: [(u8, usize); 3] = [(2, 2), (3, 2), (2, 3)];

struct Walk<'g> {
    adj: &'g [BitMask],
    target: Option<usize>,
    found: Vec<Vec<GenIndex>>,
}

impl Walk<'_> {
    fn done(&self) -> bool {
        self.target.is_some() && !self.found.is_empty()
    }

    // Bron-Kerbosch with pivoting; `p` holds candidates, `x` excluded ones.
    fn expand(&mut self, r: &mut Vec<GenIndex>, mut p: BitMask, mut x: BitMask) {
        if p.is_empty() {
            if x.is_empty() && self.target.is_none_or(|t| r.len() == t) {
                let mut clique = r.clone();
                clique.sort_unstable();
                self.found.push(clique);
            }
            return;
        }
        if let Some(t) = self.target {
            if r.len() >= t || r.len() + p.count() < t {
                return;
            }
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.intersection_count(&self.adj[u]), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let branch: Vec<GenIndex> = p.and_not(&self.adj[pivot]).iter().collect();
        for v in branch {
            r.push(v);
            self.expand(r, p.and(&self.adj[v]), x.and(&self.adj[v]));
            r.pop();
            if self.done() {
                return;
            }
            p.remove(v);
            x.insert(v);
        }
    }
}

/// Complete partial spreads of `space`. Exhaustive mode is limited to
/// `W(3, 2)`, `W(3, 3)` and `W(5, 2)`.
pub fn search_maximal(space: &PolarSpace, mode: SearchMode) -> Result<Vec<PartialSpread<'_>>> {
    if mode == SearchMode::Exhaustive && !EXHAUSTIVE_SPACES.contains(&(space.d(), space.n())) {
        return Err(SpreadError::ScaleExceeded {
            what: "exhaustive search",
            limit: "W(3,2), W(3,3), W(5,2)".into(),
            got: format!("W({},{})", 2 * space.n() - 1, space.d()),
        });
    }
    let count = space.num_generators()?;
    let adj: Vec<BitMask> = (0..count).map(|g| space.disjoint_from(g).clone()).collect();
    let mut walk = Walk {
        adj: &adj,
        target: match mode {
            SearchMode::Exhaustive => None,
            SearchMode::FirstOfSize(t) => Some(t),
        },
        found: Vec::new(),
    };
    walk.expand(&mut Vec::new(), BitMask::full(count), BitMask::new(count));
    let mut found = walk.found;
    found.sort();
    found
        .into_iter()
        .map(|members| PartialSpread::new(space, members))
        .collect()
}

/// Number of partial spreads of each size.
pub fn size_histogram(spreads: &[PartialSpread<'_>]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for s in spreads {
        *h.entry(s.len()).or_insert(0) += 1;
    }
    h
}
