//! Partial spreads of `W(2N-1, d)`: completeness certificates, the spread
//! constructions, exhaustive search for complete partial spreads, and
//! isomorphism classification.

mod construct;
mod iso;
mod search;
mod uset;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::mask::BitMask;
use crate::polar::{GenIndex, Generator, PolarError, PolarSpace};

pub use construct::{
    check_regularity, complete_tu, construct_sr, construct_symplectic_spread, construct_tu,
    regularity_of_subspaces, sr_size, sr_size_as_published, symplectic_spread_subspaces,
    SrConstruction, TuCompletion,
};
pub use iso::{classify_iso, symplectic_group, Classification, OrbitRep};
pub use search::{search_maximal, size_histogram, SearchMode};
pub use uset::{
    construct_u_set, find_u_set, partition_exists, unextendible_from_u_set, USet, USetReport,
    UsetCompletion,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpreadError {
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error("generator index {0} is out of range")]
    UnknownGenerator(GenIndex),
    #[error("generators {0} and {1} meet")]
    NotDisjoint(GenIndex, GenIndex),
    #[error("the partial spread does not cover every point")]
    NotASpread,
    #[error("generator {0} is already a member")]
    GeneratorInSpread(GenIndex),
    #[error("generator {0} is not a member")]
    NotAMember(GenIndex),
    #[error("operation needs N = 2, space has N = {0}")]
    NotRankTwo(usize),
    #[error("operation needs odd order, got d = {0}")]
    EvenOrder(u8),
    #[error("no partner line for generator {0}")]
    NoPartner(GenIndex),
    #[error("generator {0} has several partner lines: {1:?}")]
    AmbiguousPartner(GenIndex, Vec<GenIndex>),
    #[error("k = {k} out of range 0..={max}")]
    BadK { k: usize, max: usize },
    #[error("structure check failed: {0}")]
    StructureViolation(String),
    #[error("generator {0} does not meet any member in a space of rank N - 1")]
    NoSuitableChi(GenIndex),
    #[error("no generator beta exists for carrier {0}")]
    NoBeta(GenIndex),
    #[error("not an unextendible triple of W(3, 2)")]
    NotUnextendibleTriple,
    #[error("{what} is limited to {limit}; got {got}")]
    ScaleExceeded { what: &'static str, limit: String, got: String },
}

pub type Result<T> = std::result::Result<T, SpreadError>;

/// A set of pairwise disjoint generators with its point coverage.
#[derive(Clone)]
pub struct PartialSpread<'a> {
    space: &'a PolarSpace,
    members: Vec<GenIndex>,
    coverage: BitMask,
}

impl fmt::Debug for PartialSpread<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialSpread")
            .field("d", &self.space.d())
            .field("n", &self.space.n())
            .field("members", &self.members)
            .finish()
    }
}

impl PartialEq for PartialSpread<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.space, other.space) && self.members == other.members
    }
}

impl Eq for PartialSpread<'_> {}

impl<'a> PartialSpread<'a> {
    pub fn new(
        space: &'a PolarSpace,
        members: impl IntoIterator<Item = GenIndex>,
    ) -> Result<Self> {
        let gens = space.generators()?;
        let mut members: Vec<GenIndex> = members.into_iter().collect();
        members.sort_unstable();
        let mut coverage = BitMask::new(space.num_points());
        for (i, &m) in members.iter().enumerate() {
            let g = gens.get(m).ok_or(SpreadError::UnknownGenerator(m))?;
            if i > 0 && members[i - 1] == m {
                return Err(SpreadError::NotDisjoint(m, m));
            }
            if g.point_mask.intersects(&coverage) {
                let other = members[..i]
                    .iter()
                    .copied()
                    .find(|&o| gens[o].meets(g))
                    .expect("some earlier member meets");
                return Err(SpreadError::NotDisjoint(other, m));
            }
            coverage.union_with(&g.point_mask);
        }
        Ok(PartialSpread { space, members, coverage })
    }

    pub fn empty(space: &'a PolarSpace) -> Self {
        PartialSpread { space, members: Vec::new(), coverage: BitMask::new(space.num_points()) }
    }

    pub fn space(&self) -> &'a PolarSpace {
        self.space
    }

    pub fn members(&self) -> &[GenIndex] {
        &self.members
    }

    pub fn coverage(&self) -> &BitMask {
        &self.coverage
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: GenIndex) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Covers every point; then the size is `d^N + 1`.
    pub fn is_spread(&self) -> bool {
        self.coverage.count() == self.space.num_points()
    }

    pub fn generators(&self) -> Vec<&'a Generator> {
        self.members.iter().map(|&m| self.space.generator(m)).collect()
    }

    pub fn with(&self, g: GenIndex) -> Result<Self> {
        Self::new(self.space, self.members.iter().copied().chain([g]))
    }

    pub fn without(&self, drop: &[GenIndex]) -> Self {
        let members: Vec<GenIndex> =
            self.members.iter().copied().filter(|m| !drop.contains(m)).collect();
        Self::new(self.space, members).expect("subset of a partial spread")
    }

    /// Members meeting `g`.
    pub fn meeting(&self, g: &Generator) -> Vec<GenIndex> {
        self.members.iter().copied().filter(|&m| self.space.generator(m).meets(g)).collect()
    }

    pub fn to_bases(&self) -> Vec<Vec<Vec<u8>>> {
        self.generators().iter().map(|g| g.basis.to_nested()).collect()
    }
}

/// Outcome of a completeness scan. `witness` is the lowest-index generator
/// disjoint from every member, when one exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompletenessCert {
    pub complete: bool,
    pub witness: Option<GenIndex>,
}

pub fn is_complete(ps: &PartialSpread<'_>) -> CompletenessCert {
    let witness = ps
        .space
        .generators()
        .expect("catalog exists for a partial spread")
        .iter()
        .find(|g| !g.point_mask.intersects(&ps.coverage))
        .map(|g| g.gen_index);
    CompletenessCert { complete: witness.is_none(), witness }
}

/// Generators outside `ps` whose points all lie on members of `ps`.
pub fn covered_generators<'a>(ps: &PartialSpread<'a>) -> Vec<&'a Generator> {
    ps.space
        .generators()
        .expect("catalog exists for a partial spread")
        .iter()
        .filter(|g| !ps.contains(g.gen_index) && g.point_mask.is_subset(&ps.coverage))
        .collect()
}

fn require_rank_two(space: &PolarSpace) -> Result<()> {
    if space.n() != 2 {
        return Err(SpreadError::NotRankTwo(space.n()));
    }
    Ok(())
}

fn require_spread(s: &PartialSpread<'_>) -> Result<()> {
    if !s.is_spread() {
        return Err(SpreadError::NotASpread);
    }
    Ok(())
}

/// The unique line `Y != x` meeting exactly the spread lines that `x` meets.
/// Exists for regular spreads of `W(3, d)` with `d` odd.
pub fn pair_partner<'a>(s: &PartialSpread<'a>, x: &Generator) -> Result<&'a Generator> {
    let space = s.space;
    require_rank_two(space)?;
    require_spread(s)?;
    if s.contains(x.gen_index) {
        return Err(SpreadError::GeneratorInSpread(x.gen_index));
    }
    let hit: Vec<&Generator> = s.meeting(x).into_iter().map(|m| space.generator(m)).collect();
    let partners: Vec<&Generator> = space
        .common_transversals(&hit)?
        .into_iter()
        .filter(|y| y.gen_index != x.gen_index)
        .collect();
    match partners.as_slice() {
        [] => Err(SpreadError::NoPartner(x.gen_index)),
        [y] => Ok(y),
        many => Err(SpreadError::AmbiguousPartner(
            x.gen_index,
            many.iter().map(|g| g.gen_index).collect(),
        )),
    }
}

/// The opposite regulus of an unextendible triple in `W(3, 2)`: three lines
/// partitioning the same nine points.
pub fn repartition_triple<'a>(ps: &PartialSpread<'a>) -> Result<PartialSpread<'a>> {
    let space = ps.space;
    if space.n() != 2 || space.d() != 2 || ps.len() != 3 || !is_complete(ps).complete {
        return Err(SpreadError::NotUnextendibleTriple);
    }
    let opposite = space.common_transversals(&ps.generators())?;
    if opposite.len() != 3 {
        return Err(SpreadError::NotUnextendibleTriple);
    }
    let out = PartialSpread::new(space, opposite.iter().map(|g| g.gen_index))?;
    debug_assert_eq!(out.coverage, ps.coverage);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(d: u32, n: usize) -> PolarSpace {
        PolarSpace::new(d, n).unwrap()
    }

    #[test]
    fn new_rejects_meeting_members_and_bad_indices() {
        let s = w(2, 2);
        let g0 = s.generator(0);
        let meet = s.generators().unwrap().iter().find(|g| g.gen_index != 0 && g.meets(g0)).unwrap();
        assert_eq!(
            PartialSpread::new(&s, [0, meet.gen_index]).unwrap_err(),
            SpreadError::NotDisjoint(0, meet.gen_index)
        );
        assert_eq!(PartialSpread::new(&s, [99]).unwrap_err(), SpreadError::UnknownGenerator(99));
        assert_eq!(PartialSpread::new(&s, [3, 3]).unwrap_err(), SpreadError::NotDisjoint(3, 3));
    }

    #[test]
    fn two_disjoint_lines_are_incomplete() {
        let s = w(2, 2);
        let g0 = s.generator(0);
        let other = s.disjoint_from(0).first().unwrap();
        let ps = PartialSpread::new(&s, [0, other]).unwrap();
        assert_eq!(ps.coverage().count(), 6);
        let cert = is_complete(&ps);
        assert!(!cert.complete);
        let wit = s.generator(cert.witness.unwrap());
        assert!(!wit.meets(g0) && !wit.meets(s.generator(other)));
        // the witness is the lowest-index disjoint generator
        let lowest = s
            .generators()
            .unwrap()
            .iter()
            .find(|g| !g.point_mask.intersects(ps.coverage()))
            .unwrap();
        assert_eq!(wit.gen_index, lowest.gen_index);
    }

    #[test]
    fn single_generator_covers_nothing_else() {
        let s = w(3, 2);
        for g in 0..s.num_generators().unwrap() {
            let ps = PartialSpread::new(&s, [g]).unwrap();
            assert!(covered_generators(&ps).is_empty());
        }
    }

    #[test]
    fn empty_partial_spread_witness_is_first_generator() {
        let s = w(2, 2);
        let cert = is_complete(&PartialSpread::empty(&s));
        assert_eq!(cert, CompletenessCert { complete: false, witness: Some(0) });
    }

    #[test]
    fn partner_needs_off_spread_line() {
        let s = w(3, 2);
        let spread = construct_symplectic_spread(&s).unwrap();
        let m = spread.members()[0];
        assert_eq!(
            pair_partner(&spread, s.generator(m)).unwrap_err(),
            SpreadError::GeneratorInSpread(m)
        );
        let half = PartialSpread::new(&s, spread.members()[..3].iter().copied()).unwrap();
        let x = s.generators().unwrap().iter().find(|g| !spread.contains(g.gen_index)).unwrap();
        assert_eq!(pair_partner(&half, x).unwrap_err(), SpreadError::NotASpread);
    }

    #[test]
    fn partner_is_absent_in_even_order() {
        let s = w(2, 2);
        let spread = construct_symplectic_spread(&s).unwrap();
        for x in s.generators().unwrap().iter().filter(|g| !spread.contains(g.gen_index)) {
            // S_X is never a grid regulus in a spread of W(3, 2)
            assert_eq!(pair_partner(&spread, x).unwrap_err(), SpreadError::NoPartner(x.gen_index));
        }
    }

    #[test]
    fn repartition_rejects_extendible_triples() {
        let s = w(2, 2);
        let spread = construct_symplectic_spread(&s).unwrap();
        let triple = PartialSpread::new(&s, spread.members()[..3].iter().copied()).unwrap();
        assert_eq!(repartition_triple(&triple).unwrap_err(), SpreadError::NotUnextendibleTriple);
    }
}
