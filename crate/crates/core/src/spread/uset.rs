//! U-sets built from a regular spread and the complete partial spreads they
//! seed.

use serde::Serialize;

use crate::algebra::subspace_meet;
use crate::mask::BitMask;
use crate::polar::{GenIndex, Generator, PolarError, PolarSpace};

use super::{is_complete, require_spread, CompletenessCert, PartialSpread, Result, SpreadError};

/// Pairwise disjoint generators all meeting the carrier `χ` and covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct USet<'a> {
    pub members: PartialSpread<'a>,
    pub carrier: GenIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct USetReport {
    pub carrier: GenIndex,
    pub alpha: GenIndex,
    pub beta: GenIndex,
    /// Spread members meeting the carrier.
    pub r_chi: Vec<GenIndex>,
    /// `d^{N-2} + 1`, the count claimed for `|R_χ|`; compare with `r_chi.len()`.
    pub r_chi_claimed: usize,
    /// Generators other than `χ` lying inside the union of `R_χ`.
    pub extra_covered: Vec<GenIndex>,
    /// No partial spread through the carrier partitions the U-set's points.
    pub partition_free: bool,
}

/// Whether the generators inside `region` admit an exact cover of `region`
/// that uses `forced`.
pub fn partition_exists(space: &PolarSpace, region: &BitMask, forced: GenIndex) -> Result<bool> {
    let gens = space.generators()?;
    let first = gens.get(forced).ok_or(SpreadError::UnknownGenerator(forced))?;
    if !first.point_mask.is_subset(region) {
        return Ok(false);
    }
    let inside: Vec<&Generator> = gens.iter().filter(|g| g.point_mask.is_subset(region)).collect();
    let mut left = region.and_not(&first.point_mask);
    Ok(exact_cover(&inside, &mut left))
}

fn exact_cover(pieces: &[&Generator], left: &mut BitMask) -> bool {
    let Some(p) = left.first() else {
        return true;
    };
    for g in pieces {
        if g.point_mask.contains(p) && g.point_mask.is_subset(left) {
            left.difference_with(&g.point_mask);
            let ok = exact_cover(pieces, left);
            left.union_with(&g.point_mask);
            if ok {
                return true;
            }
        }
    }
    false
}

fn meet_rank(space: &PolarSpace, a: &Generator, b: &Generator) -> Result<usize> {
    let m = subspace_meet(&a.basis, &b.basis, space.spec()).map_err(PolarError::from)?;
    Ok(m.rank())
}

/// `S_χ = R_χ \ {α} ∪ {β}` for a regular spread `s` and a carrier `chi`
/// meeting some member in a space of rank `N - 1`.
pub fn construct_u_set<'a>(
    s: &PartialSpread<'a>,
    chi: &Generator,
) -> Result<(USet<'a>, USetReport)> {
    let space = s.space();
    require_spread(s)?;
    if s.contains(chi.gen_index) {
        return Err(SpreadError::GeneratorInSpread(chi.gen_index));
    }
    let n = space.n();
    let r_chi = s.meeting(chi);
    let mut alpha = None;
    for &m in &r_chi {
        if meet_rank(space, chi, space.generator(m))? == n - 1 {
            alpha = Some(m);
            break;
        }
    }
    let alpha = alpha.ok_or(SpreadError::NoSuitableChi(chi.gen_index))?;
    let common = subspace_meet(&chi.basis, &space.generator(alpha).basis, space.spec())
        .map_err(PolarError::from)?;
    let others: Vec<&Generator> =
        r_chi.iter().filter(|&&m| m != alpha).map(|&m| space.generator(m)).collect();
    let beta = space
        .generators_through(&common)?
        .into_iter()
        .filter(|b| b.gen_index != chi.gen_index && b.gen_index != alpha)
        .find(|b| others.iter().all(|o| !o.meets(b)))
        .ok_or(SpreadError::NoBeta(chi.gen_index))?;

    let members = PartialSpread::new(
        space,
        others.iter().map(|g| g.gen_index).chain([beta.gen_index]),
    )?;
    if !chi.point_mask.is_subset(members.coverage()) {
        return Err(SpreadError::StructureViolation("U-set does not cover its carrier".into()));
    }
    let partition_free = !partition_exists(space, members.coverage(), chi.gen_index)?;

    let omega = PartialSpread::new(space, r_chi.iter().copied())?;
    let extra_covered = super::covered_generators(&omega)
        .into_iter()
        .map(|g| g.gen_index)
        .filter(|&g| g != chi.gen_index)
        .collect();
    let d = space.d() as usize;
    let report = USetReport {
        carrier: chi.gen_index,
        alpha,
        beta: beta.gen_index,
        r_chi,
        r_chi_claimed: d.pow(n as u32 - 2) + 1,
        extra_covered,
        partition_free,
    };
    Ok((USet { members, carrier: chi.gen_index }, report))
}

/// The lowest-index carrier outside `s` that yields a U-set. With
/// `no_extra_coverage`, carriers whose `R_χ` covers further generators are
/// skipped.
pub fn find_u_set<'a>(
    s: &PartialSpread<'a>,
    no_extra_coverage: bool,
) -> Result<(USet<'a>, USetReport)> {
    let space = s.space();
    require_spread(s)?;
    let odd = space.d() % 2 == 1;
    for chi in space.generators()?.iter().filter(|g| !s.contains(g.gen_index)) {
        match construct_u_set(s, chi) {
            Ok((u, report)) => {
                if no_extra_coverage && !report.extra_covered.is_empty() {
                    continue;
                }
                if odd && !report.partition_free {
                    continue;
                }
                return Ok((u, report));
            }
            Err(SpreadError::NoSuitableChi(_)) | Err(SpreadError::NoBeta(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(SpreadError::StructureViolation("no carrier yields a U-set".into()))
}

#[derive(Debug, Clone)]
pub struct UsetCompletion<'a> {
    /// `R \ R_χ ∪ {χ}`.
    pub base: PartialSpread<'a>,
    /// `base` extended by lowest-index disjoint generators until complete.
    pub completed: PartialSpread<'a>,
    pub cert: CompletenessCert,
    pub added: Vec<GenIndex>,
}

pub fn unextendible_from_u_set<'a>(
    s: &PartialSpread<'a>,
    u: &USet<'a>,
) -> Result<UsetCompletion<'a>> {
    let space = s.space();
    let chi = space.generator(u.carrier);
    let r_chi = s.meeting(chi);
    let base = s.without(&r_chi).with(u.carrier)?;
    let mut completed = base.clone();
    let mut added = Vec::new();
    let cert = loop {
        let cert = is_complete(&completed);
        match cert.witness {
            None => break cert,
            Some(w) => {
                completed = completed.with(w)?;
                added.push(w);
            }
        }
    };
    if completed.is_spread() {
        return Err(SpreadError::StructureViolation("completion reached a spread".into()));
    }
    Ok(UsetCompletion { base, completed, cert, added })
}
