//! Isomorphism classes of partial spreads of `W(3, 2)` under `Sp(4, 2)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::{span, FVector};
use crate::polar::{GenIndex, PolarSpace};

use super::{PartialSpread, Result, SpreadError};

/// Elements of `Sp(4, 2)` as 4x4 matrices acting on row vectors, found by
/// filtering all `2^16` binary matrices by `M J M^T = J`.
pub fn symplectic_group(space: &PolarSpace) -> Result<Vec<[[u8; 4]; 4]>> {
    require_w32(space)?;
    let j = space.form_matrix();
    let mut out = Vec::new();
    for code in 0u32..1 << 16 {
        let mut m = [[0u8; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = (code >> (4 * r + c) & 1) as u8;
            }
        }
        let preserves = (0..4).all(|a| {
            (0..4).all(|b| {
                let mut acc = 0u8;
                for x in 0..4 {
                    for y in 0..4 {
                        acc ^= m[a][x] & j[x][y] & m[b][y];
                    }
                }
                acc == j[a][b]
            })
        });
        if preserves {
            out.push(m);
        }
    }
    Ok(out)
}

fn require_w32(space: &PolarSpace) -> Result<()> {
    if (space.d(), space.n()) != (2, 2) {
        return Err(SpreadError::ScaleExceeded {
            what: "isomorphism classification",
            limit: "W(3,2)".into(),
            got: format!("W({},{})", 2 * space.n() - 1, space.d()),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRep {
    /// Least member list in the orbit.
    pub members: Vec<GenIndex>,
    pub orbit_size: usize,
    /// Number of input partial spreads lying in this orbit.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub group_order: usize,
    pub representatives: Vec<OrbitRep>,
}

/// Generator permutation induced by each group element.
fn generator_permutations(space: &PolarSpace, group: &[[[u8; 4]; 4]]) -> Result<Vec<Vec<GenIndex>>> {
    let spec = space.spec();
    let gens = space.generators()?;
    let apply = |m: &[[u8; 4]; 4], v: &FVector| {
        let mut out = vec![0u8; 4];
        for (i, &a) in v.coords().iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o ^= a & m[i][c];
            }
        }
        FVector::new(out, spec)
    };
    group
        .iter()
        .map(|m| {
            gens.iter()
                .map(|g| {
                    let rows: Vec<FVector> = g.basis.rows().iter().map(|r| apply(m, r)).collect();
                    space
                        .generator_index(&span(4, &rows, spec))
                        .ok_or_else(|| SpreadError::StructureViolation("image is not a generator".into()))
                })
                .collect()
        })
        .collect()
}

pub fn classify_iso(space: &PolarSpace, spreads: &[PartialSpread<'_>]) -> Result<Classification> {
    let group = symplectic_group(space)?;
    let perms = generator_permutations(space, &group)?;
    let mut orbits: BTreeMap<Vec<GenIndex>, OrbitRep> = BTreeMap::new();
    for s in spreads {
        let images: BTreeSet<Vec<GenIndex>> = perms
            .iter()
            .map(|p| {
                let mut img: Vec<GenIndex> = s.members().iter().map(|&m| p[m]).collect();
                img.sort_unstable();
                img
            })
            .collect();
        let least = images.iter().next().expect("group is nonempty").clone();
        orbits
            .entry(least.clone())
            .or_insert(OrbitRep { members: least, orbit_size: images.len(), multiplicity: 0 })
            .multiplicity += 1;
    }
    Ok(Classification { group_order: group.len(), representatives: orbits.into_values().collect() })
}
