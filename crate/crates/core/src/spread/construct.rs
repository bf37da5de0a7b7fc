//! Spread constructions: the field-reduction spread, `T(U)` and its
//! completion, and the paired-transversal construction `S_R` in `W(3, l)`.

use std::collections::BTreeSet;

use crate::algebra::{
    ext_mul, ext_one, ext_order, ext_trace, span, subspace_meet, FMatrix, FVector, FieldSpec,
};
use crate::mask::BitMask;
use crate::polar::{GenIndex, Generator, PolarSpace};

use super::{
    is_complete, pair_partner, require_rank_two, require_spread, CompletenessCert,
    PartialSpread, Result, SpreadError,
};

/// The `d^N + 1` subspaces of the field-reduction spread, in canonical
/// coordinates.
///
/// `F_{d^N}^2` carries the alternating form `Tr(x1 y2 - x2 y1)`; its
/// 1-dimensional `F_{d^N}`-subspaces are totally isotropic `N`-spaces over
/// `F_d`. A symplectic basis of the trace form carries them to the canonical
/// form.
pub fn symplectic_spread_subspaces(space: &PolarSpace) -> Vec<FMatrix> {
    let spec = space.spec();
    let n = space.n();
    let dim = space.dim();
    let ext = FieldSpec::new(spec.d() as u32, n).expect("prime order and positive degree");
    let halves = |v: &FVector| {
        let c = v.coords();
        (FVector::new(c[..n].to_vec(), spec), FVector::new(c[n..].to_vec(), spec))
    };
    let trace_form = |u: &FVector, v: &FVector| {
        let (x1, y1) = halves(u);
        let (x2, y2) = halves(v);
        let z = ext_mul(&x1, &y2, &ext).sub(&ext_mul(&x2, &y1, &ext), spec);
        ext_trace(&z, &ext)
    };
    let units: Vec<FVector> = (0..dim).map(|i| FVector::unit(dim, i)).collect();
    let gram: Vec<Vec<u8>> =
        units.iter().map(|u| units.iter().map(|v| trace_form(u, v)).collect()).collect();
    let form = |u: &FVector, v: &FVector| {
        let mut acc = 0u8;
        for (i, &a) in u.coords().iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.coords().iter().enumerate() {
                acc = spec.add(acc, spec.mul(a, spec.mul(gram[i][j], b)));
            }
        }
        acc
    };

    // symplectic Gram-Schmidt
    let mut pool = units;
    let mut pairs: Vec<(FVector, FVector)> = Vec::with_capacity(n);
    while !pool.is_empty() {
        let e = pool.remove(0);
        let j = pool
            .iter()
            .position(|f| form(&e, f) != 0)
            .expect("trace form is non-degenerate");
        let f = pool.remove(j);
        let f = f.scale(spec.inv(form(&e, &f)).expect("nonzero"), spec);
        pool = pool
            .into_iter()
            .map(|v| {
                let (bf, be) = (form(&v, &f), form(&v, &e));
                v.axpy(spec.neg(bf), &e, spec).axpy(be, &f, spec)
            })
            .collect();
        pairs.push((e, f));
    }
    let to_canonical = |v: &FVector| {
        let mut c = vec![0u8; dim];
        for (i, (e, f)) in pairs.iter().enumerate() {
            c[2 * i] = form(v, f);
            c[2 * i + 1] = spec.neg(form(v, e));
        }
        FVector::new(c, spec)
    };

    let q = ext_order(&ext) as usize;
    let elements: Vec<FVector> = (0..q).map(|c| FVector::from_code(c, n, spec.d())).collect();
    let one = ext_one(&ext);
    let zero = FVector::zero(n);
    let reps = elements.iter().map(|y| (one.clone(), y.clone())).chain([(zero, one.clone())]);
    reps.map(|(x, y)| {
        let rows: Vec<FVector> = (0..n)
            .map(|j| {
                let lambda = FVector::unit(n, j);
                let mut raw = ext_mul(&lambda, &x, &ext).into_coords();
                raw.extend(ext_mul(&lambda, &y, &ext).into_coords());
                to_canonical(&FVector::new(raw, spec))
            })
            .collect();
        span(dim, &rows, spec)
    })
    .collect()
}

/// A regular spread of size `d^N + 1` built by field reduction.
pub fn construct_symplectic_spread(space: &PolarSpace) -> Result<PartialSpread<'_>> {
    let mut members = Vec::new();
    for sub in symplectic_spread_subspaces(space) {
        let idx = space.generator_index(&sub).ok_or_else(|| {
            SpreadError::StructureViolation("field-reduction element is not isotropic".into())
        })?;
        members.push(idx);
    }
    let s = PartialSpread::new(space, members)?;
    if !s.is_spread() {
        return Err(SpreadError::StructureViolation("field-reduction set is not a spread".into()));
    }
    Ok(s)
}

/// Point sets of the lines of `PG(2N-1, d)` meeting three pairwise
/// complementary `N`-spaces: one line through each point of `c`.
fn transversal_lines(space: &PolarSpace, a: &FMatrix, b: &FMatrix, c: &FMatrix) -> Vec<BitMask> {
    let spec = space.spec();
    let dim = space.dim();
    crate::algebra::projective_points(c, spec)
        .into_iter()
        .map(|p| {
            let mut rows = b.rows().to_vec();
            rows.push(p.clone());
            let plane = span(dim, &rows, spec);
            let foot = subspace_meet(&plane, a, spec).expect("same ambient");
            debug_assert_eq!(foot.rank(), 1);
            let line = span(dim, &[p, foot.rows()[0].clone()], spec);
            space.subspace_mask(&line)
        })
        .collect()
}

/// Regularity of a spread of `PG(2N-1, d)` given by subspaces: for every
/// three members, exactly `d - 2` further members meet every line that meets
/// all three.
pub fn regularity_of_subspaces(space: &PolarSpace, members: &[FMatrix]) -> bool {
    let masks: Vec<BitMask> = members.iter().map(|m| space.subspace_mask(m)).collect();
    let want = space.d() as usize - 2;
    let k = members.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let lines = transversal_lines(space, &members[a], &members[b], &members[c]);
                let further = (0..k)
                    .filter(|&i| i != a && i != b && i != c)
                    .filter(|&i| lines.iter().all(|l| l.intersects(&masks[i])))
                    .count();
                if further != want {
                    return false;
                }
            }
        }
    }
    true
}

pub fn check_regularity(s: &PartialSpread<'_>) -> Result<bool> {
    require_spread(s)?;
    let bases: Vec<FMatrix> = s.generators().iter().map(|g| g.basis.clone()).collect();
    Ok(regularity_of_subspaces(s.space(), &bases))
}

/// `T(U) = T \ T_U ∪ {U}` for a spread `T` of `W(3, p)` and a line `U`
/// outside it.
pub fn construct_tu<'a>(s: &PartialSpread<'a>, u: &Generator) -> Result<PartialSpread<'a>> {
    let space = s.space();
    require_rank_two(space)?;
    require_spread(s)?;
    if s.contains(u.gen_index) {
        return Err(SpreadError::GeneratorInSpread(u.gen_index));
    }
    let hit = s.meeting(u);
    if hit.len() != space.d() as usize + 1 {
        return Err(SpreadError::StructureViolation(format!(
            "{} spread lines meet U, expected {}",
            hit.len(),
            space.d() as usize + 1
        )));
    }
    s.without(&hit).with(u.gen_index)
}

#[derive(Debug, Clone)]
pub struct TuCompletion<'a> {
    pub partial_spread: PartialSpread<'a>,
    pub cert: CompletenessCert,
    /// Generators disjoint from `T(U)` before completion.
    pub candidates: Vec<GenIndex>,
}

/// Extends `T(U)` by disjoint generators (lowest index first) until complete.
pub fn complete_tu<'a>(tu: &PartialSpread<'a>) -> TuCompletion<'a> {
    let candidates: Vec<GenIndex> = tu
        .space()
        .generators()
        .expect("catalog")
        .iter()
        .filter(|g| !g.point_mask.intersects(tu.coverage()))
        .map(|g| g.gen_index)
        .collect();
    let mut cur = tu.clone();
    loop {
        let cert = is_complete(&cur);
        match cert.witness {
            None => return TuCompletion { partial_spread: cur, cert, candidates },
            Some(w) => cur = cur.with(w).expect("witness is disjoint"),
        }
    }
}

/// Size of `S_R` obtained by counting: `|S| - |∪ S_u| + 2(k + 1)` with
/// `|∪ S_u| = 2 + (k + 1)(l - 1)`.
pub fn sr_size(l: usize, k: usize) -> usize {
    l * l + 3 * k + 2 - (k + 1) * l
}

/// `l^2 - (k + 1) l + (3k + 1)`, the size formula as it appears in the
/// literature for this construction; one less than [`sr_size`].
pub fn sr_size_as_published(l: usize, k: usize) -> usize {
    l * l + 3 * k + 1 - (k + 1) * l
}

#[derive(Debug, Clone)]
pub struct SrConstruction<'a> {
    pub partial_spread: PartialSpread<'a>,
    /// Partner pairs `(X_i, X_ĩ)` of `{L, M}^⊥`, ordered by first index.
    pub pairs: Vec<(GenIndex, GenIndex)>,
    pub removed: Vec<GenIndex>,
    pub added: Vec<GenIndex>,
}

/// `S_R = S \ (∪_{u∈R} S_u) ∪_{v∈R} {X_v, X_ṽ}` for a classical spread of
/// `W(3, l)`, `l` odd, taking `R` as the first `k + 1` partner pairs.
pub fn construct_sr<'a>(
    s: &PartialSpread<'a>,
    l_idx: GenIndex,
    m_idx: GenIndex,
    k: usize,
) -> Result<SrConstruction<'a>> {
    let space = s.space();
    require_rank_two(space)?;
    let d = space.d() as usize;
    if d % 2 == 0 {
        return Err(SpreadError::EvenOrder(space.d()));
    }
    require_spread(s)?;
    for idx in [l_idx, m_idx] {
        if !s.contains(idx) {
            return Err(SpreadError::NotAMember(idx));
        }
    }
    if l_idx == m_idx {
        return Err(SpreadError::StructureViolation("L and M must differ".into()));
    }
    let max_k = (d - 3) / 2;
    if k > max_k {
        return Err(SpreadError::BadK { k, max: max_k });
    }
    let violation = |msg: String| Err(SpreadError::StructureViolation(msg));

    let xs = space.common_transversals(&[space.generator(l_idx), space.generator(m_idx)])?;
    if xs.len() != d + 1 {
        return violation(format!("|{{L,M}}^perp| = {}, expected {}", xs.len(), d + 1));
    }
    let blocks: Vec<BTreeSet<GenIndex>> =
        xs.iter().map(|x| s.meeting(x).into_iter().collect()).collect();
    let mut partner = Vec::with_capacity(xs.len());
    for x in &xs {
        let y = pair_partner(s, x)?;
        match xs.iter().position(|z| z.gen_index == y.gen_index) {
            Some(j) => partner.push(j),
            None => return violation(format!("partner of {} lies outside {{L,M}}^perp", x.gen_index)),
        }
    }
    for (i, &j) in partner.iter().enumerate() {
        if j == i || partner[j] != i {
            return violation("partner map is not a fixed-point-free involution".into());
        }
        if blocks[i] != blocks[j] {
            return violation("paired lines meet different spread lines".into());
        }
    }
    let pairs: Vec<(usize, usize)> =
        (0..xs.len()).filter(|&i| i < partner[i]).map(|i| (i, partner[i])).collect();
    debug_assert_eq!(pairs.len(), (d + 1) / 2);
    let lm: BTreeSet<GenIndex> = [l_idx, m_idx].into_iter().collect();
    for (a, &(i, _)) in pairs.iter().enumerate() {
        for &(j, _) in &pairs[a + 1..] {
            let common: BTreeSet<GenIndex> = blocks[i].intersection(&blocks[j]).copied().collect();
            if common != lm {
                return violation("distinct blocks must share exactly L and M".into());
            }
        }
    }

    let chosen = &pairs[..=k];
    let removed: BTreeSet<GenIndex> =
        chosen.iter().flat_map(|&(i, _)| blocks[i].iter().copied()).collect();
    let added: Vec<GenIndex> =
        chosen.iter().flat_map(|&(i, j)| [xs[i].gen_index, xs[j].gen_index]).collect();
    let removed: Vec<GenIndex> = removed.into_iter().collect();
    let kept = s.members().iter().copied().filter(|m| !removed.contains(m));
    let partial_spread = PartialSpread::new(space, kept.chain(added.iter().copied()))?;
    if partial_spread.len() != sr_size(d, k) {
        return violation(format!("|S_R| = {}, expected {}", partial_spread.len(), sr_size(d, k)));
    }
    Ok(SrConstruction {
        partial_spread,
        pairs: pairs.iter().map(|&(i, j)| (xs[i].gen_index, xs[j].gen_index)).collect(),
        removed,
        added,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_reduction_spreads() {
        for (d, n, size) in [(2, 2, 5), (3, 2, 10), (2, 3, 9), (5, 2, 26)] {
            let space = PolarSpace::new(d, n).unwrap();
            let s = construct_symplectic_spread(&space).unwrap();
            assert_eq!(s.len(), size);
            assert!(s.is_spread());
            assert!(is_complete(&s).complete);
        }
    }

    #[test]
    fn regularity_of_field_reduction_spreads() {
        for (d, n) in [(2, 2), (3, 2), (2, 3)] {
            let space = PolarSpace::new(d, n).unwrap();
            let s = construct_symplectic_spread(&space).unwrap();
            assert!(check_regularity(&s).unwrap(), "W({}, {d})", 2 * n - 1);
        }
    }

    #[test]
    fn regularity_requires_a_spread() {
        let space = PolarSpace::new(3, 2).unwrap();
        let s = construct_symplectic_spread(&space).unwrap();
        let part = s.without(&s.members()[..1].to_vec());
        assert_eq!(check_regularity(&part).unwrap_err(), SpreadError::NotASpread);
    }

    #[test]
    fn tu_sizes_and_errors() {
        for (d, expect) in [(2usize, 3usize), (3, 7)] {
            let space = PolarSpace::new(d as u32, 2).unwrap();
            let s = construct_symplectic_spread(&space).unwrap();
            let in_spread = space.generator(s.members()[0]);
            assert_eq!(
                construct_tu(&s, in_spread).unwrap_err(),
                SpreadError::GeneratorInSpread(in_spread.gen_index)
            );
            for u in space.generators().unwrap().iter().filter(|g| !s.contains(g.gen_index)) {
                let tu = construct_tu(&s, u).unwrap();
                assert_eq!(tu.len(), expect);
                assert_eq!(tu.len(), d * d - d + 1);
                let done = complete_tu(&tu);
                assert!(done.cert.complete);
                assert!(done.candidates.len() <= 1);
                assert!(done.partial_spread.len() == expect || done.partial_spread.len() == expect + 1);
            }
        }
    }

    #[test]
    fn sr_argument_checks() {
        let space = PolarSpace::new(3, 2).unwrap();
        let s = construct_symplectic_spread(&space).unwrap();
        let (l, m) = (s.members()[0], s.members()[1]);
        assert_eq!(construct_sr(&s, l, m, 1).unwrap_err(), SpreadError::BadK { k: 1, max: 0 });
        assert!(matches!(construct_sr(&s, l, l, 0), Err(SpreadError::StructureViolation(_))));
        let outsider = (0..40).find(|g| !s.contains(*g)).unwrap();
        assert_eq!(construct_sr(&s, l, outsider, 0).unwrap_err(), SpreadError::NotAMember(outsider));
        let w2 = PolarSpace::new(2, 2).unwrap();
        let s2 = construct_symplectic_spread(&w2).unwrap();
        assert_eq!(
            construct_sr(&s2, s2.members()[0], s2.members()[1], 0).unwrap_err(),
            SpreadError::EvenOrder(2)
        );
    }

    #[test]
    fn sr_structure_in_w33() {
        let space = PolarSpace::new(3, 2).unwrap();
        let s = construct_symplectic_spread(&space).unwrap();
        let built = construct_sr(&s, s.members()[0], s.members()[1], 0).unwrap();
        assert_eq!(built.pairs.len(), 2);
        assert_eq!(built.removed.len(), 4);
        assert_eq!(built.added.len(), 2);
        assert_eq!(built.partial_spread.len(), sr_size(3, 0));
        assert!(is_complete(&built.partial_spread).complete);
    }

    #[test]
    fn sr_size_formulas() {
        assert_eq!(sr_size(3, 0), 8);
        assert_eq!(sr_size(5, 0), 22);
        assert_eq!(sr_size(5, 1), 20);
        assert_eq!(sr_size_as_published(3, 0), 7);
        assert_eq!(sr_size_as_published(5, 0), 21);
        assert_eq!(sr_size_as_published(5, 1), 19);
        // last term of the published list: l^2/2 + 2l - 7/2
        for l in [3usize, 5, 7, 9, 11] {
            let k = (l - 3) / 2;
            assert_eq!(2 * sr_size_as_published(l, k), l * l + 4 * l - 7);
        }
    }
}
