//! Cross-checks of library results against independent computations.

use std::collections::BTreeSet;

use polarmub::algebra::{projective_points, span, subspace_meet, FMatrix, FVector};
use polarmub::counting::{binomial, conjecture_counts, generator_count_big, Lhs, Verdict};
use polarmub::mask::BitMask;
use polarmub::pauli::{center_check, class_from_generator, generator_from_class};
use polarmub::polar::{generator_count, point_count, PolarSpace};
use polarmub::spread::{
    check_regularity, construct_symplectic_spread, construct_tu, pair_partner,
    regularity_of_subspaces, search_maximal, symplectic_spread_subspaces, symplectic_group,
    SearchMode,
};

/// Totally isotropic lines of W(3, d) from pairs of collinear points, with
/// the form evaluated straight from its definition.
fn lines_by_pairs(space: &PolarSpace) -> BTreeSet<BitMask> {
    let spec = space.spec();
    let d = spec.d() as u32;
    let form = |u: &FVector, v: &FVector| {
        let (x, y) = (u.coords(), v.coords());
        let s = x[0] as u32 * y[1] as u32 + d * d - x[1] as u32 * y[0] as u32 % d
            + x[2] as u32 * y[3] as u32
            + d * d
            - x[3] as u32 * y[2] as u32 % d;
        s % d
    };
    let pts = space.points();
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if form(&pts[i], &pts[j]) == 0 {
                let line = span(4, &[pts[i].clone(), pts[j].clone()], spec);
                out.insert(space.subspace_mask(&line));
            }
        }
    }
    out
}

#[test]
fn generator_catalog_matches_pair_enumeration() {
    for d in [2, 3, 5] {
        let space = PolarSpace::new(d, 2).unwrap();
        let catalog: BTreeSet<BitMask> =
            space.generators().unwrap().iter().map(|g| g.point_mask.clone()).collect();
        assert_eq!(catalog, lines_by_pairs(&space), "W(3,{d})");
    }
}

#[test]
fn closed_form_counts() {
    for (d, n) in [(2u128, 2u32), (3, 2), (5, 2), (2, 3), (2, 4), (3, 3), (7, 2)] {
        let pts: u128 = (0..2 * n).map(|i| d.pow(i)).sum();
        let gens: u128 = (1..=n).map(|i| d.pow(i) + 1).product();
        assert_eq!(point_count(d, n), pts);
        assert_eq!(generator_count(d, n), gens);
        assert_eq!(generator_count_big(d as u32, n as usize), gens.into());
    }
    let space = PolarSpace::new(3, 3).unwrap();
    assert_eq!(space.num_generators().unwrap(), 1120);
}

/// Replaces a regulus of a Desarguesian spread of PG(3, d) by its opposite
/// regulus. The result is a spread of PG(3, d) that is not regular.
fn hall_spread(space: &PolarSpace) -> Vec<FMatrix> {
    let spec = space.spec();
    let spread = symplectic_spread_subspaces(space);
    let (a, b, c) = (&spread[0], &spread[1], &spread[2]);
    let transversals: Vec<FMatrix> = projective_points(c, spec)
        .into_iter()
        .map(|p| {
            let mut rows = b.rows().to_vec();
            rows.push(p.clone());
            let plane = span(4, &rows, spec);
            let foot = subspace_meet(&plane, a, spec).unwrap();
            span(4, &[p, foot.rows()[0].clone()], spec)
        })
        .collect();
    let masks: Vec<BitMask> = transversals.iter().map(|t| space.subspace_mask(t)).collect();
    let (regulus, rest): (Vec<FMatrix>, Vec<FMatrix>) = spread
        .into_iter()
        .partition(|m| masks.iter().all(|t| t.intersects(&space.subspace_mask(m))));
    assert_eq!(regulus.len(), space.d() as usize + 1);
    rest.into_iter().chain(transversals).collect()
}

#[test]
fn regularity_detects_a_regulus_switch() {
    let space = PolarSpace::new(3, 2).unwrap();
    let desarguesian = symplectic_spread_subspaces(&space);
    assert!(regularity_of_subspaces(&space, &desarguesian));
    let hall = hall_spread(&space);
    assert_eq!(hall.len(), 10);
    let mut cover = BitMask::new(space.num_points());
    for m in &hall {
        let mask = space.subspace_mask(m);
        assert!(!mask.intersects(&cover));
        cover.union_with(&mask);
    }
    assert_eq!(cover.count(), 40);
    assert!(!regularity_of_subspaces(&space, &hall));
}

#[test]
fn every_symplectic_spread_of_w33_is_regular() {
    let space = PolarSpace::new(3, 2).unwrap();
    let spreads: Vec<_> = search_maximal(&space, SearchMode::Exhaustive)
        .unwrap()
        .into_iter()
        .filter(|s| s.is_spread())
        .collect();
    assert_eq!(spreads.len(), 36);
    for s in &spreads {
        assert!(check_regularity(s).unwrap());
    }
}

#[test]
fn partner_map_is_a_fixed_point_free_involution() {
    for d in [3, 5] {
        let space = PolarSpace::new(d, 2).unwrap();
        let s = construct_symplectic_spread(&space).unwrap();
        for x in space.generators().unwrap().iter().filter(|g| !s.contains(g.gen_index)) {
            let y = pair_partner(&s, x).unwrap();
            assert_ne!(y.gen_index, x.gen_index);
            assert_eq!(pair_partner(&s, y).unwrap().gen_index, x.gen_index);
            assert_eq!(s.meeting(x), s.meeting(y));
        }
    }
}

#[test]
fn off_spread_lines_meet_d_plus_one_members() {
    for d in [2, 3] {
        let space = PolarSpace::new(d, 2).unwrap();
        for s in search_maximal(&space, SearchMode::Exhaustive).unwrap().iter().filter(|s| s.is_spread()) {
            for u in space.generators().unwrap().iter().filter(|g| !s.contains(g.gen_index)) {
                assert_eq!(s.meeting(u).len(), d as usize + 1);
                assert_eq!(construct_tu(s, u).unwrap().len(), (d * d - d + 1) as usize);
            }
        }
    }
}

#[test]
fn sp42_order_matches_formula() {
    let space = PolarSpace::new(2, 2).unwrap();
    // |Sp(4, q)| = q^4 (q^2 - 1)(q^4 - 1)
    assert_eq!(symplectic_group(&space).unwrap().len(), 16 * 3 * 15);
}

#[test]
fn class_round_trip_over_w52() {
    let space = PolarSpace::new(2, 3).unwrap();
    for g in space.generators().unwrap() {
        let c = class_from_generator(g, &space);
        assert_eq!(c.ops.len(), 7);
        assert_eq!(generator_from_class(&c, &space).unwrap().gen_index, g.gen_index);
    }
}

#[test]
fn classes_of_distinct_generators_share_no_operator() {
    let space = PolarSpace::new(3, 2).unwrap();
    let gens = space.generators().unwrap();
    let classes: Vec<BTreeSet<_>> =
        gens.iter().map(|g| class_from_generator(g, &space).ops.into_iter().collect()).collect();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let shared = classes[i].intersection(&classes[j]).count();
            // shared operators correspond to shared points, d - 1 per point
            let points = gens[i].point_mask.intersection_count(&gens[j].point_mask);
            assert_eq!(shared, points * 2);
        }
    }
}

#[test]
fn heisenberg_group_of_two_qutrits() {
    let spec = polarmub::algebra::FieldSpec::prime(3).unwrap();
    let r = center_check(&spec, 2).unwrap();
    assert_eq!(r.group_order, 243);
    assert_eq!((r.center_size, r.scalar_center, r.exponent), (3, 3, 3));
    assert_eq!(r.order_counts.get(&1), Some(&1));
    assert_eq!(r.order_counts.get(&3), Some(&242));
    assert_eq!(r.squares_to_minus_identity, 0);
}

#[test]
fn counting_against_direct_binomials() {
    for (d, n) in [(2u32, 2usize), (2, 3), (3, 2), (2, 4), (3, 3), (5, 2)] {
        let top = (d as u64).pow(n as u32) + 1;
        let k = (d as u64).pow(n as u32 - 1) + 1;
        let exact = binomial(top, k) + top;
        let r = conjecture_counts(d, n).unwrap();
        match &r.lhs {
            Lhs::Exact(v) => assert_eq!(v, &exact),
            Lhs::LowerBound(v) => {
                assert!(v <= &exact);
                assert!(v > &r.rhs);
            }
        }
        assert_eq!(r.verdict == Verdict::Violated, exact > r.rhs);
        assert_eq!(r.verdict == Verdict::Equality, exact == r.rhs);
    }
}

#[test]
fn counting_scales_to_the_largest_grid_point() {
    let r = conjecture_counts(13, 8).unwrap();
    assert_eq!(r.verdict, Verdict::Violated);
    assert!(matches!(r.lhs, Lhs::LowerBound(_)));
    assert!(r.asymptotic_gate);
}
