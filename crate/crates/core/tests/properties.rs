use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;

use polarmub::algebra::{kernel, rref, span, subspace_meet, subspace_sum, FMatrix, FVector, FieldSpec};
use polarmub::cli::{deserialize_pauli_ops, deserialize_spread, serialize_pauli_ops, serialize_spread, Format};
use polarmub::counting::binomial;
use polarmub::pauli::{class_from_generator, commutes, pauli_matrix, PauliOp};
use polarmub::polar::PolarSpace;
use polarmub::spread::PartialSpread;

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|d| FieldSpec::prime(d).unwrap())
}

fn matrix(spec: FieldSpec, rows: usize, cols: usize) -> impl Strategy<Value = (FieldSpec, Vec<FVector>)> {
    let d = spec.d();
    prop::collection::vec(prop::collection::vec(0..d, cols), rows).prop_map(move |rs| {
        let vs = rs.into_iter().map(|r| FVector::new(r, &spec)).collect();
        (spec.clone(), vs)
    })
}

fn spec_and_rows() -> impl Strategy<Value = (FieldSpec, Vec<FVector>)> {
    (field(), 0usize..6).prop_flat_map(|(spec, rows)| matrix(spec, rows, 5))
}

proptest! {
    #[test]
    fn rref_is_idempotent_and_basis_free((spec, rows) in spec_and_rows(), seed in any::<u64>()) {
        let m = span(5, &rows, &spec);
        prop_assert_eq!(rref(&m, &spec), m.clone());
        // adding combinations of existing rows does not change the span
        let mut mixed = rows.clone();
        if !rows.is_empty() {
            let i = (seed % rows.len() as u64) as usize;
            let k = (seed / 7 % spec.d() as u64) as u8;
            let extra = rows[i].scale(k, &spec).add(&rows[(i + 1) % rows.len()], &spec);
            mixed.push(extra);
            mixed.reverse();
        }
        prop_assert_eq!(span(5, &mixed, &spec), m);
    }

    #[test]
    fn meet_and_sum_dimensions((spec, a) in spec_and_rows(), extra in prop::collection::vec(prop::collection::vec(0u8..2, 5), 0..5)) {
        let b: Vec<FVector> = extra.into_iter().map(|r| FVector::new(r, &spec)).collect();
        let ma = span(5, &a, &spec);
        let mb = span(5, &b, &spec);
        let sum = subspace_sum(&ma, &mb, &spec).unwrap();
        let meet = subspace_meet(&ma, &mb, &spec).unwrap();
        prop_assert_eq!(sum.rank() + meet.rank(), ma.rank() + mb.rank());
        for v in meet.rows() {
            prop_assert!(polarmub::algebra::contains(&ma, v, &spec));
            prop_assert!(polarmub::algebra::contains(&mb, v, &spec));
        }
    }

    #[test]
    fn kernel_annihilates((spec, rows) in spec_and_rows()) {
        let m = FMatrix::new(5, rows.clone(), &spec).unwrap();
        let k = kernel(&m, &spec);
        prop_assert_eq!(k.rank() + span(5, &rows, &spec).rank(), 5);
        for v in k.rows() {
            for r in &rows {
                prop_assert_eq!(r.dot(v, &spec), 0);
            }
        }
    }

    #[test]
    fn vector_codes_round_trip(d in prop::sample::select(PRIMES.to_vec()), code in 0usize..2401) {
        let d = d as u8;
        let len = 4;
        let code = code % (d as usize).pow(len as u32);
        prop_assert_eq!(FVector::from_code(code, len, d).code(d), code);
    }

    #[test]
    fn binomial_symmetry_and_rows(n in 0u64..60, k in 0u64..60) {
        prop_assert_eq!(binomial(n, k.min(n)), binomial(n, n - k.min(n)));
        let row: BigUint = (0..=n).map(|j| binomial(n, j)).sum();
        prop_assert_eq!(row, BigUint::from(2u32).pow(n as u32));
        if k >= 1 && k <= n {
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
    }

    #[test]
    fn pauli_ops_json_round_trip(d in prop::sample::select(vec![2u32, 3, 5]), raw in prop::collection::vec((prop::collection::vec(0u8..5, 3), prop::collection::vec(0u8..5, 3), 0u8..5), 0..6)) {
        let spec = FieldSpec::prime(d).unwrap();
        let dd = spec.d();
        let phase_mod = if dd == 2 { 4 } else { dd };
        let ops: Vec<PauliOp> = raw
            .into_iter()
            .map(|(a, b, p)| {
                let a = a.into_iter().map(|x| x % dd).collect();
                let b = b.into_iter().map(|x| x % dd).collect();
                PauliOp::new(a, b, p % phase_mod, &spec).unwrap()
            })
            .collect();
        prop_assert_eq!(deserialize_pauli_ops(&serialize_pauli_ops(&ops), &spec).unwrap(), ops);
    }

    #[test]
    fn products_follow_symplectic_sums(
        (d, n) in prop::sample::select(vec![(2u32, 2usize), (3, 2), (2, 3), (5, 1)]),
        u in 0usize..4096,
        v in 0usize..4096,
    ) {
        let space = PolarSpace::new(d, n).unwrap();
        let spec = space.spec();
        let size = (d as usize).pow(2 * n as u32);
        let x = FVector::from_code(u % size, 2 * n, spec.d());
        let y = FVector::from_code(v % size, 2 * n, spec.d());
        let (p, q) = (PauliOp::from_symplectic(&x, spec), PauliOp::from_symplectic(&y, spec));
        let pq = &pauli_matrix(&p, spec).unwrap() * &pauli_matrix(&q, spec).unwrap();
        let r = pauli_matrix(&PauliOp::from_symplectic(&x.add(&y, spec), spec), spec).unwrap();
        // pq = c * r for a unit scalar c
        let i = (0..r.dim()).find(|&i| r[(i, 0)].norm() > 0.5).unwrap();
        let c: Complex64 = pq[(i, 0)] / r[(i, 0)];
        prop_assert!((c.norm() - 1.0).abs() < 1e-9);
        prop_assert!(pq.distance(&r.scale(c)) < 1e-9);
        prop_assert_eq!(commutes(&p, &q, &space), commutes(&q, &p, &space));
    }
}

fn random_partial_spread<'a>(space: &'a PolarSpace, picks: &[usize]) -> PartialSpread<'a> {
    let count = space.num_generators().unwrap();
    let mut ps = PartialSpread::empty(space);
    for &p in picks {
        let g = p % count;
        if let Ok(next) = ps.with(g) {
            ps = next;
        }
    }
    ps
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spread_serialization_round_trip(
        (d, n) in prop::sample::select(vec![(2u32, 2usize), (3, 2), (2, 3), (5, 2)]),
        picks in prop::collection::vec(any::<usize>(), 0..12),
    ) {
        let space = PolarSpace::new(d, n).unwrap();
        let ps = random_partial_spread(&space, &picks);
        for format in [Format::Json, Format::Text] {
            let text = serialize_spread(&ps, format);
            let back = deserialize_spread(&text).unwrap().to_partial_spread(&space).unwrap();
            prop_assert_eq!(&back, &ps);
        }
        prop_assert!(ps.len() <= (d as usize).pow(n as u32) + 1);
        prop_assert_eq!(ps.is_spread(), ps.len() == (d as usize).pow(n as u32) + 1);
    }

    #[test]
    fn classes_are_closed_and_commuting(
        (d, n) in prop::sample::select(vec![(2u32, 2usize), (3, 2), (2, 3)]),
        g in any::<usize>(),
    ) {
        let space = PolarSpace::new(d, n).unwrap();
        let spec = space.spec();
        let gen = space.generator(g % space.num_generators().unwrap());
        let class = class_from_generator(gen, &space);
        let images: std::collections::BTreeSet<FVector> = class.ops.iter().map(|o| o.symplectic()).collect();
        prop_assert_eq!(images.len(), class.ops.len());
        for a in &class.ops {
            for b in &class.ops {
                prop_assert!(commutes(a, b, &space));
                let s = a.symplectic().add(&b.symplectic(), spec);
                prop_assert!(s.is_zero() || images.contains(&s));
            }
        }
    }
}
