//! Exact counting for the "exactly one covered generator" conjecture, and a
//! brute-force sweep over the subsets of an actual spread.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::is_prime;
use crate::polar::GenIndex;
use crate::spread::{covered_generators, is_complete, PartialSpread, SpreadError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("d = {0} is not prime")]
    NotPrime(u32),
    #[error("N = {0} must be at least 2")]
    BadRank(usize),
    #[error(transparent)]
    Spread(#[from] SpreadError),
    #[error("brute force over {got} subsets exceeds the limit of {limit}")]
    ScaleExceeded { got: String, limit: u64 },
}

pub type Result<T> = std::result::Result<T, CountingError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equality,
    StrictlyLess,
    Violated,
}

/// The left-hand side of the counting inequality. Evaluation stops as soon
/// as a partial product already exceeds the right-hand side, which leaves a
/// certified lower bound instead of the exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum Lhs {
    Exact(#[serde(serialize_with = "decimal")] BigUint),
    LowerBound(#[serde(serialize_with = "decimal")] BigUint),
}

impl Lhs {
    pub fn value(&self) -> &BigUint {
        match self {
            Lhs::Exact(v) | Lhs::LowerBound(v) => v,
        }
    }
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub d: u32,
    pub n: usize,
    /// `binom(d^N + 1, d^{N-1} + 1) + (d^N + 1)`.
    pub lhs: Lhs,
    /// `(d^N + 1)(d^{N-1} + 1)...(d + 1)`, the number of generators.
    #[serde(serialize_with = "decimal")]
    pub rhs: BigUint,
    pub verdict: Verdict,
    /// `d^{N-1} >= N(N+3)/2`; when true the coarse inequality chain alone
    /// rules out the conjecture.
    pub asymptotic_gate: bool,
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 1..=k {
        acc = acc * (n - k + j) / j;
    }
    acc
}

fn check_args(d: u32, n: usize) -> Result<()> {
    if !is_prime(d) {
        return Err(CountingError::NotPrime(d));
    }
    if n < 2 {
        return Err(CountingError::BadRank(n));
    }
    Ok(())
}

pub fn generator_count_big(d: u32, n: usize) -> BigUint {
    let d = BigUint::from(d);
    (1..=n as u32).map(|i| d.pow(i) + 1u32).product()
}

pub fn conjecture_counts(d: u32, n: usize) -> Result<ConjectureReport> {
    check_args(d, n)?;
    let rhs = generator_count_big(d, n);
    let big_d = BigUint::from(d);
    let spread_size = big_d.pow(n as u32) + 1u32;
    let top = spread_size.to_u64().expect("d^N + 1 fits in 64 bits for d <= 13, N <= 16");
    let k = (big_d.pow(n as u32 - 1) + 1u32).to_u64().expect("fits");
    // binom(top - k + j, j) for j = 0..=k is an increasing integer sequence
    let mut running = BigUint::one();
    let mut lhs = None;
    for j in 1..=k {
        running = running * (top - k + j) / j;
        if &running + &spread_size > rhs {
            lhs = Some(if j == k {
                Lhs::Exact(&running + &spread_size)
            } else {
                Lhs::LowerBound(&running + &spread_size)
            });
            break;
        }
    }
    let lhs = lhs.unwrap_or_else(|| Lhs::Exact(running + &spread_size));
    let verdict = match (&lhs, lhs.value().cmp(&rhs)) {
        (_, std::cmp::Ordering::Greater) => Verdict::Violated,
        (Lhs::Exact(_), std::cmp::Ordering::Equal) => Verdict::Equality,
        _ => Verdict::StrictlyLess,
    };
    Ok(ConjectureReport { d, n, lhs, rhs, verdict, asymptotic_gate: asymptotic_gate(d, n) })
}

/// `d^{M-1} >= M(M+3)/2`, compared exactly.
pub fn asymptotic_gate(d: u32, m: usize) -> bool {
    let lhs = BigUint::from(d).pow(m as u32 - 1);
    lhs >= BigUint::from(m * (m + 3) / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BruteForceClaim {
    /// Every subset covers exactly one further generator.
    ExactlyOne,
    /// Every subset covers at least one, some more than one.
    AtLeastOne,
    /// Some subset covers none.
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForceSummary {
    pub d: u8,
    pub n: usize,
    pub subset_size: usize,
    pub subsets: usize,
    /// Number of subsets per count of covered generators.
    pub covered_histogram: BTreeMap<usize, usize>,
    pub exactly_one: usize,
    /// Distinct covered generators over all subsets.
    pub distinct_covered: usize,
    /// Subsets whose single covered generator, together with the rest of the
    /// spread, is complete of size `d^N - d^{N-1} + 1`.
    pub complete_replacements: usize,
    pub first_failure: Option<Vec<GenIndex>>,
    pub claim: BruteForceClaim,
}

const MAX_SUBSETS: u64 = 200_000;

/// Sweeps every `(d^{N-1} + 1)`-subset of the spread `s`.
pub fn brute_force_conjecture(s: &PartialSpread<'_>) -> Result<BruteForceSummary> {
    let space = s.space();
    if !s.is_spread() {
        return Err(SpreadError::NotASpread.into());
    }
    let d = space.d() as usize;
    let n = space.n();
    let t = d.pow(n as u32 - 1) + 1;
    let total = binomial(s.len() as u64, t as u64);
    if total > BigUint::from(MAX_SUBSETS) {
        return Err(CountingError::ScaleExceeded { got: total.to_string(), limit: MAX_SUBSETS });
    }
    let target_size = d.pow(n as u32) - d.pow(n as u32 - 1) + 1;
    let members = s.members();
    let mut summary = BruteForceSummary {
        d: space.d(),
        n,
        subset_size: t,
        subsets: 0,
        covered_histogram: BTreeMap::new(),
        exactly_one: 0,
        distinct_covered: 0,
        complete_replacements: 0,
        first_failure: None,
        claim: BruteForceClaim::ExactlyOne,
    };
    let mut seen = BTreeSet::new();
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        let chosen: Vec<GenIndex> = idx.iter().map(|&i| members[i]).collect();
        let sub = PartialSpread::new(space, chosen.iter().copied())?;
        let covered = covered_generators(&sub);
        summary.subsets += 1;
        *summary.covered_histogram.entry(covered.len()).or_insert(0) += 1;
        seen.extend(covered.iter().map(|g| g.gen_index));
        if let [g] = covered.as_slice() {
            summary.exactly_one += 1;
            let replaced = s.without(&chosen).with(g.gen_index)?;
            if replaced.len() == target_size && is_complete(&replaced).complete {
                summary.complete_replacements += 1;
            }
        } else if summary.first_failure.is_none() {
            summary.first_failure = Some(chosen.clone());
        }
        // next t-combination of 0..len in lexicographic order
        let len = members.len();
        let Some(pos) = (0..t).rev().find(|&i| idx[i] != i + len - t) else {
            break;
        };
        idx[pos] += 1;
        for i in pos + 1..t {
            idx[i] = idx[i - 1] + 1;
        }
    }
    summary.distinct_covered = seen.len();
    summary.claim = if summary.covered_histogram.contains_key(&0) {
        BruteForceClaim::Fails
    } else if summary.exactly_one == summary.subsets {
        BruteForceClaim::ExactlyOne
    } else {
        BruteForceClaim::AtLeastOne
    };
    Ok(summary)
}
