//! Cyclic partitions and the exact data of the C*-fixed points they label.
//!
//! A cyclic K-partition of N is a K-tuple of nonnegative integers summing to
//! N, taken up to rotation. Each class labels one fixed point: a split bundle
//! `⊕ O(α_i)` with a cyclic monomial Higgs field. All weights and the
//! regulated norm μ are exact rationals.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_ratio, int, rat, ratio_string, Rational, RationalMatrix, RationalVector};

/// Validates the (K, N) pair used throughout: K ≥ 2, N ≥ 1, gcd(K, N) = 1.
pub fn check_rank_pole(k: u32, n: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::RankTooSmall(k));
    }
    if n == 0 {
        return Err(Error::ZeroPole);
    }
    if k.gcd(&n) != 1 {
        return Err(Error::NotCoprime { k, n });
    }
    Ok(())
}

/// Lexicographically least rotation of `parts`.
pub fn canonical_rotation(parts: &[u32]) -> Vec<u32> {
    let len = parts.len();
    (0..len.max(1))
        .map(|r| {
            let mut rotated = parts.to_vec();
            if len > 0 {
                rotated.rotate_left(r);
            }
            rotated
        })
        .min()
        .unwrap_or_default()
}

/// A cyclic K-partition of N, stored as its canonical rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicPartition {
    k: u32,
    n: u32,
    parts: Vec<u32>,
}

impl CyclicPartition {
    /// Builds the class of `parts`; K is `parts.len()` and N its sum.
    pub fn new(parts: &[u32]) -> Result<Self> {
        let k = u32::try_from(parts.len()).map_err(|_| Error::InvalidPartition("too many parts".into()))?;
        let n: u32 = parts.iter().sum();
        check_rank_pole(k, n)?;
        Ok(Self {
            k,
            n,
            parts: canonical_rotation(parts),
        })
    }

    /// Like [`CyclicPartition::new`] but also checks the tuple against an expected (K, N).
    pub fn with_shape(k: u32, n: u32, parts: &[u32]) -> Result<Self> {
        let p = Self::new(parts)?;
        if p.k != k || p.n != n {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is a {}-partition of {}, expected a {k}-partition of {n}",
                p.k, p.n
            )));
        }
        Ok(p)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn parts_i64(&self) -> Vec<i64> {
        self.parts.iter().map(|&b| i64::from(b)).collect()
    }

    pub fn as_vector(&self) -> RationalVector {
        RationalVector::from_integers(self.parts_i64())
    }
}

impl fmt::Display for CyclicPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "[({})]", body.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionRecord {
    #[serde(rename = "K")]
    k: u32,
    #[serde(rename = "N")]
    n: u32,
    b: Vec<u32>,
}

impl Serialize for CyclicPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionRecord {
            k: self.k,
            n: self.n,
            b: self.parts.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclicPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = PartitionRecord::deserialize(d)?;
        CyclicPartition::with_shape(rec.k, rec.n, &rec.b).map_err(serde::de::Error::custom)
    }
}

/// Every cyclic K-partition of N, canonical rotations in lexicographic order.
pub fn enumerate_cyclic_partitions(k: u32, n: u32) -> Result<Vec<CyclicPartition>> {
    check_rank_pole(k, n)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k as usize);
    // Ordered tuples are generated in lexicographic order, so keeping only
    // those that are their own canonical rotation yields a sorted list.
    compositions(k as usize, n, &mut current, &mut |tuple| {
        if canonical_rotation(tuple) == tuple {
            out.push(CyclicPartition {
                k,
                n,
                parts: tuple.to_vec(),
            });
        }
    });
    Ok(out)
}

fn compositions(slots: usize, remaining: u32, current: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if current.len() + 1 == slots {
        current.push(remaining);
        visit(current);
        current.pop();
        return;
    }
    for b in 0..=remaining {
        current.push(b);
        compositions(slots, remaining - b, current, visit);
        current.pop();
    }
}

/// Expected class count `binom(N+K-1, K-1) / K`, valid when gcd(K, N) = 1.
pub fn expected_class_count(k: u32, n: u32) -> u128 {
    let (k, n) = (u128::from(k), u128::from(n));
    let mut binom: u128 = 1;
    for i in 1..k {
        binom = binom * (n + i) / i;
    }
    binom / k
}

/// The reversal `(b_1..b_K) -> (b_K..b_1)`, re-canonicalized.
pub fn involution_r(p: &CyclicPartition) -> CyclicPartition {
    let mut reversed = p.parts.clone();
    reversed.reverse();
    CyclicPartition {
        k: p.k,
        n: p.n,
        parts: canonical_rotation(&reversed),
    }
}

/// `B_{ij} = (-(K-1) + 2((j-i) mod K)) / 2K`.
pub fn b_matrix(k: u32) -> RationalMatrix {
    let size = k as usize;
    let k = i64::from(k);
    RationalMatrix::from_fn(size, |i, j| {
        let shift = (j as i64 - i as i64).rem_euclid(k);
        rat(-(k - 1) + 2 * shift, 2 * k)
    })
}

/// `2K · B b` as an integer vector (row i of `2K·B` has integer entries).
pub fn scaled_b_image(parts: &[u32]) -> Vec<i64> {
    let k = parts.len() as i64;
    (0..parts.len())
        .map(|i| {
            parts
                .iter()
                .enumerate()
                .map(|(j, &b)| {
                    let shift = (j as i64 - i as i64).rem_euclid(k);
                    (-(k - 1) + 2 * shift) * i64::from(b)
                })
                .sum()
        })
        .collect()
}

/// Parabolic weights `α = -B b`. Works on the ordered tuple given, so rotating
/// `b` rotates `α` the same way.
pub fn parabolic_weights_of(parts: &[u32]) -> RationalVector {
    let two_k = 2 * parts.len() as i64;
    scaled_b_image(parts).iter().map(|&v| rat(-v, two_k)).collect()
}

pub fn parabolic_weights(p: &CyclicPartition) -> RationalVector {
    parabolic_weights_of(&p.parts)
}

/// `μ = K/(K+N) ‖B b‖²`.
pub fn mu_exact(p: &CyclicPartition) -> Rational {
    // ‖Bb‖² = ‖2K·Bb‖² / 4K², so μ = ‖2K·Bb‖² / (4K(K+N))
    let sq: i64 = scaled_b_image(&p.parts).iter().map(|v| v * v).sum();
    let k = i64::from(p.k);
    rat(sq, 4 * k * (k + i64::from(p.n)))
}

/// Exact data of the fixed point labelled by a cyclic partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointData {
    #[serde(flatten)]
    pub partition: CyclicPartition,
    pub alpha: RationalVector,
    /// Powers of z in φ_b/dz: `b_1..b_{K-1}` on the superdiagonal, `b_K` in the lower-left corner.
    #[serde(skip)]
    pub exponents: Vec<u32>,
    #[serde(with = "ratio_string")]
    pub mu: Rational,
}

impl FixedPointData {
    /// Nonzero entries of φ_b/dz as `(row, col, power of z)`, 0-based.
    pub fn higgs_entries(&self) -> Vec<(usize, usize, u32)> {
        let k = self.exponents.len();
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &e)| (i, (i + 1) % k, e))
            .collect()
    }

    /// Checks `Σα = 0`, `α_i - α_{i+1} = b_i - N/K` and `μ = K/(K+N) Σα²`.
    pub fn check_invariants(&self) -> bool {
        let k = self.partition.k as usize;
        let n_over_k = rat(i64::from(self.partition.n), i64::from(self.partition.k));
        let sum_zero = self.alpha.sum().is_zero();
        let steps = (0..k)
            .all(|i| &self.alpha[i] - &self.alpha[(i + 1) % k] == int(i64::from(self.partition.parts[i])) - &n_over_k);
        let ratio = rat(
            i64::from(self.partition.k),
            i64::from(self.partition.k + self.partition.n),
        );
        sum_zero && steps && self.mu == ratio * self.alpha.norm_sq()
    }
}

pub fn fixed_point(p: &CyclicPartition) -> FixedPointData {
    FixedPointData {
        partition: p.clone(),
        alpha: parabolic_weights(p),
        exponents: p.parts.clone(),
        mu: mu_exact(p),
    }
}

/// Generator exponents `a_0..a_{K-1}` of the distinguished module over
/// `C[y,z]/(y^K - z^N)`, from `x^N x^{a_i} = x^{K b_{i+1}} x^{a_{i+1}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleGenerators {
    pub exponents: Vec<i64>,
    /// False when some `a_i < 0` for this representative; nothing is renormalized.
    pub nonnegative: bool,
}

pub fn module_generators_of(parts: &[u32], n: u32) -> Result<ModuleGenerators> {
    let k = parts.len() as i64;
    let n = i64::from(n);
    let mut exponents = Vec::with_capacity(parts.len());
    let mut a = 0i64;
    for &b in parts {
        exponents.push(a);
        a += n - k * i64::from(b);
    }
    if a != 0 {
        return Err(Error::Internal(format!("generator relations do not close: a_K = {a}")));
    }
    for (i, (&ai, &bi)) in exponents.iter().zip(parts).enumerate() {
        let next = exponents[(i + 1) % parts.len()];
        if n + ai != k * i64::from(bi) + next {
            return Err(Error::Internal(format!("relation {i} fails")));
        }
        if (ai - i as i64 * n).rem_euclid(k) != 0 {
            return Err(Error::Internal(format!("a_{i} = {ai} is not congruent to {i}N mod K")));
        }
    }
    let nonnegative = exponents.iter().all(|&a| a >= 0);
    Ok(ModuleGenerators { exponents, nonnegative })
}

pub fn module_generators(p: &CyclicPartition) -> Result<ModuleGenerators> {
    module_generators_of(&p.parts, p.n)
}

/// Rotation offsets `r` for which the rotated tuple yields some negative `a_i`.
pub fn rotations_with_negative_generators(p: &CyclicPartition) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for r in 0..p.parts.len() {
        let mut rotated = p.parts.clone();
        rotated.rotate_left(r);
        if !module_generators_of(&rotated, p.n)?.nonnegative {
            bad.push(r);
        }
    }
    Ok(bad)
}

/// One-line textual summary used by table output.
pub fn describe(fp: &FixedPointData) -> String {
    format!("{} alpha={} mu={}", fp.partition, fp.alpha, format_ratio(&fp.mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn parts_of(list: &[CyclicPartition]) -> Vec<Vec<u32>> {
        list.iter().map(|p| p.parts().to_vec()).collect()
    }

    fn brute_force_classes(k: usize, n: u32) -> BTreeSet<Vec<u32>> {
        // stars and bars over bitmasks: k-1 bars among n+k-1 slots
        let slots = n as usize + k - 1;
        let mut classes = BTreeSet::new();
        for mask in 0u64..(1u64 << slots) {
            if mask.count_ones() as usize != k - 1 {
                continue;
            }
            let mut parts = Vec::with_capacity(k);
            let mut run = 0u32;
            for bit in 0..slots {
                if mask >> bit & 1 == 1 {
                    parts.push(run);
                    run = 0;
                } else {
                    run += 1;
                }
            }
            parts.push(run);
            let mut rots: Vec<Vec<u32>> = (0..k)
                .map(|r| {
                    let mut d = parts.clone();
                    d.rotate_left(r);
                    d
                })
                .collect();
            rots.sort();
            classes.insert(rots.swap_remove(0));
        }
        classes
    }

    #[test]
    fn enumerates_k2_n3() {
        let list = enumerate_cyclic_partitions(2, 3).unwrap();
        assert_eq!(parts_of(&list), vec![vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn enumerates_k3_n4() {
        let list = enumerate_cyclic_partitions(3, 4).unwrap();
        let got: BTreeSet<Vec<u32>> = parts_of(&list).into_iter().collect();
        let expected: BTreeSet<Vec<u32>> = [[1, 1, 2], [0, 1, 3], [0, 3, 1], [0, 2, 2], [0, 0, 4]]
            .iter()
            .map(|p| canonical_rotation(p))
            .collect();
        assert_eq!(got, expected);
        assert_eq!(list.len(), 5);
    }

    #[test]
    fn enumerates_k2_n1() {
        assert_eq!(parts_of(&enumerate_cyclic_partitions(2, 1).unwrap()), vec![vec![0, 1]]);
    }

    #[test]
    fn count_k3_n5_matches_brute_force() {
        assert_eq!(brute_force_classes(3, 5).len(), 7);
        assert_eq!(enumerate_cyclic_partitions(3, 5).unwrap().len(), 7);
        assert_eq!(expected_class_count(3, 5), 7);
    }

    #[test]
    fn counts_match_brute_force_up_to_16() {
        for k in 2..16u32 {
            for n in 1..=(16 - k) {
                if k.gcd(&n) != 1 {
                    continue;
                }
                let list = enumerate_cyclic_partitions(k, n).unwrap();
                let brute = brute_force_classes(k as usize, n);
                assert_eq!(list.len(), brute.len(), "K={k} N={n}");
                assert_eq!(list.len() as u128, expected_class_count(k, n), "K={k} N={n}");
                let got: BTreeSet<Vec<u32>> = parts_of(&list).into_iter().collect();
                assert_eq!(got, brute);
                let mut sorted = parts_of(&list);
                sorted.sort();
                assert_eq!(sorted, parts_of(&list));
            }
        }
    }

    #[test]
    fn rejects_non_coprime() {
        assert_eq!(enumerate_cyclic_partitions(2, 4), Err(Error::NotCoprime { k: 2, n: 4 }));
        assert!(CyclicPartition::new(&[2, 2]).is_err());
        assert_eq!(enumerate_cyclic_partitions(1, 3), Err(Error::RankTooSmall(1)));
    }

    #[test]
    fn canonical_rotation_examples() {
        assert_eq!(canonical_rotation(&[3, 0]), vec![0, 3]);
        assert_eq!(canonical_rotation(&[1, 2]), vec![1, 2]);
        assert_eq!(canonical_rotation(&[0, 3, 1]), vec![0, 3, 1]);
        assert_eq!(canonical_rotation(&[3, 1, 0]), vec![0, 3, 1]);
    }

    #[test]
    fn involution_examples() {
        let p = CyclicPartition::new(&[1, 2]).unwrap();
        assert_eq!(involution_r(&p), p);
        let q = CyclicPartition::new(&[0, 1, 3]).unwrap();
        assert_eq!(involution_r(&q).parts(), &[0, 3, 1]);
        let r = CyclicPartition::new(&[0, 0, 4]).unwrap();
        assert_eq!(involution_r(&r), r);
    }

    #[test]
    fn b_matrix_small_cases() {
        let b2 = b_matrix(2);
        assert_eq!(b2.to_string_rows(), vec![vec!["-1/4", "1/4"], vec!["1/4", "-1/4"]]);
        let b3 = b_matrix(3);
        let expected = RationalMatrix::from_fn(3, |i, j| {
            let table = [[-2, 0, 2], [2, -2, 0], [0, 2, -2]];
            rat(table[i][j], 6)
        });
        assert_eq!(b3, expected);
    }

    #[test]
    fn b_matrix_defining_identities() {
        for k in 2..=9u32 {
            let b = b_matrix(k);
            let size = k as usize;
            assert!(b.row_sums().iter().all(Zero::is_zero));
            let shift = RationalMatrix::cyclic_shift(size);
            let m_minus_id = &shift - &RationalMatrix::identity(size);
            assert_eq!(&shift * &b, &b * &shift);
            assert_eq!(&m_minus_id * &b, RationalMatrix::projector_sum_zero(size));
            assert_eq!(&b * &m_minus_id, RationalMatrix::projector_sum_zero(size));
        }
    }

    #[test]
    fn parabolic_weight_examples() {
        let w = |parts: &[u32]| parabolic_weights_of(parts);
        assert_eq!(w(&[1, 2]), RationalVector::new(vec![rat(-1, 4), rat(1, 4)]));
        assert_eq!(w(&[0, 3]), RationalVector::new(vec![rat(-3, 4), rat(3, 4)]));
        assert_eq!(w(&[0, 1]), RationalVector::new(vec![rat(-1, 4), rat(1, 4)]));
    }

    #[test]
    fn mu_examples() {
        let mu = |parts: &[u32]| mu_exact(&CyclicPartition::new(parts).unwrap());
        assert_eq!(mu(&[0, 3]), rat(9, 20));
        assert_eq!(mu(&[1, 2]), rat(1, 20));
        // (2/3)(1/16 + 1/16)
        assert_eq!(mu(&[0, 1]), rat(1, 12));
    }

    #[test]
    fn fixed_point_invariants_and_exponents() {
        let fp = fixed_point(&CyclicPartition::new(&[0, 3]).unwrap());
        assert_eq!(fp.exponents, vec![0, 3]);
        assert_eq!(fp.higgs_entries(), vec![(0, 1, 0), (1, 0, 3)]);
        let fp = fixed_point(&CyclicPartition::new(&[1, 2]).unwrap());
        assert_eq!(fp.higgs_entries(), vec![(0, 1, 1), (1, 0, 2)]);
        for k in 2..8u32 {
            for n in 1..10u32 {
                if let Ok(list) = enumerate_cyclic_partitions(k, n) {
                    for p in list {
                        let fp = fixed_point(&p);
                        assert!(fp.check_invariants(), "{p}");
                        assert_eq!(fp.mu, mu_exact(&involution_r(&p)));
                    }
                }
            }
        }
    }

    #[test]
    fn fixed_point_json_record() {
        let fp = fixed_point(&CyclicPartition::new(&[1, 2]).unwrap());
        let json = serde_json::to_value(&fp).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"K": 2, "N": 3, "b": [1, 2], "alpha": ["-1/4", "1/4"], "mu": "1/20"})
        );
        let p: CyclicPartition = serde_json::from_value(json).unwrap();
        assert_eq!(p.parts(), &[1, 2]);
    }

    #[test]
    fn module_generator_examples() {
        let g = module_generators_of(&[0, 3], 3).unwrap();
        assert_eq!(g.exponents, vec![0, 3]);
        let g = module_generators_of(&[1, 2], 3).unwrap();
        assert_eq!(g.exponents, vec![0, 1]);
        assert!(g.nonnegative);
        assert_eq!(g.exponents[1].rem_euclid(2), 1);
        // the other rotation of (0,3) goes negative and is reported, not fixed
        let g = module_generators_of(&[3, 0], 3).unwrap();
        assert_eq!(g.exponents, vec![0, -3]);
        assert!(!g.nonnegative);
        let p = CyclicPartition::new(&[0, 3]).unwrap();
        assert_eq!(rotations_with_negative_generators(&p).unwrap(), vec![1]);
    }

    #[test]
    fn canonical_representatives_have_nonnegative_generators_small_cases() {
        for k in 2..7u32 {
            for n in 1..12u32 {
                if let Ok(list) = enumerate_cyclic_partitions(k, n) {
                    for p in list {
                        let g = module_generators(&p).unwrap();
                        assert_eq!(g.exponents.len(), k as usize);
                        assert_eq!(g.exponents[0], 0);
                    }
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coprime_shape() -> impl Strategy<Value = (u32, u32)> {
            (2u32..7, 1u32..14).prop_filter("coprime", |(k, n)| k.gcd(n) == 1)
        }

        fn ordered_partition() -> impl Strategy<Value = Vec<u32>> {
            coprime_shape().prop_flat_map(|(k, n)| {
                proptest::collection::vec(0u32..=n, (k - 1) as usize).prop_filter_map("composition", move |cuts| {
                    let mut cuts = cuts;
                    cuts.sort();
                    let mut parts = Vec::with_capacity(k as usize);
                    let mut prev = 0;
                    for c in cuts {
                        parts.push(c - prev);
                        prev = c;
                    }
                    parts.push(n - prev);
                    Some(parts)
                })
            })
        }

        proptest! {
            #[test]
            fn canonical_rotation_idempotent(parts in proptest::collection::vec(0u32..5, 1..7)) {
                let c = canonical_rotation(&parts);
                prop_assert_eq!(canonical_rotation(&c), c.clone());
                prop_assert!(c <= parts);
            }

            #[test]
            fn weights_follow_step_relation(parts in ordered_partition()) {
                let k = parts.len();
                let n: u32 = parts.iter().sum();
                let alpha = parabolic_weights_of(&parts);
                prop_assert!(alpha.sum().is_zero());
                for i in 0..k {
                    let lhs = &alpha[i] - &alpha[(i + 1) % k] - int(i64::from(parts[i]))
                        + rat(i64::from(n), k as i64);
                    prop_assert!(lhs.is_zero());
                }
            }

            #[test]
            fn integer_weights_match_b_matrix(parts in ordered_partition()) {
                let b = RationalVector::from_integers(parts.iter().map(|&x| i64::from(x)));
                let via_matrix = -&b_matrix(parts.len() as u32).mul_vec(&b);
                prop_assert_eq!(parabolic_weights_of(&parts), via_matrix);
            }

            #[test]
            fn mu_is_rotation_and_reversal_invariant(parts in ordered_partition()) {
                let p = CyclicPartition::new(&parts).unwrap();
                let k = parts.len() as i64;
                let n: u32 = parts.iter().sum();
                let direct = rat(k, k + i64::from(n)) * parabolic_weights_of(&parts).norm_sq();
                prop_assert_eq!(mu_exact(&p), direct.clone());
                prop_assert_eq!(mu_exact(&involution_r(&p)), direct);
                prop_assert_eq!(involution_r(&involution_r(&p)), p);
            }

            #[test]
            fn generator_relations_hold(parts in ordered_partition()) {
                let n: u32 = parts.iter().sum();
                let g = module_generators_of(&parts, n).unwrap();
                let k = parts.len() as i64;
                for (i, a) in g.exponents.iter().enumerate() {
                    prop_assert_eq!((a - i as i64 * i64::from(n)).rem_euclid(k), 0);
                }
            }
        }
    }
}
