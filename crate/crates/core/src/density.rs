//! Explicit sequences of relative degrees converging to a target `a/b`.
//!
//! Factor `j` (for `j = 1..=b-a`) is the pair `(Z_{q^n}, Z_p ⋊ Z_{q^n})` with
//! `n = a+j-1`, whose relative degree tends to `n/(n+1)` as `p` grows. With
//! all primes distinct the factor orders are coprime, the degree of the
//! product is the product of the factor degrees, and the limits telescope
//! to `a/b`.

use serde::Serialize;

use crate::analytic::{sd_formula_2groups, sd_formula_t21, TwoGroupFamily};
use crate::arith::is_prime;
use crate::bitset::BitSet;
use crate::degrees::Degrees;
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::group::{direct_product_capped, FiniteGroup, DEFAULT_ORDER_CAP};
use crate::lattice::all_subgroups_capped;
use crate::rational::ExactRational;

const SEARCH_LIMIT: u64 = 1 << 63;

/// Smallest prime `p > after` with `p ≡ 1 (mod q)`.
pub fn next_prime_in_ap(q: u64, after: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("modulus q = {q} < 2")));
    }
    // first candidate ≡ 1 (mod q) strictly above `after`
    let mut p = match after.checked_sub(1) {
        Some(x) => after - x % q + q,
        None => 1 + q,
    };
    if p <= after {
        p += q;
    }
    while p < SEARCH_LIMIT {
        if is_prime(p) {
            return Ok(p);
        }
        p = p.checked_add(q).ok_or(Error::SearchBoundExceeded)?;
    }
    Err(Error::SearchBoundExceeded)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityFactor {
    pub q: u64,
    pub n: u64,
    pub p: u64,
}

impl DensityFactor {
    pub fn value(&self) -> ExactRational {
        sd_formula_t21(self.p, self.n).sd_rel_top
    }

    pub fn limit(&self) -> ExactRational {
        ExactRational::new(self.n, self.n + 1)
    }

    pub fn spec(&self) -> FamilySpec {
        FamilySpec::T21Frobenius {
            p: self.p,
            q: self.q,
            n: self.n as u32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityPlan {
    pub a: u64,
    pub b: u64,
    pub min_p: u64,
    pub target: ExactRational,
    pub factors: Vec<DensityFactor>,
    pub achieved: ExactRational,
    pub error: ExactRational,
}

fn next_unused_prime(after: u64, used: &[u64]) -> u64 {
    (after + 1..)
        .find(|&x| is_prime(x) && !used.contains(&x))
        .expect("primes are unbounded")
}

/// Plan for `a/b` with every `p_j >= min_p`.
pub fn build_plan(a: u64, b: u64, min_p: u64) -> Result<DensityPlan> {
    if a == 0 || a >= b {
        return Err(Error::InvalidArgument(format!("need 0 < a < b, got {a}/{b}")));
    }
    let count = b - a;
    let mut qs: Vec<u64> = Vec::with_capacity(count as usize);
    let mut last = 2;
    for _ in 0..count {
        last = next_unused_prime(last, &qs);
        qs.push(last);
    }
    let mut used = qs.clone();
    let mut factors = Vec::with_capacity(qs.len());
    for (j, &q) in qs.iter().enumerate() {
        let mut p = next_prime_in_ap(q, min_p.saturating_sub(1))?;
        while used.contains(&p) {
            p = next_prime_in_ap(q, p)?;
        }
        used.push(p);
        factors.push(DensityFactor { q, n: a + j as u64, p });
    }
    let target = ExactRational::new(a, b);
    let achieved: ExactRational = factors.iter().map(DensityFactor::value).product();
    let error = achieved.abs_diff(&target);
    Ok(DensityPlan {
        a,
        b,
        min_p,
        target,
        factors,
        achieved,
        error,
    })
}

fn next_min_p(plan: &DensityPlan) -> u64 {
    let top = plan.factors.iter().map(|f| f.p).max().unwrap_or(plan.min_p);
    (2 * plan.min_p).max(top + 1)
}

/// `steps` plans along a doubling `min_p` schedule starting at 3; every
/// `p_j` increases strictly from row to row.
pub fn convergence_table(a: u64, b: u64, steps: usize) -> Result<Vec<DensityPlan>> {
    let mut rows = Vec::with_capacity(steps);
    let mut min_p = 3;
    for _ in 0..steps {
        let plan = build_plan(a, b, min_p)?;
        min_p = next_min_p(&plan);
        rows.push(plan);
    }
    Ok(rows)
}

/// Doubling schedule until the error drops below `tol`, with the last row
/// replaced by the smallest `min_p` that reaches `tol`.
pub fn converge_to_tolerance(
    a: u64,
    b: u64,
    tol: &ExactRational,
    max_steps: usize,
) -> Result<Vec<DensityPlan>> {
    let mut rows: Vec<DensityPlan> = Vec::new();
    let mut min_p = 3;
    for _ in 0..max_steps {
        let plan = build_plan(a, b, min_p)?;
        if &plan.error < tol {
            let lo = rows.last().map_or(2, |r| r.min_p);
            let mut best = plan;
            let (mut lo, mut hi) = (lo, best.min_p);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                let candidate = build_plan(a, b, mid)?;
                if &candidate.error < tol {
                    hi = mid;
                    best = candidate;
                } else {
                    lo = mid;
                }
            }
            rows.push(best);
            return Ok(rows);
        }
        min_p = next_min_p(&plan);
        rows.push(plan);
    }
    Ok(rows)
}

/// `(n, sd(D_{2^n}))` for `n = 3, 4, ...`: the sequence approaching 0.
pub fn zero_target_table(steps: usize) -> Vec<(u32, ExactRational)> {
    (3..3 + steps as u32)
        .map(|n| (n, sd_formula_2groups(TwoGroupFamily::Dihedral, n).expect("n >= 3")))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceCheck {
    pub order: usize,
    pub brute_force: ExactRational,
    pub analytic: ExactRational,
    pub equal: bool,
}

pub fn plan_order(plan: &DensityPlan) -> Option<u64> {
    plan.factors
        .iter()
        .try_fold(1u64, |acc, f| acc.checked_mul(f.spec().order()?))
}

/// Builds `Π (Z_{p_j} ⋊ Z_{q_j^{n_j}})` with `H = Π Z_{q_j^{n_j}}` and compares
/// the brute-force `sd(H, G)` with the plan's exact value.
pub fn verify_smallest_instance(plan: &DensityPlan) -> Result<InstanceCheck> {
    verify_smallest_instance_capped(plan, DEFAULT_ORDER_CAP)
}

pub fn verify_smallest_instance_capped(plan: &DensityPlan, cap: usize) -> Result<InstanceCheck> {
    let order = plan_order(plan).unwrap_or(u64::MAX);
    if order > cap as u64 {
        return Err(Error::OrderCapExceeded {
            order: order.min(usize::MAX as u64) as usize,
            cap,
        });
    }
    let mut group: Option<FiniteGroup> = None;
    // members of H as indices of the partial product
    let mut h: Vec<usize> = vec![0];
    for f in &plan.factors {
        let g = f.spec().build_capped(cap)?;
        let top = f.q.pow(f.n as u32) as usize;
        // Z_{q^n} = {(0, b)} sits at indices 0..q^n in the semidirect product
        let m = g.order();
        h = h.iter().flat_map(|&x| (0..top).map(move |y| x * m + y)).collect();
        group = Some(match group {
            None => g,
            Some(acc) => direct_product_capped(&acc, &g, cap)?,
        });
    }
    let group = group.ok_or_else(|| Error::InvalidArgument("empty plan".into()))?;
    let lattice = all_subgroups_capped(&group, cap)?;
    let members = BitSet::from_indices(group.order(), h);
    let i = lattice
        .index_of(&members)
        .ok_or_else(|| Error::InvalidArgument("distinguished subgroup not found".into()))?;
    let brute_force = Degrees::new(&group, &lattice).sd_rel(i);
    Ok(InstanceCheck {
        order: group.order(),
        equal: brute_force == plan.achieved,
        brute_force,
        analytic: plan.achieved.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn r(n: u64, d: u64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn primes_in_progression() {
        assert_eq!(next_prime_in_ap(3, 1), Ok(7));
        assert_eq!(next_prime_in_ap(2, 2), Ok(3));
        assert_eq!(next_prime_in_ap(5, 10), Ok(11));
        assert_eq!(next_prime_in_ap(3, 7), Ok(13));
        assert_eq!(next_prime_in_ap(3, 0), Ok(7));
        assert!(next_prime_in_ap(1, 5).is_err());
        for q in 2..30 {
            for after in 0..200 {
                let p = next_prime_in_ap(q, after).unwrap();
                let brute = (after + 1..).find(|&x| is_prime(x) && x % q == 1).unwrap();
                assert_eq!(p, brute);
            }
        }
    }

    #[test]
    fn plan_examples() {
        let plan = build_plan(1, 2, 3).unwrap();
        assert_eq!(plan.factors, vec![DensityFactor { q: 3, n: 1, p: 7 }]);
        assert_eq!(plan.achieved, r(7, 10));
        assert_eq!(plan.error, r(1, 5));

        let plan = build_plan(2, 3, 199).unwrap();
        assert_eq!(plan.factors[0].p, 199);
        assert_eq!(plan.error, r(2, 204));
        assert!(plan.error < r(1, 100));

        let plan = build_plan(2, 4, 1000).unwrap();
        assert_eq!(plan.factors.len(), 2);
        let limit: ExactRational = plan.factors.iter().map(DensityFactor::limit).product();
        assert_eq!(limit, r(1, 2));
        assert_eq!(
            plan.achieved,
            plan.factors.iter().map(DensityFactor::value).product::<ExactRational>()
        );
        assert!(build_plan(3, 3, 5).is_err());
        assert!(build_plan(0, 3, 5).is_err());
    }

    #[test]
    fn single_factor_error_is_two_over_p_plus_five() {
        for min_p in [3u64, 50, 199, 1000, 123_457] {
            let plan = build_plan(2, 3, min_p).unwrap();
            let p = plan.factors[0].p;
            assert_eq!(plan.error, r(2, p + 5));
        }
    }

    #[test]
    fn plans_use_distinct_coprime_primes() {
        for (a, b) in [(1, 4), (2, 7), (3, 9), (1, 8)] {
            for min_p in [2u64, 3, 10, 100] {
                let plan = build_plan(a, b, min_p).unwrap();
                let orders: Vec<u64> = plan.factors.iter().map(|f| f.spec().order().unwrap()).collect();
                for i in 0..orders.len() {
                    for j in i + 1..orders.len() {
                        assert_eq!(orders[i].gcd(&orders[j]), 1, "{a}/{b} min_p={min_p}");
                    }
                }
                for f in &plan.factors {
                    assert_eq!(f.p % f.q, 1);
                    assert!(f.p >= min_p);
                    assert!(f.spec().validate().is_ok());
                }
            }
        }
    }

    #[test]
    fn tables_decrease_strictly() {
        for (a, b) in [(2, 3), (1, 2), (2, 5), (3, 4)] {
            let t = convergence_table(a, b, 12).unwrap();
            for w in t.windows(2) {
                assert!(w[1].min_p > w[0].min_p);
                assert!(w[1].error < w[0].error, "{a}/{b}");
            }
        }
    }

    #[test]
    fn tolerance_is_reached_at_smallest_prime() {
        let t = converge_to_tolerance(2, 3, &r(1, 100), 64).unwrap();
        let last = t.last().unwrap();
        assert_eq!(last.factors[0].p, 199);
        assert!(t[..t.len() - 1].iter().all(|row| row.error >= r(1, 100)));
    }

    #[test]
    fn zero_target_sequence_shrinks() {
        let t = zero_target_table(30);
        assert_eq!(t[0], (3, r(23, 25)));
        assert!(t.windows(2).skip(1).all(|w| w[1].1 < w[0].1));
        assert!(t.last().unwrap().1 < r(1, 1000));
    }

    #[test]
    fn smallest_instances_brute_force() {
        let check = verify_smallest_instance(&build_plan(1, 2, 3).unwrap()).unwrap();
        assert_eq!(check.order, 21);
        assert_eq!(check.brute_force, r(7, 10));
        assert!(check.equal);

        let check = verify_smallest_instance(&build_plan(2, 3, 3).unwrap()).unwrap();
        assert_eq!(check.order, 63);
        assert_eq!(check.brute_force, r(5, 6));
        assert!(check.equal);

        let plan = build_plan(1, 3, 3).unwrap();
        assert!(matches!(
            verify_smallest_instance(&plan),
            Err(Error::OrderCapExceeded { .. })
        ));
        let check = verify_smallest_instance_capped(&plan, 6000).unwrap();
        assert!(check.equal);
    }
}
