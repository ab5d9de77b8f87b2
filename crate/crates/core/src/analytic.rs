//! Divisor arithmetic and closed-form degree formulas, evaluated exactly from
//! integer parameters. Evaluation never needs primality, so the formulas can
//! be scanned over arbitrary integers; only building the groups does.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::arith::factorize;
use crate::degrees::Degrees;
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::lattice::all_subgroups;
use crate::rational::ExactRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorProfile {
    pub n: u64,
    pub tau: u64,
    pub sigma: u128,
    pub factorization: Vec<(u64, u32)>,
}

pub fn divisor_profile(n: u64) -> DivisorProfile {
    assert!(n >= 1, "divisor_profile(0)");
    let factorization = factorize(n);
    let tau = factorization.iter().map(|&(_, e)| e as u64 + 1).product();
    let sigma = factorization
        .iter()
        .map(|&(p, e)| {
            let p = p as u128;
            (p.pow(e + 1) - 1) / (p - 1)
        })
        .product();
    DivisorProfile {
        n,
        tau,
        sigma,
        factorization,
    }
}

pub fn tau(n: u64) -> u64 {
    divisor_profile(n).tau
}

/// `H^r_i` in `D_{2n}`: the cyclic subgroup of order `r` when `i = 0`, else
/// the `i`-th dihedral subgroup `⟨x^{n/r}, x^{i-1}y⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DihedralSubgroupId {
    pub r: u64,
    pub i: u64,
}

/// Number of pairs `(s, j)` with `s | n`, `1 <= j <= n/s` and
/// `n / lcm(r, s)` dividing `2(i - j)`.
pub fn x_ri(n: u64, r: u64, i: u64) -> Result<u64> {
    if n == 0 || r == 0 || !n.is_multiple_of(r) {
        return Err(Error::ArgumentDomain(format!("r = {r} must divide n = {n}")));
    }
    if i == 0 || i > n / r {
        return Err(Error::ArgumentDomain(format!("i = {i} outside 1..={}", n / r)));
    }
    let mut count = 0;
    for s in crate::arith::divisors(n) {
        let modulus = (n / r.lcm(&s)) as i64;
        count += (1..=n / s)
            .filter(|&j| (2 * (i as i64 - j as i64)).rem_euclid(modulus) == 0)
            .count() as u64;
    }
    Ok(count)
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn frac(num: BigInt, den: BigInt) -> ExactRational {
    ExactRational::new(num, den)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct T21Values {
    /// `sd(Z_{q^n}, Z_p ⋊ Z_{q^n})`
    pub sd_rel_top: ExactRational,
    pub sd_g: ExactRational,
}

pub fn sd_formula_t21(p: u64, n: u64) -> T21Values {
    let (p, n) = (big(p), big(n));
    let l = 2 * &n + &p + 1;
    let sd_rel_top = frac(&n * &l + 2 * (&n + 1), (&n + 1) * &l);
    let sd_g = frac((2 * &n + 1) * &l + 2 * &p * (&n + 1), &l * &l);
    T21Values { sd_rel_top, sd_g }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Type2Values {
    /// `sd(Z_{p^{n-1}}, G)`
    pub cyclic_lower: ExactRational,
    /// `sd(Z_{p^n}, G)`
    pub cyclic_top: ExactRational,
    /// `sd(Z_q ⋊ Z_{p^{n-1}}, G)`
    pub semidirect_lower: ExactRational,
    pub sd_g: ExactRational,
}

impl Type2Values {
    pub fn as_vec(&self) -> Vec<ExactRational> {
        vec![
            self.cyclic_lower.clone(),
            self.cyclic_top.clone(),
            self.semidirect_lower.clone(),
            self.sd_g.clone(),
        ]
    }
}

pub fn sd_formula_t22_type2(q: u64, n: u64) -> Result<Type2Values> {
    if q < 2 || n < 2 {
        return Err(Error::ArgumentDomain(format!("type 2 needs q >= 2, n > 1 (q={q}, n={n})")));
    }
    let (q, n) = (big(q), big(n));
    let h = &n + &q;
    Ok(Type2Values {
        cyclic_lower: frac((&n - 1) * &h + &n + 1, &n * &h),
        cyclic_top: frac((&n - 1) * &h + 2 * (&n + 1), (&n + 1) * &h),
        semidirect_lower: frac(
            (2 * &n - 1) * &h + &q * (&n + 1),
            (2 * &n + &q - 1) * &h,
        ),
        sd_g: frac(&n * &h + &q * (&n + 1), &h * &h),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Type4Values {
    /// `sd(Z_{p^n}, G)`
    pub cyclic_top: ExactRational,
    /// `sd(Z_q ⋊ Z_{p^n}, G)`
    pub semidirect: ExactRational,
    pub sd_g: ExactRational,
}

impl Type4Values {
    pub fn as_vec(&self) -> Vec<ExactRational> {
        vec![self.cyclic_top.clone(), self.semidirect.clone(), self.sd_g.clone()]
    }
}

pub fn sd_formula_t22_type4(q: u64, n: u64) -> Result<Type4Values> {
    if q < 2 || n < 1 {
        return Err(Error::ArgumentDomain(format!("type 4 needs q >= 2, n >= 1 (q={q}, n={n})")));
    }
    let (q, n) = (big(q), big(n));
    let l = 3 * &n + &q * &q + &q + 1;
    Ok(Type4Values {
        cyclic_top: frac(&n * &l + 3 * (&n + 1), (&n + 1) * &l),
        semidirect: frac(
            2 * &n * &l + 3 * &q * (&n + 1) + 3 * &n + &q + 2,
            (2 * &n + &q + 1) * &l,
        ),
        sd_g: frac(
            (3 * &n + 1) * &l + 3 * &q * &q * (&n + 1) + &q * (3 * &n + &q + 2),
            &l * &l,
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Type3Values {
    /// Shared by `Z_{p^n}` and `Z_{p^n} × Z_q`.
    pub sd_rel: ExactRational,
    pub sd_g: ExactRational,
}

pub fn sd_formula_t22_type3(r: u64, n: u64) -> Result<Type3Values> {
    if r < 2 || n < 1 {
        return Err(Error::ArgumentDomain(format!("type 3 needs r >= 2, n >= 1 (r={r}, n={n})")));
    }
    let v = sd_formula_t21(r, n);
    Ok(Type3Values {
        sd_rel: v.sd_rel_top,
        sd_g: v.sd_g,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TwoGroupFamily {
    Dihedral,
    Quaternion,
    QuasiDihedral,
}

impl TwoGroupFamily {
    pub fn min_n(self) -> u32 {
        match self {
            TwoGroupFamily::QuasiDihedral => 4,
            _ => 3,
        }
    }

    /// The order-`2^n` member.
    pub fn spec(self, n: u32) -> FamilySpec {
        match self {
            TwoGroupFamily::Dihedral => FamilySpec::Dihedral(1 << (n - 1)),
            TwoGroupFamily::Quaternion => FamilySpec::GenQuaternion(n),
            TwoGroupFamily::QuasiDihedral => FamilySpec::QuasiDihedral(n),
        }
    }
}

/// `sd` of the order-`2^n` dihedral, generalized quaternion or quasi-dihedral
/// group.
pub fn sd_formula_2groups(family: TwoGroupFamily, n: u32) -> Result<ExactRational> {
    if n < family.min_n() {
        return Err(Error::ArgumentDomain(format!(
            "{family:?} needs n >= {}, got {n}",
            family.min_n()
        )));
    }
    let pow = |e: u32| BigInt::from(1) << e;
    let nn = BigInt::from(n);
    let tail = (&nn - 1) * (&nn - 1) + 8;
    Ok(match family {
        TwoGroupFamily::Dihedral => {
            let den = &nn - 1 + pow(n);
            frac((&nn - 2) * pow(n + 2) + &nn * pow(n + 1) + tail, &den * &den)
        }
        TwoGroupFamily::Quaternion => {
            let den = &nn - 1 + pow(n - 1);
            frac((&nn - 3) * pow(n + 1) + &nn * pow(n) + tail, &den * &den)
        }
        TwoGroupFamily::QuasiDihedral => {
            let den = &nn - 1 + 3 * pow(n - 2);
            frac(
                (&nn - 3) * pow(n + 1) + &nn * pow(n) + (3 * &nn - 2) * pow(n - 1) + tail,
                &den * &den,
            )
        }
    })
}

pub fn normal_count_2groups(n: u32) -> u64 {
    n as u64 + 3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeCase {
    pub p: u64,
    pub alpha: u32,
    /// `|C(H^p_1)|`
    pub permuting: u64,
    pub sd: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralCase {
    pub n: u64,
    /// Power of 2 in `n` (0 for odd `n`).
    pub m: u32,
    /// `|C(H^1_1)|`
    pub permuting_h11: u64,
    pub sd_h11: ExactRational,
    /// One entry per odd prime divisor of `n`.
    pub per_prime: Vec<PrimeCase>,
}

/// Closed forms for `sd(H^1_1, D_{2n})` and `sd(H^p_1, D_{2n})` for `n` not a
/// power of 2.
pub fn dihedral_case_formulas(n: u64) -> Result<DihedralCase> {
    if n < 2 || n.is_power_of_two() {
        return Err(Error::ArgumentDomain(format!("n = {n} must be >= 2 and not a power of 2")));
    }
    let prof = divisor_profile(n);
    let m = n.trailing_zeros();
    let odd = n >> m;
    let (t, s) = (BigInt::from(prof.tau), BigInt::from(prof.sigma));
    let lat = &t + &s;
    let odd_factors: Vec<(u64, u32)> = prof.factorization.iter().copied().filter(|&(p, _)| p != 2).collect();

    let (permuting_h11, sd_h11, per_prime);
    if m == 0 {
        permuting_h11 = 2 * prof.tau;
        sd_h11 = frac(3 * &t + &s, 2 * &lat);
        per_prime = odd_factors
            .iter()
            .map(|&(p, alpha)| {
                let rest = big(tau(n / p.pow(alpha)));
                let pb = big(p);
                PrimeCase {
                    p,
                    alpha,
                    permuting: 2 * prof.tau + (p - 1) * tau(n / p.pow(alpha)),
                    sd: frac(
                        (2 * &pb + 4) * &t + 2 * &s + (&pb - 1) * &rest,
                        (&pb + 3) * &lat,
                    ),
                }
            })
            .collect();
    } else {
        let k = 2 * m as u64 + 1;
        let t_odd = tau(odd);
        permuting_h11 = prof.tau + k * t_odd;
        sd_h11 = frac(2 * &t + &s + big(k * t_odd), 2 * &lat);
        per_prime = odd_factors
            .iter()
            .map(|&(p, alpha)| {
                let rest = tau(odd / p.pow(alpha));
                let pb = big(p);
                PrimeCase {
                    p,
                    alpha,
                    permuting: prof.tau + k * (t_odd + (p - 1) * rest),
                    sd: frac(
                        (&pb + 3) * &t
                            + 2 * &s
                            + big(k) * (&pb + 1) * big(t_odd)
                            + big(k) * (&pb - 1) * big(rest),
                        (&pb + 3) * &lat,
                    ),
                }
            })
            .collect();
    }
    Ok(DihedralCase {
        n,
        m,
        permuting_h11,
        sd_h11,
        per_prime,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSurvivor {
    pub n: u64,
    /// Brute-force `|Im f|` of `D_{2n}`, when within the order cap.
    pub image_size: Option<usize>,
    pub excluded_by_computation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipScan {
    pub bound: u64,
    pub odd: Vec<ScanSurvivor>,
    pub even: Vec<ScanSurvivor>,
}

/// Smallest-prime-factor sieve on `0..=bound`.
fn spf_sieve(bound: usize) -> Vec<u32> {
    let mut spf = vec![0u32; bound + 1];
    for i in 2..=bound {
        if spf[i] == 0 {
            for j in (i..=bound).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

fn sieve_factor(mut n: usize, spf: &[u32]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out.push((p as u64, e));
    }
    out
}

fn tau_of(f: &[(u64, u32)]) -> u64 {
    f.iter().map(|&(_, e)| e as u64 + 1).product()
}

fn sigma_of(f: &[(u64, u32)]) -> u64 {
    f.iter().map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1)).product()
}

/// Whether `n` satisfies the necessary conditions obtained by equating
/// `sd(H^1_1, D_{2n})` with every `sd(H^{p_i}_1, D_{2n})`, together with the
/// equal-exponent consequence derived from them.
fn passes_membership_conditions(factors: &[(u64, u32)]) -> bool {
    let m = factors.iter().find(|&&(p, _)| p == 2).map_or(0, |&(_, e)| e);
    let odd: Vec<(u64, u32)> = factors.iter().copied().filter(|&(p, _)| p != 2).collect();
    if odd.is_empty() {
        return false;
    }
    if odd.iter().any(|&(_, e)| e != odd[0].1) {
        return false;
    }
    let sigma = sigma_of(factors);
    let without = |i: usize| -> u64 {
        let rest: Vec<(u64, u32)> = odd
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &f)| f)
            .collect();
        tau_of(&rest)
    };
    if m == 0 {
        let t = tau_of(factors);
        (0..odd.len()).all(|i| sigma >= t && sigma - t == 2 * without(i))
    } else {
        let k = 2 * m as u64 + 1;
        let t_odd = tau_of(&odd);
        (0..odd.len()).all(|i| sigma >= k * t_odd && sigma - k * t_odd == 2 * k * without(i))
    }
}

/// All `3 <= n <= bound` passing the membership conditions, split by parity;
/// survivors small enough to build are checked by brute force.
pub fn membership_condition_scan(bound: u64) -> Result<MembershipScan> {
    if bound > 1_000_000 {
        return Err(Error::ArgumentDomain(format!("bound {bound} exceeds 10^6")));
    }
    let spf = spf_sieve(bound as usize);
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for n in 3..=bound {
        if n.is_power_of_two() {
            continue;
        }
        let factors = sieve_factor(n as usize, &spf);
        if !passes_membership_conditions(&factors) {
            continue;
        }
        let image_size = match FamilySpec::Dihedral(n).build() {
            Ok(g) => {
                let l = all_subgroups(&g)?;
                Some(Degrees::new(&g, &l).f_image().len())
            }
            Err(Error::OrderCapExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let survivor = ScanSurvivor {
            n,
            image_size,
            excluded_by_computation: image_size.is_some_and(|s| s != 2),
        };
        if n % 2 == 1 {
            odd.push(survivor);
        } else {
            even.push(survivor);
        }
    }
    Ok(MembershipScan { bound, odd, even })
}

/// A closed form that disagrees with the brute-force value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaDiscrepancy {
    pub formula: String,
    pub instance: String,
    pub formula_value: ExactRational,
    pub brute_force: ExactRational,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn divisor_profiles() {
        let p = divisor_profile(1);
        assert_eq!((p.tau, p.sigma), (1, 1));
        let p = divisor_profile(6);
        assert_eq!((p.tau, p.sigma), (4, 12));
        let p = divisor_profile(12);
        assert_eq!((p.tau, p.sigma), (6, 28));
        let big = divisor_profile(9_223_372_036_854_775_783);
        assert_eq!(big.tau, 2);
    }

    #[test]
    fn divisor_profile_matches_enumeration() {
        for n in 1..=10_000u64 {
            let ds: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            let p = divisor_profile(n);
            assert_eq!(p.tau, ds.len() as u64);
            assert_eq!(p.sigma, ds.iter().map(|&d| d as u128).sum::<u128>());
        }
    }

    #[test]
    fn x_ri_examples() {
        assert_eq!(x_ri(3, 1, 1), Ok(2));
        assert_eq!(x_ri(3, 3, 1), Ok(4));
        for n in [3u64, 5, 9, 15, 21, 45] {
            assert_eq!(x_ri(n, 1, 1).unwrap(), tau(n));
        }
        assert!(x_ri(6, 4, 1).is_err());
        assert!(x_ri(6, 2, 4).is_err());
        assert!(x_ri(6, 2, 0).is_err());
    }

    #[test]
    fn t21_examples() {
        let v = sd_formula_t21(3, 1);
        assert_eq!(v.sd_rel_top, r(5, 6));
        assert_eq!(v.sd_g, r(5, 6));
        assert_eq!(sd_formula_t21(7, 2).sd_rel_top, r(5, 6));
        assert_eq!(sd_formula_t21(7, 1).sd_rel_top, r(7, 10));
        // tends to n/(n+1)
        let far = sd_formula_t21(1_000_000_007, 3).sd_rel_top;
        assert!(far.abs_diff(&r(3, 4)) < r(1, 100_000_000));
    }

    fn image_with_one(v: Vec<ExactRational>) -> usize {
        let mut d = v;
        d.push(ExactRational::one());
        d.sort();
        d.dedup();
        d.len()
    }

    #[test]
    fn type2_examples() {
        // all four values differ at (q, n) = (5, 4)
        assert_eq!(image_with_one(sd_formula_t22_type2(5, 4).unwrap().as_vec()), 5);
        // the only coincidence for valid parameters is at (5, 3)
        let w = sd_formula_t22_type2(5, 3).unwrap();
        assert_eq!(w.cyclic_top, w.semidirect_lower);
        assert_eq!(w.cyclic_top, r(3, 4));
        assert_eq!(image_with_one(w.as_vec()), 4);
        assert_eq!(image_with_one(sd_formula_t22_type2(5, 2).unwrap().as_vec()), 5);
        for q in 2..40 {
            for n in 2..10 {
                assert!(sd_formula_t22_type2(q, n).unwrap().sd_g <= ExactRational::one());
            }
        }
        assert!(sd_formula_t22_type2(5, 1).is_err());
    }

    #[test]
    fn type4_values_distinct_and_below_one() {
        // p | q - 1 forces q >= 3
        for q in 3..30 {
            for n in 1..8 {
                let v = sd_formula_t22_type4(q, n).unwrap().as_vec();
                assert!(v.iter().all(|x| x < &ExactRational::one()));
                assert!(v[0] != v[1] && v[1] != v[2] && v[0] != v[2], "q={q} n={n}");
            }
        }
    }

    #[test]
    fn type3_equality_only_at_3_1() {
        let v = sd_formula_t22_type3(3, 1).unwrap();
        assert_eq!(v.sd_rel, r(5, 6));
        assert_eq!(v.sd_g, r(5, 6));
        let v = sd_formula_t22_type3(5, 1).unwrap();
        assert_ne!(v.sd_rel, v.sd_g);
        for rr in 2..200u64 {
            for n in 1..20u64 {
                let v = sd_formula_t22_type3(rr, n).unwrap();
                // r = 2 + 1/n over integers
                let root = rr * n == 2 * n + 1;
                assert_eq!(v.sd_rel == v.sd_g, root, "r={rr} n={n}");
            }
        }
    }

    #[test]
    fn two_group_examples() {
        assert_eq!(sd_formula_2groups(TwoGroupFamily::Dihedral, 3).unwrap(), r(23, 25));
        assert!(sd_formula_2groups(TwoGroupFamily::Quaternion, 3).unwrap().is_one());
        assert!(sd_formula_2groups(TwoGroupFamily::QuasiDihedral, 3).is_err());
        assert!(sd_formula_2groups(TwoGroupFamily::Dihedral, 2).is_err());
        let tiny = sd_formula_2groups(TwoGroupFamily::Dihedral, 80).unwrap();
        assert!(tiny < r(1, 1_000_000));
        assert_eq!(normal_count_2groups(5), 8);
    }

    #[test]
    fn dihedral_case_examples() {
        let c = dihedral_case_formulas(3).unwrap();
        assert_eq!(c.sd_h11, r(5, 6));
        let c = dihedral_case_formulas(6).unwrap();
        assert_eq!(c.sd_h11, r(13, 16));
        assert_eq!(c.per_prime.len(), 1);
        assert_eq!(c.per_prime[0].sd, r(13, 16));
        let c = dihedral_case_formulas(15).unwrap();
        assert_eq!(c.per_prime.iter().map(|pc| pc.p).collect::<Vec<_>>(), vec![3, 5]);
        assert!(dihedral_case_formulas(16).is_err());
        assert!(dihedral_case_formulas(1).is_err());
    }

    #[test]
    fn scan_small_bounds() {
        let s = membership_condition_scan(100).unwrap();
        assert_eq!(s.odd.iter().map(|x| x.n).collect::<Vec<_>>(), vec![3]);
        assert!(!s.odd[0].excluded_by_computation);
        assert_eq!(s.even.iter().map(|x| x.n).collect::<Vec<_>>(), vec![6]);
        assert!(s.even[0].excluded_by_computation);
        let s = membership_condition_scan(10).unwrap();
        assert_eq!((s.odd.len(), s.even.len()), (1, 1));
        assert!(membership_condition_scan(2_000_000).is_err());
    }
}
