//! Subgroup commutativity degree `sd(G)`, relative degrees `sd(H, G)`, the
//! image of `f: H ↦ sd(H, G)` and derived classifications. All values exact.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup};
use crate::lattice::{all_subgroups, permutes_by_definition, Subgroup, SubgroupLattice};
use crate::rational::ExactRational;

pub const REPORT_SCHEMA: u32 = 1;

/// Permuting counts `|C(H)|` for every subgroup of a lattice, plus the
/// quantities derived from them.
pub struct Degrees<'a> {
    group: &'a FiniteGroup,
    lattice: &'a SubgroupLattice,
    counts: Vec<u64>,
}

impl<'a> Degrees<'a> {
    /// Evaluates `|C(H)|` once per conjugacy class and copies it to the
    /// other members of the class.
    pub fn new(group: &'a FiniteGroup, lattice: &'a SubgroupLattice) -> Self {
        let per_class: Vec<u64> = lattice
            .classes()
            .par_iter()
            .map(|class| lattice.permuting_count(group, class[0]) as u64)
            .collect();
        let counts = (0..lattice.len())
            .map(|i| per_class[lattice.class_of(i)])
            .collect();
        Degrees { group, lattice, counts }
    }

    /// Evaluates `|C(H)|` and `sd(H, G)` for every subgroup separately and
    /// checks that both are constant on conjugacy classes.
    pub fn new_verified(group: &'a FiniteGroup, lattice: &'a SubgroupLattice) -> Result<Self> {
        let counts: Vec<u64> = (0..lattice.len())
            .into_par_iter()
            .map(|i| lattice.permuting_count(group, i) as u64)
            .collect();
        let d = Degrees { group, lattice, counts };
        for class in lattice.classes() {
            let rep = class[0];
            let value = d.sd_rel(rep);
            for &i in &class[1..] {
                if d.counts[i] != d.counts[rep] || d.sd_rel(i) != value {
                    return Err(Error::ClassConstancyViolation(rep, i));
                }
            }
        }
        Ok(d)
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice
    }

    pub fn permuting_counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn sd(&self) -> ExactRational {
        let total: u64 = self.counts.iter().sum();
        let l = self.lattice.len() as u64;
        ExactRational::new(total, l * l)
    }

    /// `sd(H_i, G)`, summing over the subgroups of `H_i`.
    pub fn sd_rel(&self, i: usize) -> ExactRational {
        let (below, total) = self
            .lattice
            .below(i)
            .fold((0u64, 0u64), |(n, s), j| (n + 1, s + self.counts[j]));
        ExactRational::new(total, below * self.lattice.len() as u64)
    }

    /// `f` on one representative per conjugacy class, indexed by class id.
    pub fn class_values(&self) -> Vec<ExactRational> {
        self.lattice
            .classes()
            .par_iter()
            .map(|class| self.sd_rel(class[0]))
            .collect()
    }

    pub fn f_image(&self) -> Vec<ExactRational> {
        distinct_sorted(self.class_values())
    }

    pub fn criterion(&self) -> Criterion31 {
        let lhs = self.sd();
        let l = self.lattice.len() as u64;
        let rhs = ExactRational::new(1, 2)
            + ExactRational::new(self.lattice.normal_count() as u64 + 1, 2 * l);
        // When every subgroup is normal, rhs exceeds 1 and the strict
        // inequality holds with sd = 1 and |Im f| = 1; the bound only carries
        // information for groups with a non-normal subgroup.
        let fires = lhs < rhs && self.lattice.normal_count() < self.lattice.len();
        Criterion31 { lhs, rhs, fires }
    }

    pub fn report(&self) -> DegreeReport {
        let values = self.class_values();
        let f_image = distinct_sorted(values.clone());
        let sd = self.sd();
        let class_values = self
            .lattice
            .classes()
            .iter()
            .zip(values)
            .enumerate()
            .map(|(id, (class, value))| ClassValue {
                class_id: id,
                class_size: class.len(),
                subgroup_order: self.lattice.subgroup(class[0]).size(),
                value,
            })
            .collect();
        DegreeReport {
            schema: REPORT_SCHEMA,
            label: self.group.label().to_string(),
            order: self.group.order(),
            lattice_size: self.lattice.len(),
            normal_count: self.lattice.normal_count(),
            gamma: self.lattice.gamma(),
            iwasawa: sd.is_one(),
            in_class_c: f_image.len() == 2,
            sd,
            f_image,
            class_values,
            criterion31: self.criterion(),
        }
    }
}

fn distinct_sorted(mut v: Vec<ExactRational>) -> Vec<ExactRational> {
    v.sort();
    v.dedup();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion31 {
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub fires: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassValue {
    pub class_id: usize,
    pub class_size: usize,
    pub subgroup_order: usize,
    pub value: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub schema: u32,
    pub label: String,
    pub order: usize,
    pub lattice_size: usize,
    pub normal_count: usize,
    pub gamma: usize,
    pub sd: ExactRational,
    pub f_image: Vec<ExactRational>,
    pub class_values: Vec<ClassValue>,
    pub iwasawa: bool,
    #[serde(rename = "in_class_C")]
    pub in_class_c: bool,
    pub criterion31: Criterion31,
}

pub fn sd(g: &FiniteGroup, l: &SubgroupLattice) -> ExactRational {
    Degrees::new(g, l).sd()
}

/// Unweighted double loop over all ordered pairs with the literal `HK = KH`
/// test; the oracle for the class-weighted path.
pub fn sd_bruteforce(g: &FiniteGroup, l: &SubgroupLattice) -> ExactRational {
    let subs = l.subgroups();
    let hits: u64 = subs
        .par_iter()
        .map(|h| subs.iter().filter(|k| permutes_by_definition(g, h, k)).count() as u64)
        .sum();
    let n = subs.len() as u64;
    ExactRational::new(hits, n * n)
}

pub fn sd_rel(h: &Subgroup, g: &FiniteGroup, l: &SubgroupLattice) -> Result<ExactRational> {
    let i = l
        .index_of(h.members())
        .ok_or_else(|| Error::InvalidArgument("subgroup not in lattice".into()))?;
    Ok(Degrees::new(g, l).sd_rel(i))
}

pub fn f_image(g: &FiniteGroup, l: &SubgroupLattice) -> Vec<ExactRational> {
    Degrees::new(g, l).f_image()
}

pub fn criterion_3_1(g: &FiniteGroup, l: &SubgroupLattice) -> Criterion31 {
    Degrees::new(g, l).criterion()
}

pub fn report(g: &FiniteGroup, full_check: bool) -> Result<DegreeReport> {
    let l = all_subgroups(g)?;
    let d = if full_check {
        Degrees::new_verified(g, &l)?
    } else {
        Degrees::new(g, &l)
    };
    Ok(d.report())
}

/// Checks `sd(G1 × G2) = sd(G1)·sd(G2)` and, for every `H1 ≤ G1`, `H2 ≤ G2`,
/// `sd(H1 × H2, G1 × G2) = sd(H1, G1)·sd(H2, G2)`.
pub fn multiplicativity_check(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<bool> {
    let (n1, n2) = (g1.order(), g2.order());
    if n1.gcd(&n2) != 1 {
        return Err(Error::CoprimalityRequired(n1, n2));
    }
    let g = direct_product(g1, g2)?;
    let (l1, l2, l) = (all_subgroups(g1)?, all_subgroups(g2)?, all_subgroups(&g)?);
    let (d1, d2, d) = (Degrees::new(g1, &l1), Degrees::new(g2, &l2), Degrees::new(&g, &l));
    if l.len() != l1.len() * l2.len() || d.sd() != d1.sd() * d2.sd() {
        return Ok(false);
    }
    for (i1, h1) in l1.subgroups().iter().enumerate() {
        let v1 = d1.sd_rel(i1);
        for (i2, h2) in l2.subgroups().iter().enumerate() {
            let members = BitSet::from_indices(
                g.order(),
                h1.elements().flat_map(|a| h2.elements().map(move |b| a * n2 + b)),
            );
            let Some(i) = l.index_of(&members) else {
                return Ok(false);
            };
            if d.sd_rel(i) != &v1 * &d2.sd_rel(i2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::group::cyclic;

    fn build(s: &str) -> FiniteGroup {
        s.parse::<FamilySpec>().unwrap().build().unwrap()
    }

    fn r(n: u64, d: u64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn sd_examples() {
        let s3 = build("D(6)");
        let l = all_subgroups(&s3).unwrap();
        assert_eq!(sd(&s3, &l), r(5, 6));
        assert_eq!(sd_bruteforce(&s3, &l), r(5, 6));
        let d8 = build("D(8)");
        let l = all_subgroups(&d8).unwrap();
        assert_eq!(sd(&d8, &l), r(23, 25));
        assert_eq!(sd_bruteforce(&d8, &l), r(23, 25));
        for s in ["Z(12)", "prod(Z(2),Z(6))", "Z(1)"] {
            let g = build(s);
            assert!(sd(&g, &all_subgroups(&g).unwrap()).is_one());
        }
    }

    #[test]
    fn sd_rel_examples() {
        let s3 = build("D(6)");
        let l = all_subgroups(&s3).unwrap();
        assert!(sd_rel(l.subgroup(0), &s3, &l).unwrap().is_one());
        assert_eq!(sd_rel(l.subgroup(1), &s3, &l).unwrap(), r(5, 6));

        let d12 = build("D(12)");
        let l = all_subgroups(&d12).unwrap();
        // H^1_1 = <y> with y = (0,1) at index 1
        let h = Subgroup::generated(&d12, &[1]);
        assert_eq!(sd_rel(&h, &d12, &l).unwrap(), r(13, 16));
        assert_eq!(sd(&d12, &l), r(101, 128));
    }

    #[test]
    fn image_examples() {
        let img = |s: &str| {
            let g = build(s);
            f_image(&g, &all_subgroups(&g).unwrap())
        };
        assert_eq!(img("Q(8)"), vec![ExactRational::one()]);
        assert_eq!(img("D(6)"), vec![r(5, 6), ExactRational::one()]);
        assert_eq!(img("A4").len(), 5);
    }

    #[test]
    fn criterion_examples() {
        let s3 = build("D(6)");
        let c = criterion_3_1(&s3, &all_subgroups(&s3).unwrap());
        assert_eq!(c.lhs, r(5, 6));
        assert_eq!(c.rhs, r(5, 6));
        assert!(!c.fires);
        let d32 = build("D(32)");
        let l = all_subgroups(&d32).unwrap();
        assert!(criterion_3_1(&d32, &l).fires);
        assert!(f_image(&d32, &l).len() > 2);
        let z = build("Z(30)");
        assert!(!criterion_3_1(&z, &all_subgroups(&z).unwrap()).fires);
    }

    #[test]
    fn verified_mode_agrees() {
        for s in ["A4", "D(12)", "T22.6", "prod(D(6),Z(3))"] {
            let g = build(s);
            let l = all_subgroups(&g).unwrap();
            let fast = Degrees::new(&g, &l);
            let full = Degrees::new_verified(&g, &l).unwrap();
            assert_eq!(fast.permuting_counts(), full.permuting_counts());
            assert_eq!(fast.report(), full.report());
        }
    }

    #[test]
    fn sd_is_f_at_whole_group() {
        for s in ["A4", "D(20)", "Q(16)", "T21(7,3,1)"] {
            let g = build(s);
            let l = all_subgroups(&g).unwrap();
            let d = Degrees::new(&g, &l);
            assert_eq!(d.sd(), d.sd_rel(l.len() - 1));
            assert!(d.f_image().contains(&d.sd()));
            assert!(d.f_image().contains(&ExactRational::one()));
        }
    }

    #[test]
    fn report_flags() {
        let rep = report(&build("D(6)"), false).unwrap();
        assert_eq!(rep.gamma, 1);
        assert!(rep.in_class_c);
        assert!(!rep.iwasawa);
        let rep = report(&build("Q(8)"), true).unwrap();
        assert!(rep.iwasawa);
        assert_eq!(rep.f_image.len(), 1);
    }

    #[test]
    fn multiplicativity_examples() {
        let s3 = build("D(6)");
        let z5 = cyclic(5).unwrap();
        assert_eq!(multiplicativity_check(&s3, &z5), Ok(true));
        let g = direct_product(&s3, &z5).unwrap();
        assert_eq!(sd(&g, &all_subgroups(&g).unwrap()), r(5, 6));
        assert_eq!(multiplicativity_check(&cyclic(2).unwrap(), &cyclic(3).unwrap()), Ok(true));
        let d8 = build("D(8)");
        assert_eq!(multiplicativity_check(&d8, &cyclic(3).unwrap()), Ok(true));
        let g = direct_product(&d8, &cyclic(3).unwrap()).unwrap();
        assert_eq!(sd(&g, &all_subgroups(&g).unwrap()), r(23, 25));
        assert_eq!(
            multiplicativity_check(&s3, &cyclic(3).unwrap()),
            Err(Error::CoprimalityRequired(6, 3))
        );
    }
}
