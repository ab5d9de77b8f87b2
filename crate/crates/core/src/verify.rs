//! Named verification suites: closed forms and classification statements
//! checked against brute force on finite instance sets.
//!
//! Every suite checks the statements exactly as published, so a wrong table
//! entry shows up as a failing check rather than being silently corrected.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    dihedral_case_formulas, divisor_profile, membership_condition_scan, normal_count_2groups,
    sd_formula_2groups, sd_formula_t21, sd_formula_t22_type2, sd_formula_t22_type3,
    sd_formula_t22_type4, x_ri, FormulaDiscrepancy, TwoGroupFamily,
};
use crate::arith::is_prime;
use crate::degrees::{multiplicativity_check, sd_bruteforce, Degrees, REPORT_SCHEMA};
use crate::density::{
    build_plan, converge_to_tolerance, convergence_table, verify_smallest_instance_capped,
    zero_target_table, DensityFactor,
};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::group::DEFAULT_ORDER_CAP;
use crate::lattice::{all_subgroups_capped, permutes, permutes_by_definition};
use crate::rational::ExactRational;

pub const SUITES: &[&str] = &[
    "cor32",
    "thm23",
    "thm24",
    "thm33",
    "eq2",
    "density",
    "multiplicativity",
    "prop31",
    "properties",
];

/// Largest order of the formula instance sets.
pub const INSTANCE_ORDER: u64 = 600;
/// Largest order of the property corpus.
pub const SMALL_ORDER: u64 = 60;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub order_cap: usize,
    /// Evaluate `|C(H)|` for every subgroup instead of once per class.
    pub full_f_check: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            order_cap: DEFAULT_ORDER_CAP,
            full_f_check: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub schema: u32,
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub discrepancies: Vec<FormulaDiscrepancy>,
}

impl SuiteOutcome {
    fn new(suite: &str, checks: Vec<Check>, discrepancies: Vec<FormulaDiscrepancy>) -> Self {
        SuiteOutcome {
            schema: REPORT_SCHEMA,
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            discrepancies,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteOutcome> {
    match name {
        "cor32" => cor32(opts),
        "thm23" => thm23(opts),
        "thm24" => thm24(opts),
        "thm33" => thm33(opts),
        "eq2" => eq2(opts),
        "density" => density(opts),
        "multiplicativity" => multiplicativity(opts),
        "prop31" => prop31(opts),
        "properties" => properties(opts),
        _ => Err(Error::UnknownSuite(name.to_string())),
    }
}

pub fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn value_check(name: String, got: &ExactRational, want: &ExactRational) -> Check {
    let detail = format!("brute force {got}, expected {want}");
    check(name, got == want, detail)
}

/// Compares a closed form with brute force, recording a discrepancy on
/// mismatch.
fn formula_check(
    checks: &mut Vec<Check>,
    discrepancies: &mut Vec<FormulaDiscrepancy>,
    formula: &str,
    instance: &str,
    formula_value: &ExactRational,
    brute_force: &ExactRational,
) {
    if formula_value != brute_force {
        discrepancies.push(FormulaDiscrepancy {
            formula: formula.to_string(),
            instance: instance.to_string(),
            formula_value: formula_value.clone(),
            brute_force: brute_force.clone(),
        });
    }
    checks.push(value_check(format!("{formula} on {instance}"), brute_force, formula_value));
}

/// Builds `spec`, enumerates its lattice and hands the degrees to `f`.
pub fn analyse<T>(spec: &FamilySpec, opts: &VerifyOptions, f: impl FnOnce(&Degrees) -> T) -> Result<T> {
    let g = spec.build_capped(opts.order_cap)?;
    let l = all_subgroups_capped(&g, opts.order_cap)?;
    let d = if opts.full_f_check {
        Degrees::new_verified(&g, &l)?
    } else {
        Degrees::new(&g, &l)
    };
    Ok(f(&d))
}

/// Index of `<gens>` in the lattice.
fn generated(d: &Degrees, gens: &[usize]) -> usize {
    let members = d.group().closure(gens);
    d.lattice()
        .index_of(&members)
        .expect("a generated subgroup is in the lattice")
}

/// Summary numbers shared by most suites.
#[derive(Clone, Debug)]
struct Summary {
    sd: ExactRational,
    image: usize,
    gamma: usize,
    normal: usize,
    lattice: usize,
    rel: Vec<ExactRational>,
}

fn summarize(d: &Degrees, rel: &[usize]) -> Summary {
    Summary {
        sd: d.sd(),
        image: d.f_image().len(),
        gamma: d.lattice().gamma(),
        normal: d.lattice().normal_count(),
        lattice: d.lattice().len(),
        rel: rel.iter().map(|&i| d.sd_rel(i)).collect(),
    }
}

fn analyse_all<F>(specs: &[FamilySpec], opts: &VerifyOptions, rel: F) -> Result<Vec<Summary>>
where
    F: Fn(&FamilySpec, &Degrees) -> Vec<usize> + Sync,
{
    specs
        .par_iter()
        .map(|s| analyse(s, opts, |d| summarize(d, &rel(s, d))))
        .collect()
}

fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

fn valid(specs: Vec<FamilySpec>, max_order: u64) -> Vec<FamilySpec> {
    specs
        .into_iter()
        .filter(|s| s.validate().is_ok() && s.order().is_some_and(|o| o <= max_order))
        .collect()
}

pub fn t21_instances(max_order: u64) -> Vec<FamilySpec> {
    let primes = primes_upto(max_order);
    let mut out = Vec::new();
    for &p in &primes {
        for &q in primes.iter().filter(|&&q| (p - 1) % q == 0) {
            let mut n = 1;
            while p * q.pow(n) <= max_order {
                out.push(FamilySpec::T21Frobenius { p, q, n });
                n += 1;
            }
        }
    }
    valid(out, max_order)
}

pub fn modular_instances(max_order: u64) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for p in primes_upto(max_order) {
        let mut n = 3;
        while p.checked_pow(n).is_some_and(|o| o <= max_order) {
            out.push(FamilySpec::Modular { p, n });
            n += 1;
        }
    }
    valid(out, max_order)
}

pub fn type2_instances(max_order: u64) -> Vec<FamilySpec> {
    let primes = primes_upto(max_order);
    let mut out = Vec::new();
    for &p in &primes {
        for &q in primes.iter().filter(|&&q| (q - 1) % (p * p) == 0) {
            let mut n = 2;
            while q * p.pow(n) <= max_order {
                out.push(FamilySpec::T22Type2 { q, p, n });
                n += 1;
            }
        }
    }
    valid(out, max_order)
}

pub fn type3_instances(max_order: u64) -> Vec<FamilySpec> {
    let primes = primes_upto(max_order);
    let mut out = Vec::new();
    for &r in &primes {
        for &p in primes.iter().filter(|&&p| (r - 1) % p == 0) {
            let mut n = 1;
            while r * p.pow(n) * 2 <= max_order {
                for &q in &primes {
                    if r * p.pow(n) * q > max_order {
                        break;
                    }
                    out.push(FamilySpec::T22Type3 { r, p, q, n });
                }
                n += 1;
            }
        }
    }
    valid(out, max_order)
}

pub fn type4_instances(max_order: u64) -> Vec<FamilySpec> {
    let primes = primes_upto(max_order);
    let mut out = Vec::new();
    for &q in primes.iter().filter(|&&q| q * q <= max_order) {
        for &p in primes.iter().filter(|&&p| (q - 1) % p == 0) {
            let mut n = 1;
            while q * q * p.pow(n) <= max_order {
                out.push(FamilySpec::T22Type4 { q, p, n });
                n += 1;
            }
        }
    }
    valid(out, max_order)
}

fn parse_all(specs: &[&str]) -> Vec<FamilySpec> {
    specs
        .iter()
        .map(|s| s.parse().expect("built-in spec parses"))
        .collect()
}

/// Property corpus: the named families of order at most 60 plus a set of
/// direct products, without repeats.
pub fn small_corpus() -> Vec<FamilySpec> {
    let mut specs: Vec<FamilySpec> = (1..=SMALL_ORDER).map(FamilySpec::Cyclic).collect();
    specs.extend((2..=SMALL_ORDER / 2).map(FamilySpec::Dihedral));
    specs.extend(parse_all(&[
        "Q(8)", "Q(16)", "Q(32)", "SD(16)", "SD(32)", "M(2,4)", "M(2,5)", "M(3,3)", "T22.6",
        "T22.8(3)", "A4",
    ]));
    specs.extend(t21_instances(SMALL_ORDER));
    specs.extend(type2_instances(SMALL_ORDER));
    specs.extend(type3_instances(SMALL_ORDER));
    specs.extend(type4_instances(SMALL_ORDER));
    specs.extend((2..=10).map(|n| FamilySpec::product(FamilySpec::Dihedral(3), FamilySpec::Cyclic(n))));
    specs.extend(parse_all(&[
        "prod(Z(2),Z(2))",
        "prod(prod(Z(2),Z(2)),Z(2))",
        "prod(prod(Z(2),Z(2)),prod(Z(2),Z(2)))",
        "prod(Z(2),Z(4))",
        "prod(Z(2),Z(8))",
        "prod(Z(4),Z(4))",
        "prod(prod(Z(2),Z(2)),Z(4))",
        "prod(Z(3),Z(3))",
        "prod(prod(Z(3),Z(3)),Z(3))",
        "prod(Z(2),D(8))",
        "prod(Z(2),Q(8))",
        "prod(Q(8),Z(3))",
        "prod(Q(8),Z(5))",
        "prod(Q(8),Z(7))",
        "prod(D(8),Z(3))",
        "prod(A4,Z(2))",
        "prod(A4,Z(5))",
        "prod(D(6),D(6))",
        "prod(D(10),Z(3))",
        "prod(D(6),Z(9))",
    ]));
    dedup(valid(specs, SMALL_ORDER))
}

fn dedup(specs: Vec<FamilySpec>) -> Vec<FamilySpec> {
    let mut seen = std::collections::HashSet::new();
    specs.into_iter().filter(|s| seen.insert(s.to_string())).collect()
}

/// Everything the suites build: the property corpus, the formula instance
/// sets, dihedral groups up to `D(200)` and the 2-groups up to order 128.
pub fn full_corpus() -> Vec<FamilySpec> {
    let mut specs = small_corpus();
    specs.extend(t21_instances(INSTANCE_ORDER));
    specs.extend(modular_instances(INSTANCE_ORDER));
    specs.extend(type2_instances(INSTANCE_ORDER));
    specs.extend(type3_instances(INSTANCE_ORDER));
    specs.extend(type4_instances(INSTANCE_ORDER));
    specs.extend((2..=100).map(FamilySpec::Dihedral));
    for fam in [TwoGroupFamily::Dihedral, TwoGroupFamily::Quaternion, TwoGroupFamily::QuasiDihedral] {
        specs.extend((fam.min_n()..=7).map(|n| fam.spec(n)));
    }
    specs.push(FamilySpec::product(FamilySpec::Dihedral(3), FamilySpec::Cyclic(3)));
    dedup(specs)
}

fn cor32(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut items = Vec::new();
    for fam in [TwoGroupFamily::Dihedral, TwoGroupFamily::Quaternion, TwoGroupFamily::QuasiDihedral] {
        items.extend((fam.min_n()..=7).map(|n| (fam, n)));
    }
    let specs: Vec<FamilySpec> = items.iter().map(|&(f, n)| f.spec(n)).collect();
    let results = analyse_all(&specs, opts, |_, _| Vec::new())?;
    let (mut checks, mut disc) = (Vec::new(), Vec::new());
    for ((&(fam, n), spec), s) in items.iter().zip(&specs).zip(&results) {
        let formula = sd_formula_2groups(fam, n)?;
        formula_check(&mut checks, &mut disc, "sd closed form", &spec.to_string(), &formula, &s.sd);
        let want = normal_count_2groups(n);
        checks.push(check(
            format!("|N({spec})| = n+3"),
            s.normal as u64 == want,
            format!("brute force {}, expected {want}", s.normal),
        ));
    }
    let table = [("Q(8)", 1), ("D(8)", 3), ("Q(16)", 3), ("SD(16)", 3), ("D(16)", 4), ("Q(32)", 4)];
    for (label, want) in table {
        let pos = specs.iter().position(|s| s.to_string() == label).expect("table group is built");
        let got = results[pos].image;
        checks.push(check(
            format!("|Im f|({label}) = {want}"),
            got == want,
            format!("brute force {got}, stated {want}"),
        ));
    }
    Ok(SuiteOutcome::new("cor32", checks, disc))
}

fn image_check(spec: &FamilySpec, got: usize, want: usize) -> Check {
    check(
        format!("|Im f|({spec}) = {want}"),
        got == want,
        format!("brute force {got}, stated {want}"),
    )
}

fn gamma_check(spec: &FamilySpec, got: usize, want: usize) -> Check {
    check(
        format!("gamma({spec}) = {want}"),
        got == want,
        format!("brute force {got}"),
    )
}

fn thm23(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let (mut checks, mut disc) = (Vec::new(), Vec::new());
    let t21 = t21_instances(INSTANCE_ORDER);
    // Z_{q^n} is generated by (0,1), stored at index 1
    let results = analyse_all(&t21, opts, |_, d| vec![generated(d, &[1])])?;
    for (spec, s) in t21.iter().zip(&results) {
        let FamilySpec::T21Frobenius { p, q, n } = *spec else { unreachable!() };
        let name = spec.to_string();
        let f = sd_formula_t21(p, n as u64);
        formula_check(&mut checks, &mut disc, "sd(Z_{q^n}, G) closed form", &name, &f.sd_rel_top, &s.rel[0]);
        formula_check(&mut checks, &mut disc, "sd(G) closed form (T21)", &name, &f.sd_g, &s.sd);
        checks.push(gamma_check(spec, s.gamma, 1));
        let want = if (p, q, n) == (3, 2, 1) { 2 } else { 3 };
        checks.push(image_check(spec, s.image, want));
    }
    let modular = modular_instances(INSTANCE_ORDER);
    let results = analyse_all(&modular, opts, |_, _| Vec::new())?;
    for (spec, s) in modular.iter().zip(&results) {
        checks.push(gamma_check(spec, s.gamma, 1));
        checks.push(image_check(spec, s.image, 1));
    }
    Ok(SuiteOutcome::new("thm23", checks, disc))
}

/// Indices of the subgroups carrying the type-2/3/4 closed forms.
fn t22_subgroups(spec: &FamilySpec, d: &Degrees) -> Vec<usize> {
    match *spec {
        FamilySpec::T22Type2 { p, n, .. } => {
            // Z_q ⋊ Z_{p^n}: (a,b) at a·p^n + b
            let t = p.pow(n) as usize;
            let p = p as usize;
            vec![generated(d, &[p]), generated(d, &[1]), generated(d, &[t, p])]
        }
        FamilySpec::T22Type3 { q, .. } => {
            // (Z_r ⋊ Z_{p^n}) × Z_q: (g,h) at g·q + h
            let q = q as usize;
            vec![generated(d, &[q]), generated(d, &[q, 1])]
        }
        FamilySpec::T22Type4 { q, p, n } => {
            let t = p.pow(n) as usize;
            vec![generated(d, &[1]), generated(d, &[q as usize * t, 1])]
        }
        _ => Vec::new(),
    }
}

fn thm24(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let (mut checks, mut disc) = (Vec::new(), Vec::new());
    let mut specs = type2_instances(INSTANCE_ORDER);
    specs.extend(type3_instances(INSTANCE_ORDER));
    specs.extend(type4_instances(INSTANCE_ORDER));
    let results = analyse_all(&specs, opts, t22_subgroups)?;
    for (spec, s) in specs.iter().zip(&results) {
        let name = spec.to_string();
        match *spec {
            FamilySpec::T22Type2 { q, p, n } => {
                let f = sd_formula_t22_type2(q, n as u64)?;
                let labels = ["sd(Z_{p^{n-1}}, G)", "sd(Z_{p^n}, G)", "sd(Z_q ⋊ Z_{p^{n-1}}, G)"];
                for (k, label) in labels.iter().enumerate() {
                    let fv = &f.as_vec()[k];
                    formula_check(&mut checks, &mut disc, &format!("{label} closed form (type 2)"), &name, fv, &s.rel[k]);
                }
                formula_check(&mut checks, &mut disc, "sd(G) closed form (type 2)", &name, &f.sd_g, &s.sd);
                let want = if (p, q, n) == (2, 5, 4) { 4 } else { 5 };
                checks.push(image_check(spec, s.image, want));
            }
            FamilySpec::T22Type3 { r, p, n, .. } => {
                let f = sd_formula_t22_type3(r, n as u64)?;
                formula_check(&mut checks, &mut disc, "sd(Z_{p^n}, G) closed form (type 3)", &name, &f.sd_rel, &s.rel[0]);
                formula_check(&mut checks, &mut disc, "sd(Z_{p^n} × Z_q, G) closed form (type 3)", &name, &f.sd_rel, &s.rel[1]);
                formula_check(&mut checks, &mut disc, "sd(G) closed form (type 3)", &name, &f.sd_g, &s.sd);
                let want = if (r, p, n) == (3, 2, 1) { 2 } else { 3 };
                checks.push(image_check(spec, s.image, want));
            }
            FamilySpec::T22Type4 { q, n, .. } => {
                let f = sd_formula_t22_type4(q, n as u64)?;
                formula_check(&mut checks, &mut disc, "sd(Z_{p^n}, G) closed form (type 4)", &name, &f.cyclic_top, &s.rel[0]);
                formula_check(&mut checks, &mut disc, "sd(Z_q ⋊ Z_{p^n}, G) closed form (type 4)", &name, &f.semidirect, &s.rel[1]);
                formula_check(&mut checks, &mut disc, "sd(G) closed form (type 4)", &name, &f.sd_g, &s.sd);
                checks.push(image_check(spec, s.image, 4));
            }
            _ => unreachable!(),
        }
        checks.push(gamma_check(spec, s.gamma, 2));
    }
    for label in ["T22.2(5,2,2)", "T22.2(5,2,4)", "T22.4(3,2,1)", "T22.3(3,2,5,1)", "T22.3(5,2,3,1)"] {
        let present = specs.iter().any(|s| s.to_string() == label);
        checks.push(check(format!("{label} in instance set"), present, ""));
    }
    // Z_9 ⋊ Z_2 is D_18: same table and the same sd
    let d18: FamilySpec = "D(18)".parse()?;
    let t4: FamilySpec = "T22.4(3,2,1)".parse()?;
    let same = d18.build()?.rows() == t4.build()?.rows();
    checks.push(check("T22.4(3,2,1) has the table of D(18)", same, ""));
    let sd18 = analyse(&d18, opts, |d| d.sd())?;
    checks.push(value_check("type 4 sd(G) at (3,2,1) vs D(18)".into(), &sd18, &sd_formula_t22_type4(3, 1)?.sd_g));
    let lattice18 = analyse(&d18, opts, |d| d.lattice().len())? as u64;
    let prof = divisor_profile(9);
    checks.push(check(
        "|L(D(18))| = tau(9) + sigma(9)",
        lattice18 as u128 == prof.tau as u128 + prof.sigma,
        format!("brute force {lattice18}"),
    ));

    let spot = parse_all(&["A4", "D(8)", "Q(16)", "T22.6", "T22.8(3)", "prod(D(6),Z(3))"]);
    let results = analyse_all(&spot, opts, |_, _| Vec::new())?;
    for ((spec, s), (gamma, image)) in spot.iter().zip(&results).zip([(2, 5), (2, 3), (2, 3), (2, 4), (2, 1), (3, 0)]) {
        checks.push(gamma_check(spec, s.gamma, gamma));
        if image > 0 {
            checks.push(image_check(spec, s.image, image));
        }
    }
    Ok(SuiteOutcome::new("thm24", checks, disc))
}

fn thm33(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let (mut checks, mut disc) = (Vec::new(), Vec::new());
    let dihedral: Vec<FamilySpec> = (2..=100).map(FamilySpec::Dihedral).collect();
    let results = analyse_all(&dihedral, opts, |_, _| Vec::new())?;
    let members: Vec<u64> = (2..=100u64).zip(&results).filter(|(_, s)| s.image == 2).map(|(n, _)| n).collect();
    checks.push(check(
        "D(2n) in class C iff n = 3, 2 <= n <= 100",
        members == [3],
        format!("members: {members:?}"),
    ));

    let scan = membership_condition_scan(1_000_000)?;
    let odd: Vec<u64> = scan.odd.iter().map(|s| s.n).collect();
    let even: Vec<(u64, bool)> = scan.even.iter().map(|s| (s.n, s.excluded_by_computation)).collect();
    checks.push(check("membership scan to 10^6: odd survivors {3}", odd == [3], format!("{odd:?}")));
    checks.push(check(
        "membership scan to 10^6: even survivors {6}, excluded",
        even == [(6, true)],
        format!("{even:?}"),
    ));

    let (h11, sd12) = analyse(&FamilySpec::Dihedral(6), opts, |d| (d.sd_rel(generated(d, &[1])), d.sd()))?;
    checks.push(value_check("sd(H^1_1, D(12))".into(), &h11, &ExactRational::new(13, 16)));
    checks.push(value_check("sd(D(12))".into(), &sd12, &ExactRational::new(101, 128)));

    let ns: Vec<u64> = (3..=60).filter(|n: &u64| !n.is_power_of_two()).collect();
    let cases: Vec<_> = ns
        .par_iter()
        .map(|&n| {
            let case = dihedral_case_formulas(n)?;
            let nn = n as usize;
            analyse(&FamilySpec::Dihedral(n), opts, |d| {
                let mut subs = vec![generated(d, &[1])];
                // H^p_1 = <x^{n/p}, y>, x at index 2, y at index 1
                subs.extend(case.per_prime.iter().map(|pc| generated(d, &[2 * (nn / pc.p as usize), 1])));
                let counts: Vec<u64> = subs.iter().map(|&i| d.permuting_counts()[i]).collect();
                let values: Vec<ExactRational> = subs.iter().map(|&i| d.sd_rel(i)).collect();
                (case, counts, values)
            })
        })
        .collect::<Result<_>>()?;
    for (case, counts, values) in cases {
        let name = format!("D({})", 2 * case.n);
        formula_check(&mut checks, &mut disc, "sd(H^1_1, D_2n) closed form", &name, &case.sd_h11, &values[0]);
        checks.push(check(
            format!("|C(H^1_1)| on {name}"),
            counts[0] == case.permuting_h11,
            format!("brute force {}, formula {}", counts[0], case.permuting_h11),
        ));
        for (k, pc) in case.per_prime.iter().enumerate() {
            let instance = format!("{name}, p = {}", pc.p);
            formula_check(&mut checks, &mut disc, "sd(H^p_1, D_2n) closed form", &instance, &pc.sd, &values[k + 1]);
            checks.push(check(
                format!("|C(H^p_1)| on {instance}"),
                counts[k + 1] == pc.permuting,
                format!("brute force {}, formula {}", counts[k + 1], pc.permuting),
            ));
        }
    }
    Ok(SuiteOutcome::new("thm33", checks, disc))
}

fn eq2(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let checks = (1..=40u64)
        .into_par_iter()
        .map(|n| {
            let prof = divisor_profile(n);
            analyse(&FamilySpec::Dihedral(n), opts, |d| {
                let mut bad = Vec::new();
                let mut seen = 0;
                let nn = n as usize;
                for r in (1..=n).filter(|r| n % r == 0) {
                    let rot = 2 * ((nn / r as usize) % nn);
                    for i in 1..=n / r {
                        let idx = generated(d, &[rot, 2 * (i as usize - 1) + 1]);
                        let got = d.permuting_counts()[idx];
                        let want = prof.tau + x_ri(n, r, i).expect("r | n and i in range");
                        seen += 1;
                        if got != want {
                            bad.push(format!("(r={r}, i={i}): {got} vs {want}"));
                        }
                    }
                }
                let size = d.lattice().len() as u128;
                let size_ok = size == prof.tau as u128 + prof.sigma;
                let mut detail = format!("{seen} dihedral subgroups, |L| = {size}");
                if !bad.is_empty() {
                    detail = format!("{detail}; mismatches {}", bad.join(", "));
                }
                check(
                    format!("|C(H^r_i)| = tau(n) + x and |L| = tau(n) + sigma(n) on D({})", 2 * n),
                    bad.is_empty() && size_ok,
                    detail,
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteOutcome::new("eq2", checks, Vec::new()))
}

fn density(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut checks = Vec::new();
    let tol = ExactRational::new(1, 100);
    let table = converge_to_tolerance(2, 3, &tol, 64)?;
    let last = table.last().expect("non-empty table");
    let p = last.factors[0].p;
    checks.push(check(
        "target 2/3 reaches error < 1/100 at p = 199",
        p == 199 && last.error < tol && table[..table.len() - 1].iter().all(|r| r.error >= tol),
        format!("first p below tolerance {p}, error {}", last.error),
    ));
    let exact = table
        .iter()
        .all(|r| r.error == ExactRational::new(2, r.factors[0].p + 5));
    checks.push(check("target 2/3 error is 2/(p+5) on every row", exact, ""));

    for min_p in [3, 1000] {
        let plan = build_plan(2, 4, min_p)?;
        let product: ExactRational = plan
            .factors
            .iter()
            .map(|f| sd_formula_t21(f.p, f.n).sd_rel_top)
            .product();
        let limit: ExactRational = plan.factors.iter().map(DensityFactor::limit).product();
        checks.push(check(
            format!("target 1/2 plan (min_p = {min_p}) equals the product of its factors"),
            plan.factors.len() == 2 && product == plan.achieved && limit == ExactRational::new(1, 2),
            format!("achieved {}", plan.achieved),
        ));
    }

    for (a, b, order) in [(1, 2, 21), (2, 3, 63)] {
        let inst = verify_smallest_instance_capped(&build_plan(a, b, 3)?, opts.order_cap)?;
        checks.push(check(
            format!("smallest instance for {a}/{b} (order {order})"),
            inst.order == order && inst.equal,
            format!("order {}, brute force {}, analytic {}", inst.order, inst.brute_force, inst.analytic),
        ));
    }

    for (a, b) in [(1, 2), (2, 3), (2, 5), (3, 4)] {
        let rows = convergence_table(a, b, 12)?;
        let decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
        checks.push(check(format!("convergence table for {a}/{b} decreases strictly"), decreasing, ""));
    }
    let zero = zero_target_table(30);
    checks.push(check(
        "target 0 sequence decreases strictly",
        zero.windows(2).all(|w| w[1].1 < w[0].1),
        format!("last value {}", zero.last().expect("non-empty").1),
    ));
    Ok(SuiteOutcome::new("density", checks, Vec::new()))
}

fn multiplicativity(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let pool = parse_all(&["D(6)", "D(8)", "Z(5)", "Z(9)", "Q(8)"]);
    let mut pairs = Vec::new();
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            let (a, b) = (pool[i].order().unwrap_or(0), pool[j].order().unwrap_or(0));
            if num_integer::gcd(a, b) == 1 {
                pairs.push((pool[i].clone(), pool[j].clone()));
            }
        }
    }
    let checks = pairs
        .par_iter()
        .map(|(a, b)| {
            let ok = multiplicativity_check(&a.build_capped(opts.order_cap)?, &b.build_capped(opts.order_cap)?)?;
            Ok(check(format!("sd and sd_rel multiplicative on {a} × {b}"), ok, ""))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteOutcome::new("multiplicativity", checks, Vec::new()))
}

fn prop31(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let corpus = full_corpus();
    let rows = corpus
        .par_iter()
        .map(|s| analyse(s, opts, |d| (d.criterion(), d.f_image().len(), summarize(d, &[]))))
        .collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    let (mut fired, mut dedekind) = (0, 0);
    for (spec, (c, image, s)) in corpus.iter().zip(&rows) {
        if c.fires {
            fired += 1;
            if *image <= 2 {
                violations.push(format!("{spec} (|Im f| = {image})"));
            }
        } else if c.lhs < c.rhs && s.normal == s.lattice {
            dedekind += 1;
        }
    }
    let mut checks = vec![check(
        "criterion implies |Im f| > 2 on the corpus",
        violations.is_empty(),
        format!(
            "{} groups, {fired} satisfy the bound, {dedekind} all-normal groups excluded; violations: {violations:?}",
            corpus.len()
        ),
    )];
    let c = analyse(&FamilySpec::Dihedral(3), opts, |d| d.criterion())?;
    checks.push(check(
        "bound attained by D(6)",
        c.lhs == c.rhs && !c.fires,
        format!("lhs {}, rhs {}", c.lhs, c.rhs),
    ));
    Ok(SuiteOutcome::new("prop31", checks, Vec::new()))
}

/// Class constancy of `f`, fast-path permutability against the definition
/// and weighted `sd` against the double loop, on the property corpus.
fn properties(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let corpus = small_corpus();
    let checks = corpus
        .par_iter()
        .map(|spec| {
            let g = spec.build_capped(opts.order_cap)?;
            let l = all_subgroups_capped(&g, opts.order_cap)?;
            let constant = match Degrees::new_verified(&g, &l) {
                Ok(_) => Ok(true),
                Err(Error::ClassConstancyViolation(..)) => Ok(false),
                Err(e) => Err(e),
            }?;
            let subs = l.subgroups();
            let mut fast_ok = true;
            'outer: for i in 0..subs.len() {
                for j in 0..subs.len() {
                    let def = permutes_by_definition(&g, &subs[i], &subs[j]);
                    if l.permutes(&g, i, j) != def || permutes(&g, &subs[i], &subs[j]) != def {
                        fast_ok = false;
                        break 'outer;
                    }
                }
            }
            let weighted = Degrees::new(&g, &l).sd();
            let brute = sd_bruteforce(&g, &l);
            Ok(vec![
                check(format!("f constant on classes of {spec}"), constant, ""),
                check(format!("permutes fast path on {spec}"), fast_ok, format!("{} subgroups", subs.len())),
                value_check(format!("weighted sd on {spec}"), &weighted, &brute),
            ])
        })
        .collect::<Result<Vec<Vec<Check>>>>()?;
    Ok(SuiteOutcome::new("properties", checks.into_iter().flatten().collect(), Vec::new()))
}
