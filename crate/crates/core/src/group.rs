//! Finite groups as validated Cayley tables with the identity at index 0.

use num_integer::Integer;

use crate::arith::pow_mod;
use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 5000;

/// Immutable finite group. `mul(a, b)` is the index of `a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    label: String,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| self.row(a).iter().map(|&x| x as usize).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut d = 1;
        while x != 0 {
            x = self.mul(x, g);
            d += 1;
        }
        d
    }

    pub fn pow(&self, g: usize, mut e: u64) -> usize {
        let mut base = g;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `g⁻¹ x g`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// Elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> BitSet {
        let mut set = BitSet::new(self.order);
        set.insert(0);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    /// Re-checks every group axiom; used by tests on constructed groups.
    pub fn check_axioms(&self) -> Result<()> {
        validate_table(self.order, &self.table)?;
        Ok(())
    }
}

fn check_cap(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        return Err(Error::OrderCapExceeded { order, cap });
    }
    Ok(())
}

/// Checks closure, identity at 0, inverses and associativity of a flat
/// table; returns the inverse map.
fn validate_table(n: usize, table: &[u32]) -> Result<Vec<u32>> {
    for a in 0..n {
        for b in 0..n {
            let v = table[a * n + b] as usize;
            if v >= n {
                return Err(Error::NotClosed { a, b, value: v, order: n });
            }
        }
    }
    let at = |a: usize, b: usize| table[a * n + b] as usize;
    if (0..n).any(|a| at(0, a) != a || at(a, 0) != a) {
        return Err(Error::NoIdentity);
    }
    let inverse = (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| at(a, b) == 0)
                .filter(|&b| at(b, a) == 0)
                .map(|b| b as u32)
                .ok_or(Error::MissingInverse(a))
        })
        .collect::<Result<Vec<_>>>()?;
    // Light's test: the elements `s` with (x·s)·y = x·(s·y) for all x, y are
    // closed under products, so checking a generating set suffices.
    let mut reached = BitSet::new(n);
    reached.insert(0);
    let mut gens = Vec::new();
    for g in 0..n {
        if reached.contains(g) {
            continue;
        }
        gens.push(g);
        let mut frontier: Vec<usize> = reached.iter().collect();
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                for y in [at(x, s), at(s, x)] {
                    if reached.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
    }
    for &s in &gens {
        for x in 0..n {
            let xs = at(x, s);
            for y in 0..n {
                if at(xs, y) != at(x, at(s, y)) {
                    return Err(Error::NotAssociative { a: x, b: s, c: y });
                }
            }
        }
    }
    Ok(inverse)
}

/// Validates a square table, relabelling so that the identity sits at index 0.
pub fn make_group(rows: &[Vec<usize>]) -> Result<FiniteGroup> {
    make_group_capped(rows, DEFAULT_ORDER_CAP)
}

pub fn make_group_capped(rows: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::MalformedTable);
    }
    check_cap(n, cap)?;
    for (a, row) in rows.iter().enumerate() {
        if let Some((b, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::NotClosed { a, b, value: v, order: n });
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|a| rows[e][a] == a && rows[a][e] == a))
        .ok_or(Error::NoIdentity)?;
    // swap labels 0 and e
    let relabel = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[relabel(a) * n + relabel(b)] = relabel(rows[a][b]) as u32;
        }
    }
    let inverse = validate_table(n, &table)?;
    Ok(FiniteGroup {
        order: n,
        table,
        inverse,
        label: format!("table({n})"),
    })
}

/// Builds a group from a multiplication rule on `0..n` that is known to
/// define a group with identity 0.
fn from_rule(n: usize, label: String, rule: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = rule(a, b) as u32;
        }
    }
    let mut inverse = vec![0u32; n];
    for a in 0..n {
        for b in 0..n {
            if table[a * n + b] == 0 {
                inverse[a] = b as u32;
                break;
            }
        }
    }
    FiniteGroup {
        order: n,
        table,
        inverse,
        label,
    }
}

pub(crate) fn from_rule_capped(
    n: usize,
    cap: usize,
    label: String,
    rule: impl Fn(usize, usize) -> usize,
) -> Result<FiniteGroup> {
    check_cap(n, cap)?;
    Ok(from_rule(n, label, rule))
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    cyclic_capped(n, DEFAULT_ORDER_CAP)
}

pub fn cyclic_capped(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic group of order 0".into()));
    }
    from_rule_capped(n, cap, format!("Z{n}"), |a, b| (a + b) % n)
}

/// `G × H` with element `(g, h)` at index `g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    direct_product_capped(g, h, DEFAULT_ORDER_CAP)
}

pub fn direct_product_capped(g: &FiniteGroup, h: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
    let m = h.order;
    let n = g
        .order
        .checked_mul(m)
        .ok_or(Error::OrderCapExceeded { order: usize::MAX, cap })?;
    let label = format!("{} x {}", g.label, h.label);
    from_rule_capped(n, cap, label, |a, b| {
        g.mul(a / m, b / m) * m + h.mul(a % m, b % m)
    })
}

/// `Z_m ⋊ Z_t` where the generator of `Z_t` acts by multiplication by `k`:
/// `(a, b)·(c, d) = (a + c·k^b mod m, b + d mod t)`, stored at index `a·t + b`.
pub fn semidirect_cyclic(m: usize, t: usize, k: i64) -> Result<FiniteGroup> {
    semidirect_cyclic_capped(m, t, k, DEFAULT_ORDER_CAP)
}

pub fn semidirect_cyclic_capped(m: usize, t: usize, k: i64, cap: usize) -> Result<FiniteGroup> {
    if m == 0 || t == 0 {
        return Err(Error::InvalidArgument("factor of order 0".into()));
    }
    let n = m
        .checked_mul(t)
        .ok_or(Error::OrderCapExceeded { order: usize::MAX, cap })?;
    check_cap(n, cap)?;
    let k = k.rem_euclid(m as i64) as u64;
    let mm = m as u64;
    if k.gcd(&mm) != 1 {
        return Err(Error::InvalidAction(format!("gcd({k}, {m}) != 1")));
    }
    if pow_mod(k, t as u64, mm) != 1 % mm {
        return Err(Error::InvalidAction(format!("{k}^{t} != 1 mod {m}")));
    }
    let powers: Vec<usize> = (0..t as u64).map(|b| pow_mod(k, b, mm) as usize).collect();
    let label = format!("Z{m}:Z{t}[{k}]");
    Ok(from_rule(n, label, |x, y| {
        let (a, b) = (x / t, x % t);
        let (c, d) = (y / t, y % t);
        ((a + c * powers[b]) % m) * t + (b + d) % t
    }))
}

/// Parses the Cayley-table text format: the order on the first line, then one
/// row of space-separated indices per line.
pub fn parse_cayley_text(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad order line: {e}")))?;
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let row = line
            .split_whitespace()
            .map(|tok| tok.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("row {i}: {e}")))?;
        if row.len() != n {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(rows)
}

pub fn to_cayley_text(g: &FiniteGroup) -> String {
    let mut out = format!("{}\n", g.order);
    for a in 0..g.order {
        let row: Vec<String> = g.row(a).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_z2_tables() {
        let g = make_group(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        let z2 = make_group(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!((0..2).map(|a| z2.inv(a)).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn rejects_broken_tables() {
        assert_eq!(
            make_group(&[vec![0, 1], vec![1, 1]]),
            Err(Error::MissingInverse(1))
        );
        assert!(matches!(
            make_group(&[vec![0, 2], vec![1, 0]]),
            Err(Error::NotClosed { a: 0, b: 1, value: 2, .. })
        ));
        assert_eq!(make_group(&[vec![1, 0], vec![1, 0]]), Err(Error::NoIdentity));
        assert_eq!(make_group(&[vec![0, 1]]), Err(Error::MalformedTable));
    }

    #[test]
    fn detects_non_associative_loop() {
        // The smallest loop that is not a group (order 5).
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(make_group(&rows), Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn relocates_identity() {
        // Z3 written with identity at label 2.
        let rows = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = make_group(&rows).unwrap();
        g.check_axioms().unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.element_order(1), 3);
    }

    #[test]
    fn cyclic_groups() {
        assert_eq!(cyclic(1).unwrap().order(), 1);
        let z6 = cyclic(6).unwrap();
        assert!(z6.is_abelian());
        assert_eq!(z6.element_order(1), 6);
        let z5 = cyclic(5).unwrap();
        assert!((1..5).all(|g| z5.element_order(g) == 5));
        assert!(cyclic(0).is_err());
    }

    #[test]
    fn products() {
        let z2 = cyclic(2).unwrap();
        let z3 = cyclic(3).unwrap();
        let p = direct_product(&z2, &z3).unwrap();
        assert_eq!(p.order(), 6);
        assert!((0..6).any(|g| p.element_order(g) == 6));
        let one = cyclic(1).unwrap();
        let s3 = semidirect_cyclic(3, 2, 2).unwrap();
        let q = direct_product(&one, &s3).unwrap();
        assert_eq!(q.rows(), s3.rows());
        let s3z5 = direct_product(&s3, &cyclic(5).unwrap()).unwrap();
        assert_eq!(s3z5.order(), 30);
        s3z5.check_axioms().unwrap();
        assert!(direct_product_capped(&s3, &s3, 30).is_err());
    }

    #[test]
    fn semidirect_products() {
        let s3 = semidirect_cyclic(3, 2, 2).unwrap();
        assert!(!s3.is_abelian());
        assert_eq!(s3.order(), 6);
        s3.check_axioms().unwrap();
        assert!(semidirect_cyclic(5, 4, 2).is_ok());
        assert!(matches!(semidirect_cyclic(4, 2, 2), Err(Error::InvalidAction(_))));
        assert!(matches!(semidirect_cyclic(7, 2, 2), Err(Error::InvalidAction(_))));
        // negative multiplier normalized: -1 mod 5 = 4
        assert_eq!(
            semidirect_cyclic(5, 2, -1).unwrap().rows(),
            semidirect_cyclic(5, 2, 4).unwrap().rows()
        );
    }

    #[test]
    fn trivial_action_is_direct_product() {
        for (m, t) in [(3, 2), (4, 6), (5, 5)] {
            let sd = semidirect_cyclic(m, t, 1).unwrap();
            let dp = direct_product(&cyclic(m).unwrap(), &cyclic(t).unwrap()).unwrap();
            assert_eq!(sd.rows(), dp.rows());
        }
    }

    #[test]
    fn reflections_have_order_two() {
        for n in 3..12 {
            let d = semidirect_cyclic(n, 2, n as i64 - 1).unwrap();
            for a in 0..n {
                assert_eq!(d.element_order(a * 2 + 1), 2);
            }
        }
    }

    #[test]
    fn cayley_text_round_trip() {
        let g = semidirect_cyclic(3, 2, 2).unwrap();
        let text = to_cayley_text(&g);
        let rows = parse_cayley_text(&text).unwrap();
        assert_eq!(make_group(&rows).unwrap().rows(), g.rows());
        assert!(parse_cayley_text("2\n0 1\n").is_err());
        assert!(parse_cayley_text("2\n0 1\n1\n").is_err());
    }
}
