//! Symbolic descriptors for the group families under study, with parameter
//! validation, concrete construction and a small text grammar.

use std::fmt;
use std::str::FromStr;

use crate::arith::{is_prime, multiplicative_order};
use crate::error::{Error, Result};
use crate::group::{
    cyclic_capped, direct_product_capped, from_rule_capped, semidirect_cyclic_capped, FiniteGroup,
    DEFAULT_ORDER_CAP,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Cyclic(u64),
    /// Dihedral group of order `2n`.
    Dihedral(u64),
    /// Generalized quaternion group of order `2^n`.
    GenQuaternion(u32),
    /// Quasi-dihedral group of order `2^n`.
    QuasiDihedral(u32),
    /// `M(p^n)`: `x^{p^{n-1}} = y^p = 1, x^y = x^{1+p^{n-2}}`.
    Modular { p: u64, n: u32 },
    /// `Z_p ⋊ Z_{q^n}` with an action of order `q`.
    T21Frobenius { p: u64, q: u64, n: u32 },
    /// `Z_q ⋊ Z_{p^n}` with an action of order `p^2`.
    T22Type2 { q: u64, p: u64, n: u32 },
    /// `(Z_r ⋊ Z_{p^n}) × Z_q`, action of order `p`.
    T22Type3 { r: u64, p: u64, q: u64, n: u32 },
    /// `Z_{q^2} ⋊ Z_{p^n}` with an action of order `p`.
    T22Type4 { q: u64, p: u64, n: u32 },
    /// `Z_4 ⋊ Z_4`.
    T22Type6,
    /// `Z_{2^n} ⋊ Z_4` acting by `1 + 2^{n-1}`.
    T22Type8(u32),
    Alt4,
    Product(Box<FamilySpec>, Box<FamilySpec>),
}

fn need(cond: bool, msg: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

impl FamilySpec {
    pub fn product(a: FamilySpec, b: FamilySpec) -> Self {
        FamilySpec::Product(Box::new(a), Box::new(b))
    }

    /// First violated parameter constraint, if any.
    pub fn validate(&self) -> std::result::Result<(), String> {
        use FamilySpec::*;
        match *self {
            Cyclic(n) => need(n >= 1, "n >= 1 required"),
            Dihedral(n) => need(n >= 1, "n >= 1 required"),
            GenQuaternion(n) => need(n >= 3, "n >= 3 required"),
            QuasiDihedral(n) => need(n >= 4, "n >= 4 required"),
            Modular { p, n } => {
                need(is_prime(p), "p must be prime")?;
                if p == 2 {
                    need(n >= 4, "n >= 4 required for p = 2")
                } else {
                    need(n >= 3, "n >= 3 required for p >= 3")
                }
            }
            T21Frobenius { p, q, n } => {
                need(is_prime(p), "p must be prime")?;
                need(is_prime(q), "q must be prime")?;
                need((p - 1) % q == 0, "q | p - 1 required")?;
                need(n >= 1, "n >= 1 required")
            }
            T22Type2 { q, p, n } => {
                need(is_prime(p), "p must be prime")?;
                need(is_prime(q), "q must be prime")?;
                need((q - 1) % (p * p) == 0, "p^2 | q - 1 required")?;
                need(n > 1, "n > 1 required")
            }
            T22Type3 { r, p, q, n } => {
                need(is_prime(p), "p must be prime")?;
                need(is_prime(q), "q must be prime")?;
                need(is_prime(r), "r must be prime")?;
                need(p != q, "p != q required")?;
                need(q != r, "q != r required")?;
                need((r - 1) % p == 0, "p | r - 1 required")?;
                need(n >= 1, "n >= 1 required")
            }
            T22Type4 { q, p, n } => {
                need(is_prime(p), "p must be prime")?;
                need(is_prime(q), "q must be prime")?;
                need((q - 1) % p == 0, "p | q - 1 required")?;
                need(n >= 1, "n >= 1 required")
            }
            T22Type6 | Alt4 => Ok(()),
            T22Type8(n) => need(n >= 3, "n >= 3 required"),
            Product(ref a, ref b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    /// Group order implied by the parameters; `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        use FamilySpec::*;
        match *self {
            Cyclic(n) => Some(n),
            Dihedral(n) => n.checked_mul(2),
            GenQuaternion(n) | QuasiDihedral(n) => checked_pow(2, n),
            Modular { p, n } => checked_pow(p, n),
            T21Frobenius { p, q, n } => checked_pow(q, n)?.checked_mul(p),
            T22Type2 { q, p, n } => checked_pow(p, n)?.checked_mul(q),
            T22Type3 { r, p, q, n } => checked_pow(p, n)?.checked_mul(r)?.checked_mul(q),
            T22Type4 { q, p, n } => checked_pow(p, n)?.checked_mul(q.checked_mul(q)?),
            T22Type6 => Some(16),
            T22Type8(n) => checked_pow(2, n)?.checked_mul(4),
            Alt4 => Some(12),
            Product(ref a, ref b) => a.order()?.checked_mul(b.order()?),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        self.build_capped(DEFAULT_ORDER_CAP)
    }

    pub fn build_capped(&self, cap: usize) -> Result<FiniteGroup> {
        self.validate().map_err(Error::InvalidSpec)?;
        match self.order() {
            Some(o) if o <= cap as u64 => {}
            Some(o) => return Err(Error::OrderCapExceeded { order: o as usize, cap }),
            None => return Err(Error::OrderCapExceeded { order: usize::MAX, cap }),
        }
        let g = self.build_unchecked(cap)?;
        Ok(g.with_label(self.to_string()))
    }

    fn build_unchecked(&self, cap: usize) -> Result<FiniteGroup> {
        use FamilySpec::*;
        let sd = |m: u64, t: u64, k: u64| semidirect_cyclic_capped(m as usize, t as usize, k as i64, cap);
        match *self {
            Cyclic(n) => cyclic_capped(n as usize, cap),
            Dihedral(n) => sd(n, 2, n.saturating_sub(1)),
            GenQuaternion(n) => generalized_quaternion(n, cap),
            QuasiDihedral(n) => sd(1 << (n - 1), 2, (1 << (n - 2)) - 1),
            Modular { p, n } => sd(p.pow(n - 1), p, 1 + p.pow(n - 2)),
            T21Frobenius { p, q, n } => sd(p, q.pow(n), internal(least_k_of_order(p, q))?),
            T22Type2 { q, p, n } => sd(q, p.pow(n), internal(least_k_of_order(q, p * p))?),
            T22Type3 { r, p, q, n } => {
                let left = sd(r, p.pow(n), internal(least_k_of_order(r, p))?)?;
                direct_product_capped(&left, &cyclic_capped(q as usize, cap)?, cap)
            }
            T22Type4 { q, p, n } => sd(q * q, p.pow(n), internal(least_k_of_order(q * q, p))?),
            T22Type6 => sd(4, 4, 3),
            T22Type8(n) => sd(1 << n, 4, 1 + (1 << (n - 1))),
            Alt4 => Ok(alternating4()),
            Product(ref a, ref b) => {
                direct_product_capped(&a.build_unchecked(cap)?, &b.build_unchecked(cap)?, cap)
            }
        }
    }
}

fn internal(r: Result<u64>) -> Result<u64> {
    // validate() guarantees a suitable multiplier exists
    r.map_err(|e| Error::InvalidSpec(format!("internal: {e}")))
}

/// Smallest `k >= 2` whose multiplicative order modulo `m` is exactly `d`.
pub fn least_k_of_order(m: u64, d: u64) -> Result<u64> {
    (2..m)
        .find(|&k| multiplicative_order(k, m) == Some(d))
        .ok_or(Error::NoSuchK { modulus: m, order: d })
}

/// `Q_{2^n}` on pairs `x^a y^b`, `a mod 2^{n-1}`, with `y x y⁻¹ = x⁻¹` and
/// `y² = x^{2^{n-2}}`; index `2a + b`.
fn generalized_quaternion(n: u32, cap: usize) -> Result<FiniteGroup> {
    let m = 1usize << (n - 1);
    let half = m / 2;
    from_rule_capped(2 * m, cap, String::new(), |x, y| {
        let (a, b) = (x / 2, x % 2);
        let (c, d) = (y / 2, y % 2);
        match (b, d) {
            (0, _) => ((a + c) % m) * 2 + d,
            (1, 0) => ((a + m - c) % m) * 2 + 1,
            _ => ((a + m - c + half) % m) * 2,
        }
    })
}

/// Even permutations of four points, identity first, `(σ·τ)(i) = σ(τ(i))`.
fn alternating4() -> FiniteGroup {
    let mut perms = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct {
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| p[i] > p[j])
                            .count();
                        if inversions % 2 == 0 {
                            perms.push(p);
                        }
                    }
                }
            }
        }
    }
    let index = |p: [u8; 4]| perms.iter().position(|&q| q == p).unwrap();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| index([s[t[0] as usize], s[t[1] as usize], s[t[2] as usize], s[t[3] as usize]]))
                .collect()
        })
        .collect();
    from_rule_capped(12, 12, String::new(), |a, b| table[a][b]).expect("order 12")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Cyclic(n) => write!(f, "Z({n})"),
            Dihedral(n) => write!(f, "D({})", 2 * n),
            GenQuaternion(n) => write!(f, "Q({})", 1u128 << n),
            QuasiDihedral(n) => write!(f, "SD({})", 1u128 << n),
            Modular { p, n } => write!(f, "M({p},{n})"),
            T21Frobenius { p, q, n } => write!(f, "T21({p},{q},{n})"),
            T22Type2 { q, p, n } => write!(f, "T22.2({q},{p},{n})"),
            T22Type3 { r, p, q, n } => write!(f, "T22.3({r},{p},{q},{n})"),
            T22Type4 { q, p, n } => write!(f, "T22.4({q},{p},{n})"),
            T22Type6 => write!(f, "T22.6"),
            T22Type8(n) => write!(f, "T22.8({n})"),
            Alt4 => write!(f, "A4"),
            Product(a, b) => write!(f, "prod({a},{b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse(format!("{} at offset {} in {:?}", msg.into(), self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected {s:?}")))
        }
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '.'))
            .unwrap_or(rest.len());
        self.pos += len;
        rest[..len].to_string()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a number"));
        }
        let v = rest[..len].parse().map_err(|_| self.err("number too large"))?;
        self.pos += len;
        Ok(v)
    }

    fn args(&mut self, count: usize) -> Result<Vec<u64>> {
        self.expect("(")?;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            if i > 0 {
                self.expect(",")?;
            }
            out.push(self.number()?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn exponent(&self, v: u64) -> Result<u32> {
        u32::try_from(v).map_err(|_| self.err("exponent too large"))
    }

    fn two_power(&self, order: u64, what: &str) -> Result<u32> {
        if order.is_power_of_two() && order >= 2 {
            Ok(order.trailing_zeros())
        } else {
            Err(self.err(format!("{what} order must be a power of 2, got {order}")))
        }
    }

    fn spec(&mut self) -> Result<FamilySpec> {
        use FamilySpec::*;
        let start = self.pos;
        let name = self.name();
        let spec = match name.as_str() {
            "Z" => Cyclic(self.args(1)?[0]),
            "D" => {
                let order = self.args(1)?[0];
                if order < 2 || order % 2 == 1 {
                    self.pos = start;
                    return Err(self.err(format!("D takes the (even) group order, got {order}")));
                }
                Dihedral(order / 2)
            }
            "Q" => {
                let order = self.args(1)?[0];
                GenQuaternion(self.two_power(order, "Q")?)
            }
            "SD" => {
                let order = self.args(1)?[0];
                QuasiDihedral(self.two_power(order, "SD")?)
            }
            "M" => {
                let a = self.args(2)?;
                Modular { p: a[0], n: self.exponent(a[1])? }
            }
            "T21" => {
                let a = self.args(3)?;
                T21Frobenius { p: a[0], q: a[1], n: self.exponent(a[2])? }
            }
            "T22.2" => {
                let a = self.args(3)?;
                T22Type2 { q: a[0], p: a[1], n: self.exponent(a[2])? }
            }
            "T22.3" => {
                let a = self.args(4)?;
                T22Type3 { r: a[0], p: a[1], q: a[2], n: self.exponent(a[3])? }
            }
            "T22.4" => {
                let a = self.args(3)?;
                T22Type4 { q: a[0], p: a[1], n: self.exponent(a[2])? }
            }
            "T22.6" => T22Type6,
            "T22.8" => {
                let n = self.args(1)?[0];
                T22Type8(self.exponent(n)?)
            }
            "A4" => Alt4,
            "prod" => {
                self.expect("(")?;
                let a = self.spec()?;
                self.expect(",")?;
                let b = self.spec()?;
                self.expect(")")?;
                FamilySpec::product(a, b)
            }
            _ => {
                self.pos = start;
                return Err(self.err(format!("unknown family {name:?}")));
            }
        };
        Ok(spec)
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(spec)
    }
}
