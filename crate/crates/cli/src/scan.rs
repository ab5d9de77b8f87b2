//! Expansion of family patterns such as `D(2n)` or `prod(D(6),Z(q))` over
//! parameter ranges.

use std::collections::BTreeSet;

use latcom_core::FamilySpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub values: Vec<i64>,
}

/// `n=2..50`, `n=2..50:3` (step), `q=5,7,11` or `n=4`.
pub fn parse_param(s: &str) -> Result<Param, String> {
    let (name, rhs) = s
        .split_once('=')
        .ok_or_else(|| format!("parameter {s:?} is not of the form name=values"))?;
    let name = name.trim();
    if !is_ident(name) {
        return Err(format!("bad parameter name {name:?}"));
    }
    let int = |t: &str| -> Result<i64, String> {
        t.trim().parse().map_err(|_| format!("bad integer {t:?} in parameter {name}"))
    };
    let mut values = Vec::new();
    for part in rhs.split(',') {
        if let Some((lo, hi)) = part.split_once("..") {
            let (hi, step) = match hi.split_once(':') {
                Some((hi, step)) => (hi, int(step)?),
                None => (hi, 1),
            };
            if step < 1 {
                return Err(format!("step must be positive in parameter {name}"));
            }
            let (lo, hi) = (int(lo)?, int(hi)?);
            let mut v = lo;
            while v <= hi {
                values.push(v);
                v += step;
            }
        } else {
            values.push(int(part)?);
        }
    }
    let values: Vec<i64> = values.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    if values.is_empty() {
        return Err(format!("parameter {name} has no values"));
    }
    Ok(Param {
        name: name.to_string(),
        values,
    })
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c == '_')
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Num(i64),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Family { name: String, args: Option<Vec<Node>> },
    Expr(Expr),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, what: &str) -> Result<T, String> {
        Err(format!("{what} at offset {} of the pattern", self.pos))
    }

    fn family(&mut self) -> Result<Node, String> {
        self.peek();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'.')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a family name");
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        let args = if self.eat(b'(') {
            let mut args = vec![self.arg()?];
            while self.eat(b',') {
                args.push(self.arg()?);
            }
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            Some(args)
        } else {
            None
        };
        Ok(Node::Family { name, args })
    }

    fn arg(&mut self) -> Result<Node, String> {
        let c = self.peek();
        let rest = &self.src[self.pos..];
        if c.is_some_and(|c| c.is_ascii_uppercase()) || rest.starts_with(b"prod(") {
            self.family()
        } else {
            Ok(Node::Expr(self.sum()?))
        }
    }

    fn sum(&mut self) -> Result<Expr, String> {
        let mut e = self.term()?;
        loop {
            if self.eat(b'+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat(b'-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut e = self.power()?;
        loop {
            if self.eat(b'*') {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else if self
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_' || c == b'(')
            {
                // implicit product, as in 2n or 2(n+1)
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, String> {
        let base = self.atom()?;
        if self.eat(b'^') {
            Ok(Expr::Pow(Box::new(base), Box::new(self.power()?)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                text.parse().map(Expr::Num).or_else(|_| self.err("integer too large"))
            }
            Some(c) if c.is_ascii_lowercase() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || *c == b'_')
                {
                    self.pos += 1;
                }
                Ok(Expr::Var(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
            }
            _ => self.err("expected a number, parameter or '('"),
        }
    }
}

fn parse_pattern(pattern: &str) -> Result<Node, String> {
    let mut p = Parser {
        src: pattern.as_bytes(),
        pos: 0,
    };
    let node = p.family()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(node)
}

fn collect_vars(node: &Node, out: &mut BTreeSet<String>) {
    fn expr_vars(e: &Expr, out: &mut BTreeSet<String>) {
        match e {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Pow(a, b) => {
                expr_vars(a, out);
                expr_vars(b, out);
            }
        }
    }
    match node {
        Node::Family { args: Some(args), .. } => args.iter().for_each(|a| collect_vars(a, out)),
        Node::Family { args: None, .. } => {}
        Node::Expr(e) => expr_vars(e, out),
    }
}

fn eval(e: &Expr, env: &[(String, i64)]) -> Result<i64, String> {
    let overflow = || "arithmetic overflow".to_string();
    Ok(match e {
        Expr::Num(n) => *n,
        Expr::Var(v) => env
            .iter()
            .find(|(name, _)| name == v)
            .map(|&(_, x)| x)
            .ok_or_else(|| format!("unbound parameter {v}"))?,
        Expr::Add(a, b) => eval(a, env)?.checked_add(eval(b, env)?).ok_or_else(overflow)?,
        Expr::Sub(a, b) => eval(a, env)?.checked_sub(eval(b, env)?).ok_or_else(overflow)?,
        Expr::Mul(a, b) => eval(a, env)?.checked_mul(eval(b, env)?).ok_or_else(overflow)?,
        Expr::Pow(a, b) => {
            let exp = eval(b, env)?;
            let exp = u32::try_from(exp).map_err(|_| format!("exponent {exp} out of range"))?;
            eval(a, env)?.checked_pow(exp).ok_or_else(overflow)?
        }
    })
}

fn instantiate(node: &Node, env: &[(String, i64)]) -> Result<String, String> {
    match node {
        Node::Family { name, args: None } => Ok(name.clone()),
        Node::Family { name, args: Some(args) } => {
            let args: Vec<String> = args.iter().map(|a| instantiate(a, env)).collect::<Result<_, _>>()?;
            Ok(format!("{name}({})", args.join(",")))
        }
        Node::Expr(e) => {
            let v = eval(e, env)?;
            if v < 0 {
                return Err(format!("argument evaluates to {v}"));
            }
            Ok(v.to_string())
        }
    }
}

/// One point of the parameter grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expanded {
    pub bindings: Vec<(String, i64)>,
    /// The instantiated pattern, when every argument evaluated.
    pub text: Option<String>,
    /// Canonical spec, or the reason the point is skipped.
    pub spec: Result<FamilySpec, String>,
}

#[derive(Debug, PartialEq, Eq)]
pub enum ExpandError {
    Pattern(String),
    TooMany { count: u128, cap: usize },
}

/// Cartesian product of the parameter values in declaration order, each
/// instantiated into the pattern and validated.
pub fn expand(pattern: &str, params: &[Param], cap: usize) -> Result<Vec<Expanded>, ExpandError> {
    let node = parse_pattern(pattern).map_err(ExpandError::Pattern)?;
    let mut vars = BTreeSet::new();
    collect_vars(&node, &mut vars);
    let declared: BTreeSet<String> = params.iter().map(|p| p.name.clone()).collect();
    if declared.len() != params.len() {
        return Err(ExpandError::Pattern("parameter declared twice".into()));
    }
    if let Some(v) = vars.difference(&declared).next() {
        return Err(ExpandError::Pattern(format!("parameter {v} has no values")));
    }
    let count: u128 = params.iter().map(|p| p.values.len() as u128).product();
    if count > cap as u128 {
        return Err(ExpandError::TooMany { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; params.len()];
    loop {
        let env: Vec<(String, i64)> = params
            .iter()
            .zip(&idx)
            .map(|(p, &i)| (p.name.clone(), p.values[i]))
            .collect();
        let text = instantiate(&node, &env);
        let spec = text.clone().and_then(|s| {
            let spec = s.parse::<FamilySpec>().map_err(|e| e.to_string())?;
            spec.validate()?;
            Ok(spec)
        });
        out.push(Expanded {
            bindings: env,
            text: text.ok(),
            spec,
        });
        // odometer, last parameter fastest
        let mut k = params.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < params[k].values.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(list: &[&str]) -> Vec<Param> {
        list.iter().map(|s| parse_param(s).unwrap()).collect()
    }

    fn specs(pattern: &str, list: &[&str]) -> Vec<Result<String, String>> {
        expand(pattern, &params(list), 1000)
            .unwrap()
            .into_iter()
            .map(|e| e.spec.map(|s| s.to_string()))
            .collect()
    }

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("n=2..5").unwrap().values, vec![2, 3, 4, 5]);
        assert_eq!(parse_param("n=1..9:4").unwrap().values, vec![1, 5, 9]);
        assert_eq!(parse_param("q=11,5,7,5").unwrap().values, vec![5, 7, 11]);
        assert_eq!(parse_param("q=3,10..12").unwrap().values, vec![3, 10, 11, 12]);
        assert!(parse_param("n").is_err());
        assert!(parse_param("N=3").is_err());
        assert!(parse_param("n=5..2").is_err());
        assert!(parse_param("n=1..3:0").is_err());
    }

    #[test]
    fn expressions() {
        assert_eq!(specs("D(2n)", &["n=2..4"]), vec![Ok("D(4)".into()), Ok("D(6)".into()), Ok("D(8)".into())]);
        assert_eq!(specs("Z(2^k+1)", &["k=3"]), vec![Ok("Z(9)".into())]);
        assert_eq!(specs("Z(2(k+1)*3)", &["k=1"]), vec![Ok("Z(12)".into())]);
        assert_eq!(specs("Z(n - 1)", &["n=3"]), vec![Ok("Z(2)".into())]);
        assert_eq!(
            specs("prod(D(6),Z(q))", &["q=5,7"]),
            vec![Ok("prod(D(6),Z(5))".into()), Ok("prod(D(6),Z(7))".into())]
        );
        assert_eq!(specs("A4", &[]), vec![Ok("A4".into())]);
    }

    #[test]
    fn order_and_skips() {
        let out = expand("T22.2(q,2,n)", &params(&["q=5,7", "n=1..2"]), 100).unwrap();
        let points: Vec<Vec<i64>> = out.iter().map(|e| e.bindings.iter().map(|b| b.1).collect()).collect();
        assert_eq!(points, vec![vec![5, 1], vec![5, 2], vec![7, 1], vec![7, 2]]);
        assert!(out[0].spec.as_ref().unwrap_err().contains("n > 1"));
        assert!(out[1].spec.is_ok());
        assert!(out[2].spec.is_err());
        assert!(specs("Z(n-5)", &["n=2"])[0].as_ref().unwrap_err().contains("-3"));
        assert!(specs("D(n)", &["n=3"])[0].is_err());
    }

    #[test]
    fn pattern_errors() {
        assert!(matches!(expand("D(2n)", &[], 10), Err(ExpandError::Pattern(_))));
        assert!(matches!(expand("D(2n", &params(&["n=1"]), 10), Err(ExpandError::Pattern(_))));
        assert!(matches!(expand("D(2n))", &params(&["n=1"]), 10), Err(ExpandError::Pattern(_))));
        assert_eq!(
            expand("Z(a*b)", &params(&["a=1..100", "b=1..100"]), 5000),
            Err(ExpandError::TooMany { count: 10_000, cap: 5000 })
        );
    }
}
