use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::PolyfitError;

/// An integer affine form `c + Σ aᵢ·xᵢ` over named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinExpr {
    pub constant: i64,
    /// Nonzero coefficients only.
    pub coeffs: BTreeMap<String, i64>,
}

impl LinExpr {
    pub fn constant(c: i64) -> Self {
        Self { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn var(name: &str) -> Self {
        Self { constant: 0, coeffs: [(name.to_string(), 1)].into() }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    pub fn add_scaled(&mut self, other: &LinExpr, k: i64) {
        self.constant += k * other.constant;
        for (v, &c) in &other.coeffs {
            let e = self.coeffs.entry(v.clone()).or_default();
            *e += k * c;
            if *e == 0 {
                self.coeffs.remove(v);
            }
        }
    }

    pub fn negated(&self) -> Self {
        let mut out = LinExpr::default();
        out.add_scaled(self, -1);
        out
    }

    pub fn eval(&self, values: &BTreeMap<String, i64>) -> Result<i64, PolyfitError> {
        self.coeffs.iter().try_fold(self.constant, |acc, (v, &c)| {
            values.get(v).map(|&x| acc + c * x).ok_or_else(|| PolyfitError::UnknownVariable(v.clone()))
        })
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &c) in &self.coeffs {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{v}")?;
            } else {
                write!(f, "{sign}{mag}*{v}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant > 0 {
            write!(f, "+{}", self.constant)
        } else if self.constant < 0 {
            write!(f, "{}", self.constant)
        } else {
            Ok(())
        }
    }
}

impl FromStr for LinExpr {
    type Err = PolyfitError;

    /// Sums of terms like `3`, `x`, `2*x`, `2x`, joined by `+` and `-`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyfitError::Parse(format!("bad linear expression {s:?}"));
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(bad());
        }
        let mut out = LinExpr::default();
        let mut rest = src.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if rest.len() == src.len() => (1, rest),
                _ => return Err(bad()),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let digits = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
            let (num, name) = term.split_at(digits);
            let name = match name.strip_prefix('*') {
                Some(n) if !n.is_empty() && !num.is_empty() => n,
                Some(_) => return Err(bad()),
                None => name,
            };
            let k = if num.is_empty() { 1 } else { num.parse::<i64>().map_err(|_| bad())? };
            if name.is_empty() {
                if num.is_empty() {
                    return Err(bad());
                }
                out.constant += sign * k;
            } else {
                let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !ok {
                    return Err(bad());
                }
                out.add_scaled(&LinExpr::var(name), sign * k);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let e: LinExpr = "n1 + n2".parse().unwrap();
        let vals: BTreeMap<String, i64> = [("n1".into(), 2), ("n2".into(), 3)].into();
        assert_eq!(e.eval(&vals).unwrap(), 5);
        let e: LinExpr = "2*x - 3 + x".parse().unwrap();
        assert_eq!(e.coeffs["x"], 3);
        assert_eq!(e.constant, -3);
        assert_eq!(e.to_string(), "3*x-3");
        assert_eq!("-a+2b".parse::<LinExpr>().unwrap().to_string(), "-a+2*b");
        assert_eq!("7".parse::<LinExpr>().unwrap(), LinExpr::constant(7));
        assert!("x-x".parse::<LinExpr>().unwrap().is_constant());
        for bad in ["", "+", "2*", "3x*", "x+*y", "2**x"] {
            assert!(bad.parse::<LinExpr>().is_err(), "{bad}");
        }
    }
}
