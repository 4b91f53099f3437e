use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

/// Exponent vector, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn eval(&self, point: &[i64]) -> BigInt {
        self.0.iter().zip(point).map(|(&e, &x)| BigInt::from(x).pow(e)).product()
    }
}

/// Higher total degree first, then lexicographically larger exponents.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Every monomial in `nvars` variables of total degree at most `bound`, in
/// ascending degree.
pub fn monomials(nvars: usize, bound: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, acc: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if acc.len() == nvars {
            out.push(Monomial(acc.clone()));
            return;
        }
        for e in 0..=left {
            acc.push(e);
            rec(nvars, left - e, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, bound, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// A polynomial with exact rational coefficients over named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(vars: &[String]) -> Self {
        Self { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: BigRational) -> Self {
        Self::from_terms(vars, [(Monomial(vec![0; vars.len()]), c)])
    }

    pub fn var(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::from_terms(vars, [(Monomial(e), BigRational::one())])
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        let e = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Nonzero terms, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn eval(&self, point: &[i64]) -> BigRational {
        self.terms.iter().map(|(m, c)| c * BigRational::from_integer(m.eval(point))).sum()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(&self.vars, BigRational::one()), |acc, _| &acc * self)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "variable lists differ");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "variable lists differ");
        let mut out = Polynomial::zero(&self.vars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let m = Monomial(a.0.iter().zip(&b.0).map(|(i, j)| i + j).collect());
                out.add_term(m, x * y);
            }
        }
        out
    }
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl Polynomial {
    fn render(&self, times: &str, power: &dyn Fn(u32) -> String, minus: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { minus } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    out.push_str(minus.trim());
                }
            } else {
                out.push_str(&format!(" {} ", sign.trim()));
            }
            let mag = c.abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { self.vars[v].clone() } else { format!("{}{}", self.vars[v], power(e)) })
                .collect();
            let coeff = if mag.is_integer() { mag.numer().to_string() } else { format!("{}/{}", mag.numer(), mag.denom()) };
            if factors.is_empty() {
                out.push_str(&coeff);
            } else {
                if !mag.is_one() {
                    out.push_str(&coeff);
                    out.push_str(times);
                }
                out.push_str(&factors.join(times));
            }
        }
        out
    }

    /// Plain ASCII form, e.g. `10*n1^3*n2 + 1/6*n^6`.
    pub fn to_ascii(&self) -> String {
        self.render("*", &|e| format!("^{e}"), "-")
    }
}

/// Unicode form, e.g. `3·x⁴`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("·", &superscript, "−"))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            exponents: Vec<u32>,
            coefficient: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(m, c)| Term { exponents: m.0.clone(), coefficient: c.to_string() })
            .collect();
        let mut st = s.serialize_struct("Polynomial", 4)?;
        st.serialize_field("variables", &self.vars)?;
        st.serialize_field("text", &self.to_ascii())?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
