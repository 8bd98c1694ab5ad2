//! Sparse multivariate polynomials over the integers in edge variables `y_g`.
//!
//! Terms are kept in a `BTreeMap` keyed by [`ExponentVector`], whose derived
//! ordering (lexicographic on `(EdgeId, exponent)` pairs) is the canonical
//! term order used for printing.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSet};

/// Exponents of a monomial; zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector(Vec<(EdgeId, u32)>);

impl ExponentVector {
    pub fn one() -> Self {
        ExponentVector(Vec::new())
    }

    pub fn from_pairs<I: IntoIterator<Item = (EdgeId, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<EdgeId, u32> = BTreeMap::new();
        for (g, k) in pairs {
            *map.entry(g).or_insert(0) += k;
        }
        ExponentVector(map.into_iter().filter(|&(_, k)| k > 0).collect())
    }

    /// The square-free monomial `y^S`.
    pub fn of_set<'a, I: IntoIterator<Item = &'a EdgeId>>(set: I) -> Self {
        Self::from_pairs(set.into_iter().map(|&g| (g, 1)))
    }

    pub fn get(&self, g: EdgeId) -> u32 {
        self.0.binary_search_by_key(&g, |&(id, _)| id).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> EdgeSet {
        self.0.iter().map(|&(g, _)| g).collect()
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ExponentVector(out)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(g, k) in &self.0 {
            let d = if j < other.0.len() && other.0[j].0 == g {
                j += 1;
                other.0[j - 1].1
            } else {
                0
            };
            if d > k {
                return None;
            }
            if k > d {
                out.push((g, k - d));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(ExponentVector(out))
    }

    /// Drops the variable `g`.
    pub fn without(&self, g: EdgeId) -> Self {
        ExponentVector(self.0.iter().copied().filter(|&(id, _)| id != g).collect())
    }

    pub fn rename<F: Fn(EdgeId) -> EdgeId>(&self, f: F) -> Self {
        Self::from_pairs(self.0.iter().map(|&(g, k)| (f(g), k)))
    }
}

/// Exact positive rational edge weights (conductances).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalWeights(BTreeMap<EdgeId, BigRational>);

impl RationalWeights {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, g: EdgeId, w: BigRational) {
        self.0.insert(g, w);
    }

    pub fn with(mut self, g: EdgeId, w: BigRational) -> Self {
        self.set(g, w);
        self
    }

    pub fn get(&self, g: EdgeId) -> Option<&BigRational> {
        self.0.get(&g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &BigRational)> {
        self.0.iter().map(|(&g, w)| (g, w))
    }

    /// Requires a positive weight for each listed edge.
    pub fn check_positive<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> Result<()> {
        for g in edges {
            match self.0.get(&g) {
                None => return Err(Error::MissingWeight(g)),
                Some(w) if !w.is_positive() => return Err(Error::NonPositiveWeight(g)),
                Some(_) => {}
            }
        }
        Ok(())
    }
}

impl FromIterator<(EdgeId, BigRational)> for RationalWeights {
    fn from_iter<I: IntoIterator<Item = (EdgeId, BigRational)>>(iter: I) -> Self {
        RationalWeights(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(ExponentVector::one(), c)
    }

    pub fn var(g: EdgeId) -> Self {
        Self::monomial(ExponentVector(vec![(g, 1)]), BigInt::one())
    }

    pub fn monomial(exps: ExponentVector, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Polynomial { terms }
    }

    /// Sum of `y^S` over the given sets, each with coefficient one.
    pub fn from_sets<'a, I: IntoIterator<Item = &'a EdgeSet>>(sets: I) -> Self {
        let mut p = Polynomial::zero();
        for s in sets {
            p.add_term(ExponentVector::of_set(s), BigInt::one());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: ExponentVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient_of(&self, exps: &ExponentVector) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `[y^alpha](p * q)` without forming the full product.
    pub fn product_coefficient(p: &Polynomial, q: &Polynomial, alpha: &ExponentVector) -> BigInt {
        let mut acc = BigInt::zero();
        for (mu, c) in &p.terms {
            if let Some(rest) = alpha.checked_div(mu) {
                if let Some(d) = q.terms.get(&rest) {
                    acc += c * d;
                }
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    pub fn evaluate(&self, w: &RationalWeights) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (g, k) in m.iter() {
                let x = w.get(g).ok_or(Error::MissingWeight(g))?;
                for _ in 0..k {
                    term *= x;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// True iff every variable occurs with exponent at most one.
    pub fn is_multiaffine(&self) -> bool {
        self.terms.keys().all(|m| m.max_exponent() <= 1)
    }

    /// `Some(d)` if every term has total degree `d`; zero is homogeneous of any
    /// degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(ExponentVector::degree);
        let d = degrees.next()?;
        degrees.all(|x| x == d).then_some(d)
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms.keys().map(ExponentVector::max_exponent).max().unwrap_or(0)
    }

    pub fn variables(&self) -> EdgeSet {
        self.terms.keys().flat_map(|m| m.support()).collect()
    }

    /// Sum of all coefficients.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn rename<F: Fn(EdgeId) -> EdgeId>(&self, f: F) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.rename(&f), c.clone());
        }
        out
    }

    /// Renders with custom variable names, e.g. `|g| format!("y{g}")`.
    pub fn display_with<'a, F: Fn(EdgeId) -> String + 'a>(&'a self, name: F) -> impl fmt::Display + 'a {
        Rendered { poly: self, name }
    }

    /// Parses canonical text with numeric variables, e.g. `y3*y4 - 2*y5^2`.
    /// Parentheses and juxtaposed factors such as `(y2 + y4)(y3 + y6)` are
    /// accepted.
    pub fn parse_with<F: Fn(&str) -> Option<EdgeId>>(text: &str, resolve: F) -> Result<Polynomial> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, resolve: &resolve };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

struct Rendered<'a, F> {
    poly: &'a Polynomial,
    name: F,
}

impl<F: Fn(EdgeId) -> String> fmt::Display for Rendered<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || !mag.is_one() {
                factors.push(mag.to_string());
            }
            for (g, k) in m.iter() {
                let v = (self.name)(g);
                factors.push(if k == 1 { v } else { format!("{v}^{k}") });
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|g| format!("y{g}")))
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Polynomial::parse_with(s, |name| name.parse::<u32>().ok().map(EdgeId))
    }
}

struct Parser<'a, F> {
    src: &'a [u8],
    pos: usize,
    resolve: &'a F,
}

impl<F: Fn(&str) -> Option<EdgeId>> Parser<'_, F> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'(') | Some(b'y') => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            let k: u32 = k.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'y') => {
                self.pos += 1;
                let start = self.pos;
                let numeric = self.src.get(self.pos).is_some_and(u8::is_ascii_digit);
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    let take = if numeric { c.is_ascii_digit() } else { c.is_ascii_alphanumeric() || c == b'_' };
                    if !take {
                        break;
                    }
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                let id = (self.resolve)(&name).ok_or_else(|| self.err("unknown variable"))?;
                Ok(Polynomial::var(id))
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap_or_default();
                let c: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(Polynomial::constant(c))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::zero(), |acc, p| acc + p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn y(i: u32) -> Polynomial {
        Polynomial::var(EdgeId(i))
    }

    fn ev(pairs: &[(u32, u32)]) -> ExponentVector {
        ExponentVector::from_pairs(pairs.iter().map(|&(g, k)| (EdgeId(g), k)))
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p("y3 + y5") + &p("y6"), p("y3 + y5 + y6"));
        let q = p("y3*y4 - 7");
        assert_eq!(&q + &Polynomial::zero(), q);
        let m = &y(2) * &y(6);
        assert!((&m + &m.scale(&BigInt::from(-1))).is_zero());
    }

    #[test]
    fn mul_examples() {
        let prod = &(&y(2) + &y(4)) * &(&y(3) + &y(6));
        assert_eq!(prod.to_string(), "y2*y3 + y2*y6 + y3*y4 + y4*y6");
        let q = p("y3*y4 - y2*y6");
        assert_eq!(&q * &Polynomial::one(), q);
        // schoolbook expansion of (a - b)^2
        let sq = &q * &q;
        let expected = Polynomial::from_iter_terms(&[
            (&[(3, 2), (4, 2)][..], 1),
            (&[(2, 1), (3, 1), (4, 1), (6, 1)][..], -2),
            (&[(2, 2), (6, 2)][..], 1),
        ]);
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "-2*y2*y3*y4*y6 + y2^2*y6^2 + y3^2*y4^2");
    }

    impl Polynomial {
        fn from_iter_terms(terms: &[(&[(u32, u32)], i64)]) -> Polynomial {
            let mut out = Polynomial::zero();
            for (m, c) in terms {
                out.add_term(ev(m), BigInt::from(*c));
            }
            out
        }
    }

    #[test]
    fn coefficient_examples() {
        let x_minus = p("y3*y4 + y4*y5 + y4*y6 + y5*y6");
        assert_eq!(x_minus.coefficient_of(&ev(&[(3, 1), (4, 1)])), BigInt::from(1));
        assert_eq!(x_minus.coefficient_of(&ev(&[(3, 1), (5, 1)])), BigInt::from(0));
        assert_eq!(Polynomial::one().coefficient_of(&ExponentVector::one()), BigInt::from(1));
    }

    #[test]
    fn evaluate_examples() {
        let ones: RationalWeights = (1..=6).map(|g| (EdgeId(g), BigRational::one())).collect();
        assert_eq!(p("y3 + y5 + y6").evaluate(&ones).unwrap(), BigRational::from_integer(3.into()));

        let w: RationalWeights = [(2, 1), (4, 2), (3, 3), (6, 4)]
            .iter()
            .map(|&(g, x)| (EdgeId(g), BigRational::from_integer(BigInt::from(x))))
            .collect();
        let q = p("(y2 + y4)*(y3 + y6)");
        assert_eq!(q.evaluate(&w).unwrap(), BigRational::from_integer(21.into()));
        assert_eq!(Polynomial::zero().evaluate(&w).unwrap(), BigRational::zero());
        assert_eq!(y(9).evaluate(&w), Err(Error::MissingWeight(EdgeId(9))));
    }

    #[test]
    fn multiaffine_examples() {
        assert!(p("y1 + y2").is_multiaffine());
        assert!(!p("y3^2").is_multiaffine());
        assert!(Polynomial::one().is_multiaffine());
    }

    #[test]
    fn canonical_order_and_rendering() {
        assert_eq!(p("y5*y6 + y3*y4 + y4*y5").to_string(), "y3*y4 + y4*y5 + y5*y6");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(p("-3 + y1").to_string(), "-3 + y1");
        assert_eq!(p("y3(y4y5 + y4y6)").to_string(), "y3*y4*y5 + y3*y4*y6");
        let named = p("y1 + y2");
        let s = named.display_with(|g| if g == EdgeId(1) { "ye".into() } else { "yf".into() }).to_string();
        assert_eq!(s, "ye + yf");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("y3 +".parse::<Polynomial>(), Err(Error::Parse { .. })));
        assert!(matches!("(y3".parse::<Polynomial>(), Err(Error::Parse { .. })));
        let resolved = Polynomial::parse_with("ye*yf", |s| match s {
            "e" => Some(EdgeId(0)),
            "f" => Some(EdgeId(1)),
            _ => None,
        })
        .unwrap();
        assert_eq!(resolved, &y(0) * &y(1));
    }

    #[test]
    fn product_coefficient_matches_full_product() {
        let a = p("y1*y2 + 3*y2*y3 - y4");
        let b = p("y3 - 2*y1*y4 + y2");
        let full = &a * &b;
        for (m, c) in full.terms() {
            assert_eq!(&Polynomial::product_coefficient(&a, &b, m), c);
        }
        assert!(Polynomial::product_coefficient(&a, &b, &ev(&[(9, 1)])).is_zero());
    }

    #[test]
    fn exponent_division() {
        let a = ev(&[(1, 2), (3, 1)]);
        assert_eq!(a.checked_div(&ev(&[(1, 1)])), Some(ev(&[(1, 1), (3, 1)])));
        assert_eq!(a.checked_div(&ev(&[(2, 1)])), None);
        assert_eq!(a.checked_div(&a), Some(ExponentVector::one()));
    }
}
