//! Exact closed forms: finite sums of rational multiples of
//! `prod p^(a_p) * pi^b * prod Gamma(x)^(c_x)`.
//!
//! Canonical shape: prime exponents lie in (0, 1) with integer parts moved into
//! the rational coefficient, and each Gamma argument lies in (0, 1) minus 1/2
//! (which becomes `pi^(1/2)`). Equal values therefore have equal representations
//! as long as no algebraic relation between distinct Gamma values is involved.

use crate::error::{Error, Result};
use crate::number::{floor_i64, frac, is_integer, rat, rpow};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    primes: BTreeMap<Integer, Rational>,
    pi: Rational,
    gammas: BTreeMap<Rational, i64>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.primes.is_empty() && self.pi.cmp0().is_eq() && self.gammas.is_empty()
    }

    pub fn pi_exponent(&self) -> &Rational {
        &self.pi
    }

    /// Product, with integer parts of prime exponents returned as a rational factor.
    pub fn mul(&self, o: &Monomial) -> (Rational, Monomial) {
        let mut coeff = Rational::from(1);
        let mut primes = self.primes.clone();
        for (p, e) in &o.primes {
            let total = match primes.remove(p) {
                Some(a) => Rational::from(&a + e),
                None => e.clone(),
            };
            let whole = floor_i64(&total);
            coeff *= rpow(&Rational::from(p), whole);
            let f = frac(&total);
            if f.cmp0().is_ne() {
                primes.insert(p.clone(), f);
            }
        }
        let mut gammas = self.gammas.clone();
        for (x, c) in &o.gammas {
            let v = gammas.get(x).copied().unwrap_or(0) + c;
            if v == 0 {
                gammas.remove(x);
            } else {
                gammas.insert(x.clone(), v);
            }
        }
        let pi = Rational::from(&self.pi + &o.pi);
        (coeff, Monomial { primes, pi, gammas })
    }

    pub fn inv(&self) -> (Rational, Monomial) {
        let mut coeff = Rational::from(1);
        let mut primes = BTreeMap::new();
        for (p, e) in &self.primes {
            // p^(-e) = p^(-1) p^(1-e)
            coeff /= Rational::from(p);
            primes.insert(p.clone(), Rational::from(1 - e));
        }
        let gammas = self.gammas.iter().map(|(x, c)| (x.clone(), -c)).collect();
        (coeff, Monomial { primes, pi: Rational::from(-&self.pi), gammas })
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let work = prec + 32;
        let mut acc = Float::with_val(work, 1);
        for (p, e) in &self.primes {
            let base = Float::with_val(work, p);
            acc *= base.pow(&Float::with_val(work, e));
        }
        if self.pi.cmp0().is_ne() {
            let pi = Float::with_val(work, Constant::Pi);
            acc *= pi.pow(&Float::with_val(work, &self.pi));
        }
        for (x, c) in &self.gammas {
            let g = Float::with_val(work, x).gamma();
            acc *= g.pow(*c as i32);
        }
        Float::with_val(prec, acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (p, e) in &self.primes {
            parts.push(format!("{p}^({e})"));
        }
        if self.pi.cmp0().is_ne() {
            parts.push(if self.pi == 1 { "pi".to_string() } else { format!("pi^({})", self.pi) });
        }
        for (x, c) in &self.gammas {
            parts.push(if *c == 1 { format!("Gamma({x})") } else { format!("Gamma({x})^({c})") });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Prime factorization by trial division.
pub fn factor(n: &Integer) -> BTreeMap<Integer, u32> {
    let mut out = BTreeMap::new();
    let mut n = Integer::from(n.abs_ref());
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= n {
        while n.is_divisible(&p) {
            n /= &p;
            *out.entry(p.clone()).or_insert(0) += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymExpr {
    terms: BTreeMap<Monomial, Rational>,
}

impl SymExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Rational::from(1))
    }

    pub fn rational(q: Rational) -> Self {
        Self::term(q, Monomial::one())
    }

    pub fn term(q: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if q.cmp0().is_ne() {
            terms.insert(m, q);
        }
        SymExpr { terms }
    }

    pub fn pi_pow(e: Rational) -> Self {
        Self::term(Rational::from(1), Monomial { pi: e, ..Monomial::one() })
    }

    /// `base^e` for a positive rational base.
    pub fn power(base: &Rational, e: &Rational) -> Result<Self> {
        if base.cmp0().is_le() {
            return Err(Error::InvalidArgument(format!("power of non-positive base {base}")));
        }
        let mut coeff = Rational::from(1);
        let mut primes = BTreeMap::new();
        let parts = factor(base.numer())
            .into_iter()
            .map(|(p, a)| (p, a as i64))
            .chain(factor(base.denom()).into_iter().map(|(p, a)| (p, -(a as i64))));
        for (p, a) in parts {
            let total = Rational::from(e * a);
            coeff *= rpow(&Rational::from(&p), floor_i64(&total));
            let f = frac(&total);
            if f.cmp0().is_ne() {
                primes.insert(p, f);
            }
        }
        Ok(Self::term(coeff, Monomial { primes, ..Monomial::one() }))
    }

    /// `(4 pi)^e`.
    pub fn four_pi_pow(e: &Rational) -> Self {
        Self::power(&Rational::from(4), e).expect("positive base").mul(&Self::pi_pow(e.clone()))
    }

    /// `Gamma(x)` reduced to an argument in (0, 1).
    pub fn gamma(x: &Rational) -> Result<Self> {
        if is_integer(x) {
            if x.cmp0().is_le() {
                return Err(Error::GammaPole(x.to_string()));
            }
            let n = floor_i64(x);
            let mut f = Integer::from(1);
            for t in 1..n {
                f *= t;
            }
            return Ok(Self::rational(Rational::from(f)));
        }
        let f = frac(x);
        let n = floor_i64(x);
        let mut coeff = Rational::from(1);
        if n >= 0 {
            for t in 0..n {
                coeff *= Rational::from(&f + t);
            }
        } else {
            for t in 0..(-n) {
                coeff /= Rational::from(x + t);
            }
        }
        let mono = if f == rat(1, 2) {
            Monomial { pi: rat(1, 2), ..Monomial::one() }
        } else {
            let mut gammas = BTreeMap::new();
            gammas.insert(f, 1);
            Monomial { gammas, ..Monomial::one() }
        };
        Ok(Self::term(coeff, mono))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn single_term(&self) -> Option<(&Rational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, q)| (q, m))
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn insert(&mut self, m: Monomial, q: Rational) {
        let v = match self.terms.remove(&m) {
            Some(a) => a + q,
            None => q,
        };
        if v.cmp0().is_ne() {
            self.terms.insert(m, v);
        }
    }

    pub fn add(&self, o: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (m, q) in &o.terms {
            out.insert(m.clone(), q.clone());
        }
        out
    }

    pub fn neg(&self) -> SymExpr {
        self.scale(&Rational::from(-1))
    }

    pub fn sub(&self, o: &SymExpr) -> SymExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Rational) -> SymExpr {
        if q.cmp0().is_eq() {
            return SymExpr::zero();
        }
        SymExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), Rational::from(c * q))).collect() }
    }

    pub fn mul(&self, o: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &o.terms {
                let (c, m) = ma.mul(mb);
                out.insert(m, c * qa * qb);
            }
        }
        out
    }

    /// Reciprocal of a single-term expression.
    pub fn inv(&self) -> Option<SymExpr> {
        let (q, m) = self.single_term()?;
        let (c, mi) = m.inv();
        Some(SymExpr::term(c / q, mi))
    }

    /// `self / other` when the result is a single term.
    pub fn ratio(&self, other: &SymExpr) -> Option<SymExpr> {
        if let Some(inv) = other.inv() {
            let r = self.mul(&inv);
            return (r.terms.len() == 1).then_some(r);
        }
        // Multi-term: proportional when every monomial ratio agrees.
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let mut found: Option<SymExpr> = None;
        for ((ma, qa), (mb, qb)) in self.terms.iter().zip(&other.terms) {
            let r = SymExpr::term(qa.clone(), ma.clone()).mul(&SymExpr::term(qb.clone(), mb.clone()).inv()?);
            match &found {
                None => found = Some(r),
                Some(f) if *f == r => {}
                _ => return None,
            }
        }
        let f = found?;
        (other.mul(&f) == *self).then_some(f)
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let mut acc = Float::with_val(prec + 32, 0);
        for (m, q) in &self.terms {
            acc += m.to_float(prec + 32) * Float::with_val(prec + 32, q);
        }
        Float::with_val(prec, acc)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(128).to_f64()
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, q)| if m.is_one() { q.to_string() } else { format!("({q})*{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn gamma_reduction() {
        assert_eq!(SymExpr::gamma(&rat(5, 1)).unwrap(), SymExpr::rational(Rational::from(24)));
        let half = SymExpr::gamma(&rat(5, 2)).unwrap();
        assert!(close(half.to_f64(), 1.329_340_388_179_137));
        let third = SymExpr::gamma(&rat(-2, 3)).unwrap();
        assert!(close(third.to_f64(), -4.018_407_802_061_65));
        assert!(matches!(SymExpr::gamma(&rat(-3, 1)), Err(Error::GammaPole(_))));
    }

    #[test]
    fn powers_canonicalize() {
        let a = SymExpr::power(&rat(8, 1), &rat(1, 2)).unwrap();
        let b = SymExpr::power(&rat(2, 1), &rat(3, 2)).unwrap();
        assert_eq!(a, b);
        assert!(close(a.to_f64(), 8f64.sqrt()));
        let c = SymExpr::power(&rat(9, 4), &rat(-1, 2)).unwrap();
        assert_eq!(c, SymExpr::rational(rat(2, 3)));
    }

    #[test]
    fn four_pi_power_value() {
        let x = SymExpr::four_pi_pow(&rat(-11, 2));
        assert!(close(x.to_f64(), (4.0 * std::f64::consts::PI).powf(-5.5)));
    }

    #[test]
    fn ratio_detects_monomial_factor() {
        let a = SymExpr::gamma(&rat(7, 3)).unwrap().add(&SymExpr::pi_pow(rat(1, 1)));
        let k = SymExpr::power(&rat(2, 1), &rat(1, 2)).unwrap().scale(&rat(3, 1));
        let b = a.mul(&k);
        assert_eq!(b.ratio(&a).unwrap(), k);
        assert!(a.ratio(&SymExpr::one()).is_none());
    }

    #[test]
    fn factor_small() {
        let f = factor(&Integer::from(360));
        assert_eq!(f.get(&Integer::from(2)), Some(&3));
        assert_eq!(f.get(&Integer::from(3)), Some(&2));
        assert_eq!(f.get(&Integer::from(5)), Some(&1));
    }

    proptest! {
        #[test]
        fn power_laws(n in 1i64..200, d in 1i64..50, a in -7i64..7, b in 1i64..6, c in -7i64..7) {
            let base = rat(n, d);
            let e1 = rat(a, b);
            let e2 = rat(c, b);
            let lhs = SymExpr::power(&base, &e1).unwrap().mul(&SymExpr::power(&base, &e2).unwrap());
            let rhs = SymExpr::power(&base, &(e1.clone() + &e2)).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            let want = (n as f64 / d as f64).powf((a + c) as f64 / b as f64);
            prop_assert!((lhs.to_f64() - want).abs() <= 1e-10 * want.max(1.0));
        }

        #[test]
        fn gamma_recurrence(p in -20i64..40, q in 1i64..9) {
            let x = rat(p, q);
            prop_assume!(!(is_integer(&x) && x.cmp0().is_le()));
            let x1 = Rational::from(&x + 1);
            let lhs = SymExpr::gamma(&x1).unwrap();
            let rhs = SymExpr::gamma(&x).unwrap().scale(&x);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
