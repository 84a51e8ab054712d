//! Truncated Fourier expansions in rational powers of q.
//!
//! A series is `sum_n a(n) q^(n + offset)` for `offset` in [0, 1). Every index
//! up to `precision` that is not stored is exactly zero; nothing is known past
//! `precision`.

use crate::error::{Error, Result};
use crate::number::{floor_i64, frac, in_unit_interval, is_integer, Backend, Coeff};
use rug::Rational;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries {
    offset: Rational,
    precision: i64,
    backend: Backend,
    coeffs: BTreeMap<i64, Coeff>,
}

impl FourierSeries {
    /// Builds a series; repeated indices are summed and zeros dropped.
    pub fn new<I>(offset: Rational, precision: i64, backend: Backend, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Coeff)>,
    {
        if !in_unit_interval(&offset) {
            return Err(Error::OffsetOutOfRange(offset.to_string()));
        }
        if let Backend::Float(p) = backend {
            if p < crate::number::MIN_FLOAT_PREC {
                return Err(Error::FloatPrecisionTooLow(p));
            }
        }
        let mut coeffs: BTreeMap<i64, Coeff> = BTreeMap::new();
        for (n, c) in terms {
            if n > precision {
                return Err(Error::IndexAbovePrecision { index: n, precision });
            }
            if !c.backend().same_kind(&backend) {
                return Err(Error::BackendMismatch(format!(
                    "coefficient at n={n} is {} but series is {}",
                    c.backend().name(),
                    backend.name()
                )));
            }
            if !c.is_finite() {
                return Err(Error::NonFinite(format!("n={n}")));
            }
            let merged = match coeffs.remove(&n) {
                Some(old) => old.add(&c),
                None => c,
            };
            if !merged.is_zero() {
                coeffs.insert(n, merged);
            }
        }
        Ok(FourierSeries { offset, precision, backend, coeffs })
    }

    pub fn zero(offset: Rational, precision: i64, backend: Backend) -> Result<Self> {
        Self::new(offset, precision, backend, std::iter::empty())
    }

    pub fn from_rationals<I>(offset: Rational, precision: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        Self::new(
            offset,
            precision,
            Backend::Rational,
            terms.into_iter().map(|(n, q)| (n, Coeff::Rational(q))),
        )
    }

    /// Same coefficients with every entry converted to complex floats.
    pub fn to_float(&self, prec: u32) -> Self {
        FourierSeries {
            offset: self.offset.clone(),
            precision: self.precision,
            backend: Backend::Float(prec),
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (*n, Coeff::Complex(c.to_complex(prec))))
                .collect(),
        }
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn exponent(&self, n: i64) -> Rational {
        Rational::from(&self.offset + n)
    }

    /// Coefficient at index `n`, or `None` when `n` is past the precision.
    pub fn coeff(&self, n: i64) -> Option<Coeff> {
        if n > self.precision {
            return None;
        }
        Some(self.coeffs.get(&n).cloned().unwrap_or_else(|| Coeff::zero(self.backend)))
    }

    /// Coefficient of `q^e`; `Ok(None)` when `e` is past the precision.
    pub fn coeff_at_exponent(&self, e: &Rational) -> Result<Option<Coeff>> {
        let n = Rational::from(e - &self.offset);
        if !is_integer(&n) {
            return Err(Error::ExponentNotOnLattice(format!("{e} with offset {}", self.offset)));
        }
        Ok(self.coeff(floor_i64(&n)))
    }

    /// Index of `q^e` if `e` lies on this series' lattice.
    pub fn index_of_exponent(&self, e: &Rational) -> Option<i64> {
        let n = Rational::from(e - &self.offset);
        is_integer(&n).then(|| floor_i64(&n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, precision: i64) -> Self {
        let precision = precision.min(self.precision);
        FourierSeries {
            offset: self.offset.clone(),
            precision,
            backend: self.backend,
            coeffs: self.coeffs.range(..=precision).map(|(n, c)| (*n, c.clone())).collect(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<Backend> {
        self.backend.join(&other.backend)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let backend = self.check_compatible(other)?;
        if self.offset != other.offset {
            return Err(Error::OffsetMismatch(format!("{} vs {}", self.offset, other.offset)));
        }
        let precision = self.precision.min(other.precision);
        let mut coeffs = self.coeffs.clone();
        for (n, c) in &other.coeffs {
            let v = match coeffs.remove(n) {
                Some(a) => a.add(c),
                None => c.clone(),
            };
            if !v.is_zero() {
                coeffs.insert(*n, v);
            }
        }
        coeffs.retain(|n, _| *n <= precision);
        Ok(FourierSeries { offset: self.offset.clone(), precision, backend, coeffs })
    }

    pub fn neg(&self) -> Self {
        self.scale_rational(&Rational::from(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Cauchy product. Offsets add modulo 1 with the carry moved into the
    /// indices; the result is known only as far as both factors pin it down.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let backend = self.check_compatible(other)?;
        let sum = Rational::from(&self.offset + &other.offset);
        let carry = floor_i64(&sum);
        let offset = frac(&sum);
        let va = self.valuation().unwrap_or(self.precision + 1);
        let vb = other.valuation().unwrap_or(other.precision + 1);
        let limit = (self.precision + vb).min(other.precision + va);
        let mut acc: BTreeMap<i64, Coeff> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            if i + vb > limit {
                break;
            }
            for (j, b) in other.coeffs.range(..=limit - i) {
                let p = a.mul(b);
                let n = i + j + carry;
                let v = match acc.remove(&n) {
                    Some(old) => old.add(&p),
                    None => p,
                };
                acc.insert(n, v);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(FourierSeries { offset, precision: limit + carry, backend, coeffs: acc })
    }

    /// Multiplies `a(n)` by `(n + offset)^s`: the s-th power of `q d/dq`.
    pub fn diag_pow(&self, s: u32) -> Self {
        if s == 0 {
            return self.clone();
        }
        let mut coeffs = BTreeMap::new();
        for (n, c) in &self.coeffs {
            let e = self.exponent(*n);
            let f = crate::number::rpow(&e, s as i64);
            let v = c.mul_rational(&f);
            if !v.is_zero() {
                coeffs.insert(*n, v);
            }
        }
        FourierSeries { offset: self.offset.clone(), precision: self.precision, backend: self.backend, coeffs }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let coeffs = if q.cmp0().is_eq() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(n, c)| (*n, c.mul_rational(q))).collect()
        };
        FourierSeries { offset: self.offset.clone(), precision: self.precision, backend: self.backend, coeffs }
    }

    pub fn scale(&self, c: &Coeff) -> Result<Self> {
        let backend = self.backend.join(&c.backend())?;
        let mut coeffs = BTreeMap::new();
        for (n, a) in &self.coeffs {
            let v = a.mul(c);
            if !v.is_zero() {
                coeffs.insert(*n, v);
            }
        }
        Ok(FourierSeries { offset: self.offset.clone(), precision: self.precision, backend, coeffs })
    }

    pub fn conj(&self) -> Self {
        FourierSeries {
            offset: self.offset.clone(),
            precision: self.precision,
            backend: self.backend,
            coeffs: self.coeffs.iter().map(|(n, c)| (*n, c.conj())).collect(),
        }
    }

    /// True when both agree on every index up to the smaller precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.offset != other.offset || !self.backend.same_kind(&other.backend) {
            return false;
        }
        let p = self.precision.min(other.precision);
        let a = self.coeffs.range(..=p);
        let b = other.coeffs.range(..=p);
        a.eq(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;
    use proptest::prelude::*;

    fn series(offset: Rational, precision: i64, terms: &[(i64, i64)]) -> FourierSeries {
        FourierSeries::from_rationals(offset, precision, terms.iter().map(|&(n, c)| (n, Rational::from(c))))
            .unwrap()
    }

    #[test]
    fn rejects_offset_outside_unit_interval() {
        assert!(FourierSeries::zero(rat(1, 1), 3, Backend::Rational).is_err());
        assert!(FourierSeries::zero(rat(-1, 3), 3, Backend::Rational).is_err());
    }

    #[test]
    fn rejects_index_above_precision() {
        let r = FourierSeries::from_rationals(Rational::new(), 2, [(3, Rational::from(1))]);
        assert!(matches!(r, Err(Error::IndexAbovePrecision { index: 3, precision: 2 })));
    }

    #[test]
    fn mul_carries_offsets() {
        let a = series(rat(3, 4), 5, &[(0, 1)]);
        let b = series(rat(1, 2), 5, &[(0, 1), (1, 2)]);
        let c = a.mul(&b).unwrap();
        assert_eq!(*c.offset(), rat(1, 4));
        assert_eq!(c.coeff(1).unwrap(), Coeff::Rational(Rational::from(1)));
        assert_eq!(c.coeff(2).unwrap(), Coeff::Rational(Rational::from(2)));
        assert_eq!(c.precision(), 6);
    }

    #[test]
    fn mul_precision_uses_valuations() {
        let a = series(Rational::new(), 10, &[(2, 1)]);
        let b = series(Rational::new(), 4, &[(1, 1)]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.precision(), 6);
        assert_eq!(c.coeff(3).unwrap(), Coeff::Rational(Rational::from(1)));
    }

    #[test]
    fn diag_pow_uses_true_exponent() {
        let a = series(rat(1, 3), 3, &[(1, 3)]);
        let d = a.diag_pow(2);
        assert_eq!(d.coeff(1).unwrap(), Coeff::Rational(rat(16, 3)));
    }

    #[test]
    fn coeff_at_exponent_requires_lattice() {
        let a = series(rat(1, 3), 3, &[(1, 3)]);
        assert!(a.coeff_at_exponent(&rat(1, 2)).is_err());
        assert_eq!(a.coeff_at_exponent(&rat(4, 3)).unwrap().unwrap(), Coeff::Rational(Rational::from(3)));
        assert!(a.coeff_at_exponent(&rat(13, 3)).unwrap().is_none());
    }

    #[test]
    fn mixed_backends_rejected() {
        let a = series(Rational::new(), 3, &[(0, 1)]);
        let b = a.to_float(64);
        assert!(matches!(a.add(&b), Err(Error::BackendMismatch(_))));
        assert!(matches!(a.mul(&b), Err(Error::BackendMismatch(_))));
    }

    fn arb_series(offset: Rational) -> impl Strategy<Value = FourierSeries> {
        (3i64..9, prop::collection::vec((0i64..9, -20i64..20, 1i64..5), 0..8)).prop_map(move |(p, ts)| {
            FourierSeries::from_rationals(
                offset.clone(),
                p,
                ts.into_iter().filter(|t| t.0 <= p).map(|(n, a, b)| (n, rat(a, b))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn mul_commutes(a in arb_series(rat(1, 3)), b in arb_series(rat(5, 6))) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn mul_associates(a in arb_series(rat(1, 2)), b in arb_series(rat(3, 4)), c in arb_series(rat(1, 4))) {
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert!(l.agrees_with(&r));
        }

        #[test]
        fn mul_distributes(a in arb_series(rat(1, 2)), b in arb_series(Rational::new()), c in arb_series(Rational::new())) {
            let l = a.mul(&b.add(&c).unwrap()).unwrap();
            let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert!(l.agrees_with(&r));
        }

        #[test]
        fn add_commutes(a in arb_series(rat(2, 5)), b in arb_series(rat(2, 5))) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        }

        #[test]
        fn diag_pow_composes(a in arb_series(rat(1, 6)), s in 0u32..4, t in 0u32..4) {
            prop_assert_eq!(a.diag_pow(s).diag_pow(t), a.diag_pow(s + t));
        }

        #[test]
        fn leibniz_rule(a in arb_series(rat(1, 3)), b in arb_series(rat(1, 2))) {
            let lhs = a.mul(&b).unwrap().diag_pow(1);
            let rhs = a.diag_pow(1).mul(&b).unwrap().add(&a.mul(&b.diag_pow(1)).unwrap()).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }
    }
}
