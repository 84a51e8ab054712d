//! Scalar coefficient types shared by every series.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

pub const MIN_FLOAT_PREC: u32 = 64;
pub const DEFAULT_FLOAT_PREC: u32 = 128;

/// Working float precision in bits, read from `RCVV_FLOAT_PREC`.
pub fn float_prec_from_env() -> Result<u32> {
    match std::env::var("RCVV_FLOAT_PREC") {
        Ok(v) => {
            let p: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("RCVV_FLOAT_PREC={v}")))?;
            if p < MIN_FLOAT_PREC {
                return Err(Error::FloatPrecisionTooLow(p));
            }
            Ok(p)
        }
        Err(_) => Ok(DEFAULT_FLOAT_PREC),
    }
}

/// Coefficient representation of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Rational,
    /// Complex MPFR floats with the given mantissa width.
    Float(u32),
}

impl Backend {
    pub fn same_kind(&self, other: &Backend) -> bool {
        matches!(
            (self, other),
            (Backend::Rational, Backend::Rational) | (Backend::Float(_), Backend::Float(_))
        )
    }

    pub fn join(&self, other: &Backend) -> Result<Backend> {
        match (self, other) {
            (Backend::Rational, Backend::Rational) => Ok(Backend::Rational),
            (Backend::Float(a), Backend::Float(b)) => Ok(Backend::Float(*a.max(b))),
            _ => Err(Error::BackendMismatch(format!("{self:?} vs {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float(_) => "float",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, q), im: Float::new(prec) }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        BigComplex { re: ac - bd, im: ad + bc }
    }

    pub fn mul_rational(&self, q: &Rational) -> BigComplex {
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re * q),
            im: Float::with_val(p, &self.im * q),
        }
    }

    pub fn mul_real(&self, x: &Float) -> BigComplex {
        let p = self.prec().max(x.prec());
        BigComplex {
            re: Float::with_val(p, &self.re * x),
            im: Float::with_val(p, &self.im * x),
        }
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// A single Fourier coefficient.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Rational(Rational),
    Complex(BigComplex),
}

impl Coeff {
    pub fn zero(backend: Backend) -> Coeff {
        match backend {
            Backend::Rational => Coeff::Rational(Rational::new()),
            Backend::Float(p) => Coeff::Complex(BigComplex::zero(p)),
        }
    }

    pub fn from_rational(q: Rational, backend: Backend) -> Coeff {
        match backend {
            Backend::Rational => Coeff::Rational(q),
            Backend::Float(p) => Coeff::Complex(BigComplex::from_rational(&q, p)),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Coeff::Rational(_) => Backend::Rational,
            Coeff::Complex(c) => Backend::Float(c.prec()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.cmp0().is_eq(),
            Coeff::Complex(c) => c.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coeff::Rational(q) => Some(q),
            Coeff::Complex(_) => None,
        }
    }

    fn mismatch(a: &Coeff, b: &Coeff) -> ! {
        panic!("coefficient backend mismatch: {:?} vs {:?}", a.backend(), b.backend())
    }

    /// Panics on mixed backends; series operations check compatibility first.
    pub fn add(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(Rational::from(a + b)),
            (Coeff::Complex(a), Coeff::Complex(b)) => Coeff::Complex(a.add(b)),
            _ => Self::mismatch(self, o),
        }
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(Rational::from(a * b)),
            (Coeff::Complex(a), Coeff::Complex(b)) => Coeff::Complex(a.mul(b)),
            _ => Self::mismatch(self, o),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(Rational::from(-a)),
            Coeff::Complex(a) => Coeff::Complex(a.neg()),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(Rational::from(a * q)),
            Coeff::Complex(a) => Coeff::Complex(a.mul_rational(q)),
        }
    }

    /// Complex conjugate; the identity on exact rationals.
    pub fn conj(&self) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(a.clone()),
            Coeff::Complex(a) => Coeff::Complex(a.conj()),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Coeff::Rational(_) => true,
            Coeff::Complex(c) => c.is_finite(),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Coeff::Rational(q) => Complex64::new(q.to_f64(), 0.0),
            Coeff::Complex(c) => c.to_c64(),
        }
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        match self {
            Coeff::Rational(q) => BigComplex::from_rational(q, prec),
            Coeff::Complex(c) => c.clone(),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

pub fn floor_int(q: &Rational) -> Integer {
    Integer::from(q.floor_ref())
}

pub fn floor_i64(q: &Rational) -> i64 {
    floor_int(q).to_i64().expect("floor does not fit in i64")
}

pub fn ceil_i64(q: &Rational) -> i64 {
    Integer::from(q.ceil_ref()).to_i64().expect("ceil does not fit in i64")
}

/// q - floor(q), in [0, 1).
pub fn frac(q: &Rational) -> Rational {
    let fl = Rational::from(floor_int(q));
    Rational::from(q - &fl)
}

pub fn is_integer(q: &Rational) -> bool {
    *q.denom() == 1
}

pub fn in_unit_interval(q: &Rational) -> bool {
    q.cmp0().is_ge() && *q < 1
}

/// q^e for integer e; 0^0 = 1. Panics on 0 to a negative power.
pub fn rpow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        q.clone().pow(u32::try_from(e).expect("exponent too large"))
    } else {
        assert!(q.cmp0().is_ne(), "zero to a negative power");
        q.clone().recip().pow(u32::try_from(-e).expect("exponent too large"))
    }
}

/// Exact binomial coefficient C(n, k) for n >= 0.
pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Product x (x + 1) ... (x + len - 1).
pub fn rising(x: &Rational, len: u32) -> Rational {
    let mut acc = Rational::from(1);
    for t in 0..len {
        acc *= Rational::from(x + t);
    }
    acc
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn rational_to_float(q: &Rational, prec: u32) -> Float {
    Float::with_val(prec, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_and_floor() {
        assert_eq!(frac(&rat(-1, 4)), rat(3, 4));
        assert_eq!(floor_i64(&rat(-1, 4)), -1);
        assert_eq!(frac(&rat(7, 3)), rat(1, 3));
        assert_eq!(ceil_i64(&rat(7, 3)), 3);
    }

    #[test]
    fn rpow_zero_to_zero_is_one() {
        assert_eq!(rpow(&Rational::new(), 0), 1);
        assert_eq!(rpow(&rat(2, 3), -2), rat(9, 4));
    }

    #[test]
    fn complex_arithmetic() {
        let i = BigComplex::from_parts(Float::with_val(64, 0), Float::with_val(64, 1));
        let m = i.mul(&i);
        assert_eq!(m.re, -1);
        assert!(m.im.is_zero());
        assert_eq!(i.conj().im, -1);
    }

    #[test]
    fn backend_join() {
        assert_eq!(Backend::Float(64).join(&Backend::Float(128)).unwrap(), Backend::Float(128));
        assert!(Backend::Rational.join(&Backend::Float(64)).is_err());
    }
}
