//! Reference scalar forms on SL2(Z) and a weight 1/2 theta series.

use crate::error::{Error, Result};
use crate::number::{binomial, rat};
use crate::qseries::FourierSeries;
use crate::vvforms::VVForm;
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Sum of `d^k` over the positive divisors `d` of `n`.
pub fn sigma(k: u32, n: u64) -> Integer {
    let mut acc = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                acc += Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    acc
}

/// Bernoulli numbers with `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::from(1));
            continue;
        }
        let mut s = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from(binomial(m + 1, j as u32)) * bj;
        }
        b.push(-s / (m + 1));
    }
    b.pop().unwrap()
}

/// Normalized Eisenstein series `1 - (2k / B_k) sum sigma_{k-1}(n) q^n`.
pub fn eisenstein(k: u32, n_max: i64) -> Result<VVForm> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Eisenstein weight {k} must be even and at least 4")));
    }
    let c = Rational::from(-2 * k as i64) / bernoulli(k);
    let terms = std::iter::once((0, Rational::from(1)))
        .chain((1..=n_max).map(|n| (n, Rational::from(&c * sigma(k - 1, n as u64)))));
    VVForm::scalar(Rational::from(k), FourierSeries::from_rationals(Rational::new(), n_max, terms)?, false)
}

pub fn e4(n_max: i64) -> VVForm {
    eisenstein(4, n_max).expect("weight 4 is valid")
}

pub fn e6(n_max: i64) -> VVForm {
    eisenstein(6, n_max).expect("weight 6 is valid")
}

/// `(E4^3 - E6^2) / 1728`.
pub fn delta(n_max: i64) -> VVForm {
    let a = e4(n_max);
    let b = e6(n_max);
    let a = a.component(0);
    let b = b.component(0);
    let s = a
        .mul(a)
        .and_then(|x| x.mul(a))
        .and_then(|x| x.sub(&b.mul(b)?))
        .expect("level one series are compatible")
        .scale_rational(&rat(1, 1728))
        .truncate(n_max);
    VVForm::scalar(Rational::from(12), s, true).expect("Delta is cuspidal")
}

fn product(a: &VVForm, b: &VVForm, n_max: i64, cusp: bool) -> VVForm {
    let s = a.component(0).mul(b.component(0)).expect("compatible").truncate(n_max);
    VVForm::scalar(Rational::from(a.weight() + b.weight()), s, cusp).expect("valid product")
}

/// `E6 * Delta`, weight 18.
pub fn e6_delta(n_max: i64) -> VVForm {
    product(&e6(n_max), &delta(n_max), n_max, true)
}

/// `E4 * Delta`, weight 16.
pub fn e4_delta(n_max: i64) -> VVForm {
    product(&e4(n_max), &delta(n_max), n_max, true)
}

/// `sum_{r odd} q^(r^2/4)`, stored with offset 1/4 and weight 1/2.
pub fn theta_quarter(n_max: i64) -> VVForm {
    let mut terms = Vec::new();
    let mut r: i64 = 1;
    loop {
        let n = (r * r - 1) / 4;
        if n > n_max {
            break;
        }
        terms.push((n, Rational::from(2)));
        r += 2;
    }
    let s = FourierSeries::from_rationals(rat(1, 4), n_max, terms).expect("valid theta series");
    VVForm::scalar(rat(1, 2), s, true).expect("no constant term")
}

/// Every fixture by file stem.
pub fn all(n_max: i64) -> Vec<(&'static str, VVForm)> {
    vec![
        ("E4", e4(n_max)),
        ("E6", e6(n_max)),
        ("E12", eisenstein(12, n_max).expect("weight 12 is valid")),
        ("Delta", delta(n_max)),
        ("Delta3456", delta(n_max).scale_rational(&Rational::from(3456))),
        ("E6Delta", e6_delta(n_max)),
        ("E4Delta", e4_delta(n_max)),
        ("theta", theta_quarter(n_max)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::Coeff;

    fn c(f: &VVForm, n: i64) -> Rational {
        f.component(0).coeff(n).unwrap().as_rational().unwrap().clone()
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(sigma(3, 6), 1 + 8 + 27 + 216);
        assert_eq!(sigma(0, 12), 6);
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn eisenstein_normalizations() {
        assert_eq!(c(&e4(3), 1), 240);
        assert_eq!(c(&e6(3), 1), -504);
        assert_eq!(c(&eisenstein(12, 2).unwrap(), 1), rat(65520, 691));
    }

    #[test]
    fn ramanujan_tau() {
        let d = delta(10);
        let tau = [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
        for (n, t) in tau.iter().enumerate() {
            assert_eq!(c(&d, n as i64), *t, "tau({n})");
        }
    }

    #[test]
    fn theta_coefficients() {
        let t = theta_quarter(12);
        let s = t.component(0);
        assert_eq!(s.coeff(0).unwrap(), Coeff::Rational(Rational::from(2)));
        assert!(s.coeff(1).unwrap().is_zero());
        assert_eq!(s.coeff(2).unwrap(), Coeff::Rational(Rational::from(2)));
        assert_eq!(s.coeff(6).unwrap(), Coeff::Rational(Rational::from(2)));
        assert_eq!(s.coeff(12).unwrap(), Coeff::Rational(Rational::from(2)));
    }
}
