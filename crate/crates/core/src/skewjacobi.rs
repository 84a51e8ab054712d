//! Skew-holomorphic Jacobi forms stored through the conjugated theta
//! components `G = (conj g_1, ..., conj g_2m)`.
//!
//! The coefficient `d(n + kappa, r)` with `D = r^2/4m - (n + kappa) >= 0`
//! is stored as `conj(d)` in component `mu = r mod 2m` at exponent `D`, so
//! component `mu` has offset `(mu^2/4m - kappa) mod 1`. The damping factor
//! `exp(-pi y (r^2 - 4m(n + kappa)) / m)` is fixed by `(n, r)` and never stored.

use crate::error::{Error, Result};
use crate::jacobi::mu_of;
use crate::number::{floor_i64, frac, in_unit_interval, is_integer, rat, Backend, Coeff};
use crate::qseries::FourierSeries;
use crate::vvforms::{gen_binomial, MultiplierData, VVForm};
use rug::Rational;
use std::collections::BTreeMap;

/// `(mu^2/4m - kappa) mod 1`.
pub fn skew_component_offset(m: u32, kappa: &Rational, mu: i64) -> Rational {
    frac(&(rat(mu * mu, 4 * m as i64) - Rational::from(kappa)))
}

/// `(r^2 - 4m x) / m`: the coefficient of `-pi y` in the damping exponent.
pub fn damping_rate(m: u32, x: &Rational, r: i64) -> Rational {
    (Rational::from(r * r) - Rational::from(x * (4 * m))) / m
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkewCoefficientView {
    pub index: u32,
    pub kappa: Rational,
    pub n_max: i64,
    pub entries: BTreeMap<(i64, i64), Coeff>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkewThetaForm {
    index: u32,
    weight: Rational,
    kappa: Rational,
    g: VVForm,
}

impl SkewThetaForm {
    /// `components` are the stored `G_mu`, 1-based by position.
    pub fn new(
        index: u32,
        weight: Rational,
        kappa: Rational,
        components: Vec<FourierSeries>,
        cusp: bool,
    ) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidArgument("Jacobi index must be positive".into()));
        }
        if !in_unit_interval(&kappa) {
            return Err(Error::OffsetOutOfRange(kappa.to_string()));
        }
        if components.len() != 2 * index as usize {
            return Err(Error::DimensionMismatch(format!(
                "index {index} needs {} components, got {}",
                2 * index,
                components.len()
            )));
        }
        let offsets: Vec<Rational> =
            (1..=2 * index as i64).map(|mu| skew_component_offset(index, &kappa, mu)).collect();
        for (i, (c, o)) in components.iter().zip(&offsets).enumerate() {
            if c.offset() != o {
                return Err(Error::OffsetMismatch(format!(
                    "component {} has offset {} but (m, kappa) = ({index}, {kappa}) gives {o}",
                    i + 1,
                    c.offset()
                )));
            }
        }
        let meta = MultiplierData::new(Rational::from(&weight - rat(1, 2)), offsets)?;
        let g = VVForm::new(meta, components, cusp)?;
        Ok(SkewThetaForm { index, weight, kappa, g })
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn backend(&self) -> Backend {
        self.g.backend()
    }

    pub fn cusp_flag(&self) -> bool {
        self.g.cusp_flag()
    }

    pub fn is_cusp(&self) -> bool {
        self.g.is_cusp()
    }

    /// Stored component `G_mu`, 1-based.
    pub fn component(&self, mu: i64) -> &FourierSeries {
        self.g.component((mu - 1) as usize)
    }

    pub fn components(&self) -> &[FourierSeries] {
        self.g.components()
    }

    /// `d(x, r)` at `x = n + kappa`; zero outside `r^2 >= 4m x`, `Ok(None)` past the precision.
    pub fn coefficient_at(&self, x: &Rational, r: i64) -> Result<Option<Coeff>> {
        if !is_integer(&Rational::from(x - &self.kappa)) {
            return Err(Error::ExponentNotOnLattice(format!("{x} with kappa {}", self.kappa)));
        }
        let d = rat(r * r, 4 * self.index as i64) - Rational::from(x);
        if d.cmp0().is_lt() {
            return Ok(Some(Coeff::zero(self.backend())));
        }
        Ok(self.component(mu_of(r, self.index)).coeff_at_exponent(&d)?.map(|c| c.conj()))
    }

    pub fn coefficient(&self, n: i64, r: i64) -> Option<Coeff> {
        self.coefficient_at(&Rational::from(&self.kappa + n), r)
            .expect("n + kappa is on the lattice")
    }

    /// Nonzero `d(n + kappa, r)` for `n <= n_max` whose discriminant is within precision.
    pub fn coefficient_view(&self, n_max: i64) -> SkewCoefficientView {
        let m = self.index as i64;
        let top = Rational::from(&self.kappa + n_max);
        let mut entries = BTreeMap::new();
        for (i, comp) in self.components().iter().enumerate() {
            let mu = i as i64 + 1;
            for (j, c) in comp.terms() {
                let e = comp.exponent(j);
                let room = Rational::from(&top + &e) * (4 * m);
                if room.cmp0().is_lt() {
                    continue;
                }
                let r_max = (floor_i64(&room) as f64).sqrt() as i64 + 1;
                let mut r = -r_max - 2 * m;
                r += (mu - r).rem_euclid(2 * m);
                while r <= r_max {
                    let x = rat(r * r, 4 * m) - Rational::from(&e);
                    if x <= top {
                        let n = floor_i64(&Rational::from(&x - &self.kappa));
                        entries.insert((n, r), c.conj());
                    }
                    r += 2 * m;
                }
            }
        }
        SkewCoefficientView { index: self.index, kappa: self.kappa.clone(), n_max, entries }
    }

    /// The vector-valued form `G` of weight `k - 1/2`.
    pub fn psi_sk(&self) -> VVForm {
        self.g.clone()
    }

    /// Inverse of [`psi_sk`](Self::psi_sk); index and `kappa` are read off the offsets.
    pub fn psi_sk_inv(f: &VVForm) -> Result<Self> {
        let d = f.dim();
        if d % 2 == 1 {
            return Err(Error::DimensionMismatch(format!("dimension {d} is odd")));
        }
        let m = (d / 2) as u32;
        let kappa = frac(&-f.offsets()[d - 1].clone());
        Self::new(
            m,
            Rational::from(f.weight() + rat(1, 2)),
            kappa,
            f.components().to_vec(),
            f.cusp_flag(),
        )
    }

    /// `D_{-conj(tau)}^s`, which scales the `G_mu` term at exponent `D` by `D^s`.
    pub fn conj_derivative(&self, s: u32) -> Self {
        SkewThetaForm { g: self.g.derivative(s), ..self.clone() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        SkewThetaForm { g: self.g.scale_rational(q), ..self.clone() }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.index == other.index && self.kappa == other.kappa && self.g.agrees_with(&other.g)
    }
}

/// Skew extended bracket of `f` (weight `k`) with a scalar form `g` (weight `l`).
pub fn ext_bracket_skew(f: &SkewThetaForm, g: &VVForm, nu: u32) -> Result<SkewThetaForm> {
    if nu == 0 {
        return Err(Error::ZeroOrder);
    }
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch("second argument must be scalar".into()));
    }
    f.backend().join(&g.backend())?;
    let k = f.weight();
    let l = g.weight();
    let gs = g.component(0);
    // The stored components are conjugates, so conj(g) enters unconjugated.
    let g_derivs: Vec<FourierSeries> = (0..=nu).map(|s| gs.diag_pow(s)).collect();
    let mut weights = Vec::new();
    for r in 0..=nu {
        let s = nu - r;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let w = gen_binomial(&(Rational::from(k + nu) - rat(3, 2)), s)
            * gen_binomial(&(Rational::from(l + nu) - 1), r)
            * sign;
        weights.push(w);
    }
    let mut components = Vec::with_capacity(f.components().len());
    for comp in f.components() {
        let mut acc: Option<FourierSeries> = None;
        for (r, w) in weights.iter().enumerate() {
            let term = comp.diag_pow(r as u32).mul(&g_derivs[nu as usize - r])?.scale_rational(w);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        components.push(acc.expect("nu >= 1"));
    }
    let kappa = frac(&Rational::from(&f.kappa - gs.offset()));
    let weight = Rational::from(k + l) + 2 * nu;
    SkewThetaForm::new(f.index, weight, kappa, components, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SkewThetaForm {
        let kappa = rat(1, 5);
        let comps = (1..=4)
            .map(|mu| {
                FourierSeries::from_rationals(
                    skew_component_offset(2, &kappa, mu),
                    5,
                    [(0, Rational::from(mu)), (3, rat(-2, mu))],
                )
                .unwrap()
            })
            .collect();
        SkewThetaForm::new(2, rat(9, 2), kappa, comps, false).unwrap()
    }

    #[test]
    fn coefficient_convention() {
        let f = sample();
        // mu = 1, stored exponent D = 1/8 - 1/5 mod 1 = 37/40 at index 0.
        let d = f.component(1).exponent(0);
        assert_eq!(d, rat(37, 40));
        let x = rat(1, 8) - d;
        assert_eq!(f.coefficient_at(&x, 1).unwrap().unwrap(), Coeff::Rational(Rational::from(1)));
        // r = -3 shares component 1; D = 157/40 is index 3.
        assert_eq!(f.coefficient_at(&rat(-14, 5), -3).unwrap().unwrap(), Coeff::Rational(Rational::from(-2)));
        // Positive discriminant side is empty.
        assert!(f.coefficient_at(&rat(6, 5), 1).unwrap().unwrap().is_zero());
    }

    #[test]
    fn view_matches_lookup() {
        let f = sample();
        let v = f.coefficient_view(3);
        assert!(!v.entries.is_empty());
        for (&(n, r), c) in &v.entries {
            assert_eq!(f.coefficient(n, r).unwrap(), *c);
        }
    }

    #[test]
    fn psi_sk_round_trip() {
        let f = sample();
        assert_eq!(SkewThetaForm::psi_sk_inv(&f.psi_sk()).unwrap(), f);
    }

    #[test]
    fn damping_rate_is_discriminant_over_m() {
        assert_eq!(damping_rate(2, &rat(1, 2), 3), rat(5, 2));
    }
}
