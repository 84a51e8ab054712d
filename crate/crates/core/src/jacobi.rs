//! Holomorphic Jacobi forms of index `m` stored through their theta
//! decomposition `phi = sum_mu f_mu(tau) theta_{m,mu}(tau, z)`.
//!
//! Component `mu` (1-based, `1 <= mu <= 2m`) has offset `(kappa - mu^2/4m) mod 1`
//! and the coefficient `c(n + kappa, r)` sits in component `mu = r mod 2m` at
//! exponent `n + kappa - r^2/4m`.

use crate::error::{Error, Result};
use crate::number::{floor_i64, frac, in_unit_interval, rat, rpow, Backend, Coeff};
use crate::qseries::FourierSeries;
use crate::vvforms::{gen_binomial, MultiplierData, VVForm};
use rug::Rational;
use std::collections::BTreeMap;

/// `(kappa - mu^2 / 4m) mod 1`.
pub fn component_offset(m: u32, kappa: &Rational, mu: i64) -> Rational {
    frac(&(Rational::from(kappa) - rat(mu * mu, 4 * m as i64)))
}

/// Representative of `r` modulo `2m` in `1..=2m`.
pub fn mu_of(r: i64, m: u32) -> i64 {
    let two_m = 2 * m as i64;
    (r - 1).rem_euclid(two_m) + 1
}

/// Smallest `|r|` with `r = mu mod 2m`.
pub fn min_abs_rep(mu: i64, m: u32) -> i64 {
    let two_m = 2 * m as i64;
    let a = mu.rem_euclid(two_m);
    a.min(two_m - a)
}

/// Eigenvalue `4m e - r^2` of the heat operator on `q^e zeta^r`.
pub fn heat_eigenvalue(m: u32, e: &Rational, r: i64) -> Rational {
    Rational::from(e * (4 * m)) - r * r
}

/// Largest `n` such that every `c(n' + kappa, r)` with `n' <= n` is determined.
pub(crate) fn jacobi_precision(m: u32, kappa: &Rational, components: &[FourierSeries]) -> i64 {
    components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mu = i as i64 + 1;
            let r = min_abs_rep(mu, m);
            let top = Rational::from(c.exponent(c.precision()) + rat(r * r, 4 * m as i64)) - kappa;
            floor_i64(&top)
        })
        .min()
        .unwrap_or(0)
}

/// Coefficients `c(n + kappa, r)` for all `n <= precision`, nonzero entries only.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiCoefficientView {
    pub index: u32,
    pub kappa: Rational,
    pub precision: i64,
    pub entries: BTreeMap<(i64, i64), Coeff>,
    backend: Backend,
}

impl JacobiCoefficientView {
    /// `c(n + kappa, r)`, or `None` past the precision.
    pub fn get(&self, n: i64, r: i64) -> Option<Coeff> {
        if n > self.precision {
            return None;
        }
        Some(self.entries.get(&(n, r)).cloned().unwrap_or_else(|| Coeff::zero(self.backend)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaComponentForm {
    index: u32,
    weight: Rational,
    kappa: Rational,
    components: Vec<FourierSeries>,
    cusp: bool,
}

impl ThetaComponentForm {
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
        let backend = components[0].backend();
        for (i, c) in components.iter().enumerate() {
            let mu = i as i64 + 1;
            let want = component_offset(index, &kappa, mu);
            if *c.offset() != want {
                return Err(Error::OffsetMismatch(format!(
                    "component {mu} has offset {} but (m, kappa) = ({index}, {kappa}) gives {want}",
                    c.offset()
                )));
            }
            if !c.backend().same_kind(&backend) {
                return Err(Error::BackendMismatch(format!("component {mu}")));
            }
            if c.valuation().is_some_and(|v| v < 0) {
                return Err(Error::InvalidArgument(format!("component {mu} has a negative index")));
            }
        }
        let form = ThetaComponentForm { index, weight, kappa, components, cusp };
        if cusp && !form.is_cusp() {
            return Err(Error::CuspFlagViolated("a theta component has a q^0 term".into()));
        }
        Ok(form)
    }

    /// The theta series `theta_{m,mu}` itself: component `mu` equal to 1.
    pub fn theta(m: u32, mu: i64, precision: i64) -> Result<Self> {
        if !(1..=2 * m as i64).contains(&mu) {
            return Err(Error::InvalidArgument(format!("mu={mu} outside 1..={}", 2 * m)));
        }
        let kappa = frac(&rat(mu * mu, 4 * m as i64));
        let components = (1..=2 * m as i64)
            .map(|nu| {
                let terms = if nu == mu { vec![(0, Rational::from(1))] } else { vec![] };
                FourierSeries::from_rationals(component_offset(m, &kappa, nu), precision, terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, rat(1, 2), kappa, components, false)
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

    pub fn components(&self) -> &[FourierSeries] {
        &self.components
    }

    /// Component `mu`, 1-based.
    pub fn component(&self, mu: i64) -> &FourierSeries {
        &self.components[(mu - 1) as usize]
    }

    pub fn cusp_flag(&self) -> bool {
        self.cusp
    }

    pub fn backend(&self) -> Backend {
        self.components[0].backend()
    }

    pub fn is_cusp(&self) -> bool {
        self.components.iter().all(|c| {
            !(c.offset().cmp0().is_eq() && c.coeff(0).is_some_and(|a| !a.is_zero()))
        })
    }

    pub fn precision(&self) -> i64 {
        jacobi_precision(self.index, &self.kappa, &self.components)
    }

    /// `c(x, r)` at `x = n + kappa`; `Ok(None)` when `x - r^2/4m` is past the precision.
    pub fn coefficient_at(&self, x: &Rational, r: i64) -> Result<Option<Coeff>> {
        let e = Rational::from(x - rat(r * r, 4 * self.index as i64));
        if e.cmp0().is_lt() {
            if !crate::number::is_integer(&Rational::from(x - &self.kappa)) {
                return Err(Error::ExponentNotOnLattice(format!("{x} with kappa {}", self.kappa)));
            }
            return Ok(Some(Coeff::zero(self.backend())));
        }
        self.component(mu_of(r, self.index)).coeff_at_exponent(&e)
    }

    /// `c(n + kappa, r)`.
    pub fn coefficient(&self, n: i64, r: i64) -> Option<Coeff> {
        self.coefficient_at(&Rational::from(&self.kappa + n), r)
            .expect("n + kappa is on the lattice")
    }

    pub fn coefficient_view(&self) -> JacobiCoefficientView {
        let m = self.index;
        let four_m = 4 * m as i64;
        let precision = self.precision();
        let top = Rational::from(&self.kappa + precision);
        let mut entries = BTreeMap::new();
        for (i, comp) in self.components.iter().enumerate() {
            let mu = i as i64 + 1;
            for (j, c) in comp.terms() {
                let e = comp.exponent(j);
                let room = Rational::from(&top - &e) * four_m;
                if room.cmp0().is_lt() {
                    continue;
                }
                let r_max = floor_i64(&room).max(0);
                let r_max = (r_max as f64).sqrt() as i64 + 1;
                let mut r = -r_max - (2 * m as i64);
                r += (mu - r).rem_euclid(2 * m as i64);
                while r <= r_max {
                    let x = Rational::from(&e + rat(r * r, four_m));
                    if x <= top {
                        let n = floor_i64(&Rational::from(&x - &self.kappa));
                        entries.insert((n, r), c.clone());
                    }
                    r += 2 * m as i64;
                }
            }
        }
        JacobiCoefficientView { index: m, kappa: self.kappa.clone(), precision, entries, backend: self.backend() }
    }

    /// The theta decomposition as a vector-valued form of weight `k - 1/2`.
    pub fn psi(&self) -> VVForm {
        let meta = MultiplierData::new(
            Rational::from(&self.weight - rat(1, 2)),
            self.components.iter().map(|c| c.offset().clone()).collect(),
        )
        .expect("offsets validated on construction");
        VVForm::new(meta, self.components.clone(), self.cusp).expect("components validated on construction")
    }

    /// Inverse of [`psi`](Self::psi); index and `kappa` are read off the offsets.
    pub fn psi_inv(f: &VVForm) -> Result<Self> {
        let d = f.dim();
        if d % 2 == 1 {
            return Err(Error::DimensionMismatch(format!("dimension {d} is odd")));
        }
        let m = (d / 2) as u32;
        let kappa = f.offsets()[d - 1].clone();
        Self::new(
            m,
            Rational::from(f.weight() + rat(1, 2)),
            kappa,
            f.components().to_vec(),
            f.cusp_flag(),
        )
    }

    /// Applies the heat operator `p` times: `(4m e)^p` on each component term.
    pub fn heat_apply(&self, p: u32) -> Self {
        let scale = rpow(&Rational::from(4 * self.index), p as i64);
        let components = self.components.iter().map(|c| c.diag_pow(p).scale_rational(&scale)).collect();
        ThetaComponentForm { components, cusp: self.cusp || p > 0, ..self.clone() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let components = self.components.iter().map(|c| c.scale_rational(q)).collect();
        ThetaComponentForm { components, ..self.clone() }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.index == other.index
            && self.kappa == other.kappa
            && self.components.iter().zip(&other.components).all(|(a, b)| a.agrees_with(b))
    }
}

/// `c(x, r)` of `theta_{m,mu}` for exponents `x <= precision`.
pub fn theta_series(m: u32, mu: i64, precision: i64) -> Result<JacobiCoefficientView> {
    let mut view = ThetaComponentForm::theta(m, mu, precision + 1)?.coefficient_view();
    let bound = Rational::from(precision);
    let kappa = view.kappa.clone();
    view.entries.retain(|(n, _), _| Rational::from(&kappa + *n) <= bound);
    view.precision = floor_i64(&Rational::from(&bound - &kappa));
    Ok(view)
}

/// Heat-operator bracket of a Jacobi form `f` of weight `k` with a scalar
/// form `g` of weight `l`.
pub fn ext_bracket_hol(f: &ThetaComponentForm, g: &VVForm, nu: u32) -> Result<ThetaComponentForm> {
    if nu == 0 {
        return Err(Error::ZeroOrder);
    }
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch("second argument must be scalar".into()));
    }
    f.backend().join(&g.backend())?;
    let m = f.index;
    let four_m = Rational::from(4 * m);
    let k = f.weight();
    let l = g.weight();
    let gs = g.component(0);
    let mut weights = Vec::new();
    for r in 0..=nu {
        let s = nu - r;
        let w = gen_binomial(&(Rational::from(k + nu) - rat(3, 2)), s)
            * gen_binomial(&(Rational::from(l + nu) - 1), r)
            * rpow(&Rational::from(-&four_m), s as i64)
            * rpow(&four_m, r as i64);
        weights.push(w);
    }
    let g_derivs: Vec<FourierSeries> = (0..=nu).map(|s| gs.diag_pow(s)).collect();
    let mut components = Vec::with_capacity(f.components.len());
    for comp in &f.components {
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
    let kappa = frac(&Rational::from(&f.kappa + gs.offset()));
    let weight = Rational::from(k + l) + 2 * nu;
    ThetaComponentForm::new(m, weight, kappa, components, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_representatives() {
        assert_eq!(mu_of(0, 2), 4);
        assert_eq!(mu_of(-1, 2), 3);
        assert_eq!(mu_of(5, 2), 1);
        assert_eq!(min_abs_rep(3, 2), 1);
        assert_eq!(min_abs_rep(4, 2), 0);
    }

    #[test]
    fn theta_series_coefficients() {
        // theta_{1,1}: zeta^r q^{r^2/4} for odd r.
        let v = theta_series(1, 1, 10).unwrap();
        assert_eq!(v.kappa, rat(1, 4));
        let one = Coeff::Rational(Rational::from(1));
        for r in [-5i64, -3, -1, 1, 3, 5] {
            let n = (r * r - 1) / 4;
            assert_eq!(v.get(n, r).unwrap(), one, "r={r}");
        }
        assert!(v.get(2, 1).unwrap().is_zero());
        assert!(v.get(0, 2).unwrap().is_zero());
        assert_eq!(v.entries.len(), 6);
    }

    #[test]
    fn heat_eigenvalues() {
        assert_eq!(heat_eigenvalue(2, &rat(3, 2), 1), 11);
        assert_eq!(heat_eigenvalue(1, &rat(1, 4), 1), 0);
    }

    #[test]
    fn heat_operator_matches_eigenvalue_on_view() {
        let comps = (1..=4)
            .map(|mu| {
                let o = component_offset(2, &rat(1, 3), mu);
                FourierSeries::from_rationals(o, 4, [(0, Rational::from(mu)), (2, rat(1, mu))]).unwrap()
            })
            .collect();
        let f = ThetaComponentForm::new(2, rat(7, 1), rat(1, 3), comps, false).unwrap();
        let h = f.heat_apply(1);
        let vf = f.coefficient_view();
        let vh = h.coefficient_view();
        for (&(n, r), c) in &vf.entries {
            let x = Rational::from(&vf.kappa + n);
            let want = c.mul_rational(&heat_eigenvalue(2, &x, r));
            assert_eq!(vh.get(n, r).unwrap(), want);
        }
    }

    #[test]
    fn psi_round_trip() {
        let comps = (1..=2)
            .map(|mu| FourierSeries::from_rationals(component_offset(1, &rat(1, 2), mu), 3, [(1, Rational::from(mu))]).unwrap())
            .collect();
        let f = ThetaComponentForm::new(1, rat(5, 1), rat(1, 2), comps, false).unwrap();
        assert_eq!(ThetaComponentForm::psi_inv(&f.psi()).unwrap(), f);
        assert_eq!(*f.psi().weight(), rat(9, 2));
    }

    #[test]
    fn psi_inv_rejects_inconsistent_offsets() {
        let comps = vec![
            FourierSeries::zero(rat(1, 3), 2, Backend::Rational).unwrap(),
            FourierSeries::zero(Rational::new(), 2, Backend::Rational).unwrap(),
        ];
        let f = VVForm::new(MultiplierData::new(rat(3, 1), vec![rat(1, 3), Rational::new()]).unwrap(), comps, false).unwrap();
        assert!(matches!(ThetaComponentForm::psi_inv(&f), Err(Error::OffsetMismatch(_))));
    }
}
