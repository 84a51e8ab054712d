//! Closed-form Petersson pairings against Poincare series and the adjoint
//! of the bracket map `f -> [f, g]_nu`.
//!
//! Exact inputs produce [`SymExpr`] values; float inputs produce complex
//! MPFR values. Every infinite sum is truncated where the stored
//! coefficients run out, and the result carries an envelope estimate of the
//! discarded tail.

pub mod theta;

use crate::error::{Error, Result};
use crate::number::{binomial, rpow, Backend, BigComplex, Coeff};
use crate::qseries::FourierSeries;
use crate::symbolic::SymExpr;
use crate::vvforms::{gamma_ratio, VVForm};
use rug::ops::Pow;
use rug::{Float, Rational};
use std::collections::BTreeMap;

/// Which closed form produced a value. `tag` is the short CLI name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaId {
    PoincareCoefficient,
    BracketPairing,
    BracketAdjoint,
    JacobiBracketPairing,
    JacobiAdjoint,
    SkewBracketPairing,
    SkewAdjoint,
}

impl FormulaId {
    pub fn tag(&self) -> &'static str {
        match self {
            FormulaId::PoincareCoefficient => "thm2",
            FormulaId::BracketPairing => "thm3",
            FormulaId::BracketAdjoint => "thm4",
            FormulaId::JacobiBracketPairing => "thm9",
            FormulaId::JacobiAdjoint => "prop2",
            FormulaId::SkewBracketPairing => "thm10",
            FormulaId::SkewAdjoint => "thm11",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PairingValue {
    Exact(SymExpr),
    Float(BigComplex),
}

impl PairingValue {
    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Rational => PairingValue::Exact(SymExpr::zero()),
            Backend::Float(p) => PairingValue::Float(BigComplex::zero(p)),
        }
    }

    pub fn from_coeff(c: &Coeff) -> Self {
        match c {
            Coeff::Rational(q) => PairingValue::Exact(SymExpr::rational(q.clone())),
            Coeff::Complex(z) => PairingValue::Float(z.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PairingValue::Exact(e) => e.is_zero(),
            PairingValue::Float(z) => z.is_zero(),
        }
    }

    pub fn as_exact(&self) -> Option<&SymExpr> {
        match self {
            PairingValue::Exact(e) => Some(e),
            PairingValue::Float(_) => None,
        }
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        match self {
            PairingValue::Exact(e) => BigComplex::from_parts(e.to_float(prec), Float::new(prec)),
            PairingValue::Float(z) => z.clone(),
        }
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        self.to_complex(128).to_c64()
    }

    fn float_prec(&self) -> Option<u32> {
        match self {
            PairingValue::Float(z) => Some(z.prec()),
            PairingValue::Exact(_) => None,
        }
    }

    pub fn add(&self, o: &PairingValue) -> PairingValue {
        match (self, o) {
            (PairingValue::Exact(a), PairingValue::Exact(b)) => PairingValue::Exact(a.add(b)),
            _ => {
                let p = self.float_prec().max(o.float_prec()).unwrap_or(128);
                PairingValue::Float(self.to_complex(p).add(&o.to_complex(p)))
            }
        }
    }

    pub fn mul(&self, o: &PairingValue) -> PairingValue {
        match (self, o) {
            (PairingValue::Exact(a), PairingValue::Exact(b)) => PairingValue::Exact(a.mul(b)),
            _ => {
                let p = self.float_prec().max(o.float_prec()).unwrap_or(128);
                PairingValue::Float(self.to_complex(p).mul(&o.to_complex(p)))
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> PairingValue {
        match self {
            PairingValue::Exact(a) => PairingValue::Exact(a.scale(q)),
            PairingValue::Float(z) => PairingValue::Float(z.mul_rational(q)),
        }
    }

    pub fn conj(&self) -> PairingValue {
        match self {
            PairingValue::Exact(a) => PairingValue::Exact(a.clone()),
            PairingValue::Float(z) => PairingValue::Float(z.conj()),
        }
    }
}

impl std::fmt::Display for PairingValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PairingValue::Exact(e) => write!(f, "{e}"),
            PairingValue::Float(z) => {
                let c = z.to_c64();
                write!(f, "{:e}{:+e}i", c.re, c.im)
            }
        }
    }
}

/// `base^e` in the given backend; exact when the backend is rational.
pub(crate) fn power_value(base: &Rational, e: &Rational, backend: Backend) -> Result<PairingValue> {
    match backend {
        Backend::Rational => Ok(PairingValue::Exact(SymExpr::power(base, e)?)),
        Backend::Float(p) => {
            let b = Float::with_val(p, base);
            let v = b.pow(Float::with_val(p, e));
            Ok(PairingValue::Float(BigComplex::from_parts(v, Float::new(p))))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingResult {
    pub value: PairingValue,
    /// Largest summation index included in every inner sum.
    pub truncation_n: i64,
    /// Envelope estimate of the absolute size of the discarded tail.
    pub tail_bound: Option<f64>,
    pub formula: FormulaId,
}

/// Crude coefficient growth exponent: `w/2` for cusp forms, `max(w - 1, w/2)` otherwise.
pub fn growth_exponent(weight: &Rational, cusp: bool) -> f64 {
    let w = weight.to_f64();
    if cusp {
        w / 2.0
    } else {
        (w - 1.0).max(w / 2.0)
    }
}

/// Smallest `C` with `|c(e)| <= C e^alpha` over the stored positive exponents.
pub fn envelope(series: &FourierSeries, alpha: f64) -> f64 {
    series
        .terms()
        .filter_map(|(n, c)| {
            let e = series.exponent(n).to_f64();
            (e > 0.0).then(|| c.abs_f64() / e.powf(alpha))
        })
        .fold(0.0, f64::max)
}

/// Upper bound for `sum_{y = y0, y0 + 1, ...} y^beta`; infinite unless `beta < -1`.
pub fn power_tail(y0: f64, beta: f64) -> f64 {
    if beta >= -1.0 || y0 <= 0.0 {
        return f64::INFINITY;
    }
    y0.powf(beta) + y0.powf(beta + 1.0) / (-beta - 1.0)
}

fn check_weight_above_two(k: &Rational, name: &str) -> Result<()> {
    if *k <= 2 {
        return Err(Error::InvalidArgument(format!("{name} = {k} must exceed 2")));
    }
    Ok(())
}

fn conj_coeff_value(c: &Coeff) -> PairingValue {
    PairingValue::from_coeff(&c.conj())
}

/// `conj(b) * Gamma(k - 1) / (4 pi x)^(k - 1)` with `x = s + kappa`; zero when `x = 0`.
fn poincare_factor(b: &Coeff, k: &Rational, x: &Rational) -> Result<PairingValue> {
    if x.cmp0().is_eq() || b.is_zero() {
        return Ok(PairingValue::zero(b.backend()));
    }
    let e = Rational::from(k - 1);
    let sym = SymExpr::gamma(&e)?
        .mul(&SymExpr::four_pi_pow(&Rational::from(-&e)))
        .mul(&SymExpr::power(x, &Rational::from(-&e))?);
    Ok(conj_coeff_value(b).mul(&PairingValue::Exact(sym)))
}

/// Pairing of the Poincare series of weight `k` and index `(s, u)` with a cusp form `g`.
pub fn poincare_pairing_coeff(g: &VVForm, k: &Rational, s: i64, u: usize) -> Result<PairingResult> {
    check_weight_above_two(k, "k")?;
    if u >= g.dim() {
        return Err(Error::InvalidArgument(format!("component {u} out of range for dimension {}", g.dim())));
    }
    if s < 0 {
        return Err(Error::InvalidArgument(format!("s = {s} must be non-negative")));
    }
    if !g.is_cusp() {
        return Err(Error::NotCuspidal("g has a nonzero constant term".into()));
    }
    let comp = g.component(u);
    let b = comp.coeff(s).ok_or_else(|| {
        Error::InsufficientPrecision(format!("index {s} exceeds precision {}", comp.precision()))
    })?;
    let value = poincare_factor(&b, k, &comp.exponent(s))?;
    Ok(PairingResult { value, truncation_n: s, tail_bound: Some(0.0), formula: FormulaId::PoincareCoefficient })
}

/// The same pairing for a computed adjoint, whose coefficients are already values.
pub fn poincare_pairing_adjoint(a: &AdjointForm, k: &Rational, s: i64, u: usize) -> Result<PairingResult> {
    check_weight_above_two(k, "k")?;
    if u >= a.offsets.len() {
        return Err(Error::InvalidArgument(format!("component {u} out of range")));
    }
    if s > a.max_index {
        return Err(Error::InsufficientPrecision(format!("index {s} exceeds {}", a.max_index)));
    }
    let x = Rational::from(&a.offsets[u] + s);
    let value = match a.components[u].get(&s) {
        None => PairingValue::Exact(SymExpr::zero()),
        Some(_) if x.cmp0().is_eq() => PairingValue::Exact(SymExpr::zero()),
        Some(c) => {
            let e = Rational::from(k - 1);
            let sym = SymExpr::gamma(&e)?
                .mul(&SymExpr::four_pi_pow(&Rational::from(-&e)))
                .mul(&SymExpr::power(&x, &Rational::from(-&e))?);
            c.conj().mul(&PairingValue::Exact(sym))
        }
    };
    Ok(PairingResult { value, truncation_n: s, tail_bound: Some(a.tail_bound), formula: FormulaId::PoincareCoefficient })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketPairingParams {
    pub k1: Rational,
    pub k2: Rational,
    pub nu: u32,
    /// Poincare index `s >= 0`.
    pub s: i64,
    /// Component of the Poincare series, 0-based in the right tensor factor.
    pub r: usize,
    /// Optional cap on the inner summation index.
    pub max_n: Option<i64>,
}

/// `Gamma(k1 + nu) Gamma(k2 + nu) / (Gamma(k1 + nu - u) Gamma(k2 + u))`.
pub(crate) fn pairing_gamma_ratio(k1: &Rational, k2: &Rational, nu: u32, u: u32) -> Result<Rational> {
    Ok(gamma_ratio(k1, nu, nu - u)? * gamma_ratio(k2, nu, u)?)
}

/// `Gamma(K - 1) / (4 pi)^(K - 1)` for total weight `K`.
pub(crate) fn pairing_prefactor(total_weight: &Rational) -> Result<SymExpr> {
    let e = Rational::from(total_weight - 1);
    Ok(SymExpr::gamma(&e)?.mul(&SymExpr::four_pi_pow(&Rational::from(-&e))))
}

/// Pairing of a cusp form `f` on the tensor product with `[g, P]_nu`.
pub fn bracket_pairing(f: &VVForm, g: &VVForm, p: &BracketPairingParams) -> Result<PairingResult> {
    check_weight_above_two(&p.k1, "k1")?;
    check_weight_above_two(&p.k2, "k2")?;
    bracket_pairing_core(f, g, p)
}

/// Same as [`bracket_pairing`] without the `k > 2` guard, for half-integral
/// theta-decomposition weights.
pub(crate) fn bracket_pairing_core(f: &VVForm, g: &VVForm, p: &BracketPairingParams) -> Result<PairingResult> {
    if p.nu == 0 {
        return Err(Error::ZeroOrder);
    }
    if p.s < 0 {
        return Err(Error::InvalidArgument(format!("s = {} must be non-negative", p.s)));
    }
    let backend = f.backend().join(&g.backend())?;
    let t = f.meta().tensor().ok_or_else(|| Error::NotTensor("f needs tensor factors".into()))?;
    if t.left.as_slice() != g.offsets() {
        return Err(Error::OffsetMismatch("left tensor factor of f differs from the offsets of g".into()));
    }
    if p.r >= t.right.len() {
        return Err(Error::InvalidArgument(format!("r = {} out of range for {}", p.r, t.right.len())));
    }
    if *g.weight() != p.k1 {
        return Err(Error::WeightMismatch(format!("g has weight {} but k1 = {}", g.weight(), p.k1)));
    }
    let total = Rational::from(&p.k1 + &p.k2) + 2 * p.nu;
    if *f.weight() != total {
        return Err(Error::WeightMismatch(format!("f has weight {} but k1 + k2 + 2 nu = {total}", f.weight())));
    }
    if !f.is_cusp() {
        return Err(Error::NotCuspidal("f has a nonzero constant term".into()));
    }
    let d2 = t.right.len();
    let nu = p.nu;
    let e = Rational::from(&total - 1);
    let neg_e = Rational::from(-&e);
    let xs = Rational::from(&t.right[p.r] + p.s);
    let weights: Vec<Rational> = (0..=nu)
        .map(|u| {
            Ok(rpow(&Rational::from(-&xs), u as i64)
                * Rational::from(binomial(nu, u))
                * pairing_gamma_ratio(&p.k1, &p.k2, nu, u)?)
        })
        .collect::<Result<_>>()?;
    let alpha_a = growth_exponent(&total, true);
    let alpha_b = growth_exponent(&p.k1, g.is_cusp());
    let mut acc = PairingValue::zero(backend);
    let mut truncation = i64::MAX;
    let mut tail = 0.0;
    for j in 0..g.dim() {
        let fa = f.component(j * d2 + p.r);
        let gb = g.component(j);
        let kap1 = &g.offsets()[j];
        let shift = Rational::from(&xs + kap1);
        let a_top = Rational::from(fa.exponent(fa.precision()) - &shift);
        let mut n_max = gb.precision().min(crate::number::floor_i64(&a_top));
        if let Some(cap) = p.max_n {
            n_max = n_max.min(cap);
        }
        truncation = truncation.min(n_max);
        for (n, b) in gb.terms() {
            if n > n_max {
                break;
            }
            let y = gb.exponent(n);
            let x = Rational::from(&y + &xs);
            if x.cmp0().is_eq() {
                continue;
            }
            let a = fa.coeff_at_exponent(&x)?.expect("within precision by construction");
            if a.is_zero() {
                continue;
            }
            let mut poly = Rational::new();
            for (u, w) in weights.iter().enumerate() {
                poly += Rational::from(w * &rpow(&y, (nu - u as u32) as i64));
            }
            if poly.cmp0().is_eq() {
                continue;
            }
            let ab = PairingValue::from_coeff(&a.mul(&b.conj())).scale(&poly);
            acc = acc.add(&ab.mul(&power_value(&x, &neg_e, backend)?));
        }
        let ca = envelope(fa, alpha_a);
        let cb = envelope(gb, alpha_b);
        if ca > 0.0 && cb > 0.0 {
            let y0 = (n_max + 1) as f64 + kap1.to_f64();
            for (u, w) in weights.iter().enumerate() {
                let beta = (nu - u as u32) as f64 + alpha_a + alpha_b - e.to_f64();
                tail += w.to_f64().abs() * ca * cb * power_tail(y0, beta);
            }
        }
    }
    let prefactor = pairing_prefactor(&total)?;
    let value = acc.mul(&PairingValue::Exact(prefactor.clone()));
    let tail_bound = Some(tail * prefactor.to_f64().abs());
    Ok(PairingResult { value, truncation_n: truncation, tail_bound, formula: FormulaId::BracketPairing })
}

/// Shape of an adjoint image.
#[derive(Clone, Debug, PartialEq)]
pub enum AdjointKind {
    Vector,
    /// Holomorphic Jacobi form, components in theta-decomposition order.
    Jacobi { index: u32, kappa: Rational },
    /// Skew-holomorphic Jacobi form, components are the stored conjugates.
    Skew { index: u32, kappa: Rational },
}

/// Coefficients of an adjoint image, `components[l][n]` at exponent `n + offsets[l]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointForm {
    pub kind: AdjointKind,
    pub weight: Rational,
    pub offsets: Vec<Rational>,
    pub components: Vec<BTreeMap<i64, PairingValue>>,
    pub max_index: i64,
    pub tail_bound: f64,
    pub formula: FormulaId,
}

impl AdjointForm {
    pub fn coefficient(&self, l: usize, n: i64) -> PairingValue {
        self.components[l].get(&n).cloned().unwrap_or(PairingValue::Exact(SymExpr::zero()))
    }

    pub fn scale_exact(&self, c: &SymExpr) -> AdjointForm {
        let v = PairingValue::Exact(c.clone());
        let components = self
            .components
            .iter()
            .map(|m| m.iter().map(|(n, x)| (*n, x.mul(&v))).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        AdjointForm { components, ..self.clone() }
    }

    /// Writes every coefficient as `rational * common`, if a common factor exists.
    pub fn factor_common(&self) -> Option<(SymExpr, Vec<BTreeMap<i64, Rational>>)> {
        let mut common: Option<SymExpr> = None;
        let mut out = Vec::with_capacity(self.components.len());
        for comp in &self.components {
            let mut m = BTreeMap::new();
            for (n, v) in comp {
                let e = v.as_exact()?;
                if e.is_zero() {
                    continue;
                }
                let base = match &common {
                    Some(c) => c.clone(),
                    None => {
                        let (_, mono) = e.single_term()?;
                        let c = SymExpr::term(Rational::from(1), mono.clone());
                        common = Some(c.clone());
                        c
                    }
                };
                let q = e.ratio(&base)?.as_rational()?;
                m.insert(*n, q);
            }
            out.push(m);
        }
        Some((common.unwrap_or_else(SymExpr::one), out))
    }

    /// Converts to a stored form: exact up to the returned common factor when
    /// possible, otherwise complex floats at `prec` bits.
    pub fn to_vvform(&self, prec: u32) -> Result<(VVForm, Option<SymExpr>)> {
        let meta = crate::vvforms::MultiplierData::new(self.weight.clone(), self.offsets.clone())?;
        if let Some((common, comps)) = self.factor_common() {
            let series = comps
                .into_iter()
                .zip(&self.offsets)
                .map(|(m, o)| FourierSeries::from_rationals(o.clone(), self.max_index, m))
                .collect::<Result<Vec<_>>>()?;
            let cusp = series.iter().all(|s| !(s.offset().cmp0().is_eq() && s.coeff(0).is_some_and(|c| !c.is_zero())));
            return Ok((VVForm::new(meta, series, cusp)?, Some(common)));
        }
        let series = self
            .components
            .iter()
            .zip(&self.offsets)
            .map(|(m, o)| {
                FourierSeries::new(
                    o.clone(),
                    self.max_index,
                    Backend::Float(prec),
                    m.iter().map(|(n, v)| (*n, Coeff::Complex(v.to_complex(prec)))),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let cusp = series.iter().all(|s| !(s.offset().cmp0().is_eq() && s.coeff(0).is_some_and(|c| !c.is_zero())));
        Ok((VVForm::new(meta, series, cusp)?, None))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdjointParams {
    pub k1: Rational,
    pub k2: Rational,
    pub nu: u32,
    /// Coefficients `c_l(n + kappa_{2,l})` are produced for `0 <= n <= max_index`.
    pub max_index: i64,
}

/// Coefficients of the adjoint of `f -> [f, g]_nu` applied to a cusp form `h`
/// on `rho1 (x) rho2`, where `g` lives on `rho1`.
pub fn adjoint_coeffs(h: &VVForm, g: &VVForm, p: &AdjointParams) -> Result<AdjointForm> {
    check_weight_above_two(&p.k1, "k1")?;
    check_weight_above_two(&p.k2, "k2")?;
    adjoint_coeffs_core(h, g, p)
}

pub(crate) fn adjoint_coeffs_core(h: &VVForm, g: &VVForm, p: &AdjointParams) -> Result<AdjointForm> {
    if p.nu == 0 {
        return Err(Error::ZeroOrder);
    }
    let backend = h.backend().join(&g.backend())?;
    let t = h.meta().tensor().ok_or_else(|| Error::NotTensor("h needs tensor factors".into()))?;
    if t.left.as_slice() != g.offsets() {
        return Err(Error::OffsetMismatch("left tensor factor of h differs from the offsets of g".into()));
    }
    if *g.weight() != p.k1 {
        return Err(Error::WeightMismatch(format!("g has weight {} but k1 = {}", g.weight(), p.k1)));
    }
    let nu = p.nu;
    let total = Rational::from(&p.k1 + &p.k2) + 2 * nu;
    if *h.weight() != total {
        return Err(Error::WeightMismatch(format!("h has weight {} but k1 + k2 + 2 nu = {total}", h.weight())));
    }
    if !h.is_cusp() {
        return Err(Error::NotCuspidal("h has a nonzero constant term".into()));
    }
    let d2 = t.right.len();
    let big_e = Rational::from(&total - 1);
    let neg_e = Rational::from(-&big_e);
    let k2m1 = Rational::from(&p.k2 - 1);
    let sign = if nu % 2 == 0 { 1 } else { -1 };
    // (-1)^nu Gamma(K - 1) (4 pi)^(k2 - 1 - (K - 1)) / Gamma(k2 - 1); x^(k2 - 1) is added per coefficient.
    let head = SymExpr::gamma(&big_e)?
        .mul(&SymExpr::four_pi_pow(&Rational::from(&k2m1 - &big_e)))
        .mul(&SymExpr::gamma(&k2m1)?.inv().expect("single term"))
        .scale(&Rational::from(sign));
    let mut components = Vec::with_capacity(d2);
    for l in 0..d2 {
        let kap2 = &t.right[l];
        let mut comp = BTreeMap::new();
        for n in 0..=p.max_index {
            let x = Rational::from(kap2 + n);
            if x.cmp0().is_eq() {
                continue;
            }
            let mut acc = PairingValue::zero(backend);
            for j in 0..g.dim() {
                let a_series = h.component(j * d2 + l);
                let b_series = g.component(j);
                let kap1 = &g.offsets()[j];
                for (tt, b) in b_series.terms() {
                    let ty = Rational::from(kap1 + tt);
                    let arg = Rational::from(&x + &ty);
                    let Some(a) = a_series.coeff_at_exponent(&arg)? else {
                        break;
                    };
                    if a.is_zero() {
                        continue;
                    }
                    let mut poly = Rational::new();
                    for u in 0..=nu {
                        poly += rpow(&Rational::from(-&x), u as i64)
                            * Rational::from(binomial(nu, u))
                            * pairing_gamma_ratio(&p.k1, &p.k2, nu, u)?
                            * rpow(&ty, (nu - u) as i64);
                    }
                    if poly.cmp0().is_eq() {
                        continue;
                    }
                    let term = PairingValue::from_coeff(&a.mul(&b.conj()))
                        .scale(&poly)
                        .mul(&power_value(&arg, &neg_e, backend)?);
                    acc = acc.add(&term);
                }
            }
            if acc.is_zero() {
                continue;
            }
            let lead = SymExpr::power(&x, &k2m1)?.mul(&head);
            let v = acc.mul(&PairingValue::Exact(lead));
            if !v.is_zero() {
                comp.insert(n, v);
            }
        }
        components.push(comp);
    }
    let tail_bound = adjoint_tail(h, g, p)?;
    Ok(AdjointForm {
        kind: AdjointKind::Vector,
        weight: p.k2.clone(),
        offsets: t.right.clone(),
        components,
        max_index: p.max_index,
        tail_bound,
        formula: FormulaId::BracketAdjoint,
    })
}

/// Envelope tail of the inner sums at the largest requested index, scaled to a coefficient.
fn adjoint_tail(h: &VVForm, g: &VVForm, p: &AdjointParams) -> Result<f64> {
    let d2 = h.meta().tensor().map(|t| t.right.len()).unwrap_or(1);
    let mut worst: f64 = 0.0;
    for l in 0..d2 {
        let bp = BracketPairingParams {
            k1: p.k1.clone(),
            k2: p.k2.clone(),
            nu: p.nu,
            s: p.max_index,
            r: l,
            max_n: None,
        };
        if let Ok(r) = bracket_pairing_core(h, g, &bp) {
            let x = Rational::from(&h.meta().tensor().unwrap().right[l] + p.max_index).to_f64();
            let k2 = p.k2.to_f64();
            let scale = (4.0 * std::f64::consts::PI * x).powf(k2 - 1.0) / gamma_f64(k2 - 1.0);
            worst = worst.max(r.tail_bound.unwrap_or(f64::INFINITY) * scale);
        }
    }
    Ok(worst)
}

pub(crate) fn gamma_f64(x: f64) -> f64 {
    Float::with_val(64, x).gamma().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::number::rat;
    use crate::vvforms::MultiplierData;

    #[test]
    fn poincare_coefficient_against_delta() {
        let d = fixtures::delta(5);
        let r = poincare_pairing_coeff(&d, &rat(12, 1), 2, 0).unwrap();
        // tau(2) * 10! / (8 pi)^11
        let want = -24.0 * 3_628_800.0 / (8.0 * std::f64::consts::PI).powi(11);
        let got = r.value.as_exact().unwrap().to_f64();
        assert!((got - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn poincare_coefficient_errors() {
        let d = fixtures::delta(5);
        assert!(poincare_pairing_coeff(&d, &rat(2, 1), 1, 0).is_err());
        assert!(poincare_pairing_coeff(&d, &rat(12, 1), 1, 1).is_err());
        assert!(matches!(poincare_pairing_coeff(&d, &rat(12, 1), 9, 0), Err(Error::InsufficientPrecision(_))));
        assert!(matches!(poincare_pairing_coeff(&fixtures::e4(5), &rat(4, 1), 1, 0), Err(Error::NotCuspidal(_))));
    }

    #[test]
    fn poincare_coefficient_vanishes_at_zero_exponent() {
        let s = FourierSeries::from_rationals(Rational::new(), 3, [(1, Rational::from(1))]).unwrap();
        let g = VVForm::scalar(rat(12, 1), s, true).unwrap();
        assert!(poincare_pairing_coeff(&g, &rat(12, 1), 0, 0).unwrap().value.is_zero());
    }

    #[test]
    fn bracket_pairing_rejects_mismatched_tensor() {
        let f = fixtures::e6_delta(6);
        let f = f.clone().with_tensor_factors(vec![Rational::new()], vec![Rational::new()]).unwrap();
        let g = fixtures::e4(6);
        let p = BracketPairingParams { k1: rat(4, 1), k2: rat(12, 1), nu: 2, s: 1, r: 0, max_n: None };
        // Weight 18 != 4 + 12 + 4.
        assert!(matches!(bracket_pairing(&f, &g, &p), Err(Error::WeightMismatch(_))));
        let meta = MultiplierData::tensor_of(rat(18, 1), vec![rat(1, 2)], vec![rat(1, 2)]).unwrap();
        let bad = VVForm::new(meta, vec![FourierSeries::zero(Rational::new(), 3, Backend::Rational).unwrap()], true).unwrap();
        let p = BracketPairingParams { k1: rat(4, 1), k2: rat(12, 1), nu: 1, s: 1, r: 0, max_n: None };
        assert!(matches!(bracket_pairing(&bad, &g, &p), Err(Error::OffsetMismatch(_))));
    }

    #[test]
    fn tail_helpers() {
        assert!(power_tail(10.0, -0.5).is_infinite());
        let t = power_tail(10.0, -3.0);
        assert!(t > 0.0055 && t < 0.0061);
    }
}
