//! Pairing and adjoint formulas for holomorphic and skew-holomorphic Jacobi
//! forms, each computed two ways.
//!
//! The canonical route pushes the forms through the theta decomposition and
//! applies the vector-valued formulas with the scalings measured for the
//! bracket identities. The as-printed route evaluates the stated
//! closed-form expressions verbatim from Jacobi coefficients. Reports list
//! every place the two disagree together with the ratio between them.

use super::{
    adjoint_coeffs_core, bracket_pairing_core, pairing_gamma_ratio, power_value, AdjointForm, AdjointKind,
    AdjointParams, BracketPairingParams, FormulaId, PairingResult, PairingValue,
};
use crate::error::{Error, Result};
use crate::jacobi::{component_offset, ThetaComponentForm};
use crate::number::{binomial, ceil_i64, floor_i64, frac, rat, rpow};
use crate::skewjacobi::{skew_component_offset, SkewThetaForm};
use crate::symbolic::SymExpr;
use crate::vvforms::VVForm;
use rug::{Integer, Rational};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Canonical,
    AsPrinted,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Canonical => "canonical",
            Mode::AsPrinted => "as-printed",
        }
    }
}

/// One place where the two modes disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeDifference {
    pub location: String,
    pub canonical: String,
    pub as_printed: String,
    /// `as_printed / canonical` when it is a single symbolic term.
    pub factor: Option<SymExpr>,
    pub numeric_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualPairing {
    pub canonical: PairingResult,
    pub as_printed: PairingResult,
    pub differences: Vec<ModeDifference>,
}

impl DualPairing {
    pub fn get(&self, mode: Mode) -> &PairingResult {
        match mode {
            Mode::Canonical => &self.canonical,
            Mode::AsPrinted => &self.as_printed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualAdjoint {
    pub canonical: AdjointForm,
    pub as_printed: AdjointForm,
    pub differences: Vec<ModeDifference>,
}

impl DualAdjoint {
    pub fn get(&self, mode: Mode) -> &AdjointForm {
        match mode {
            Mode::Canonical => &self.canonical,
            Mode::AsPrinted => &self.as_printed,
        }
    }
}

const FLOAT_AGREEMENT: f64 = 1e-25;

fn compare(location: String, canonical: &PairingValue, printed: &PairingValue) -> Option<ModeDifference> {
    let same = match (canonical, printed) {
        (PairingValue::Exact(a), PairingValue::Exact(b)) => a == b,
        _ => {
            let a = canonical.to_c64();
            let b = printed.to_c64();
            (a - b).norm() <= FLOAT_AGREEMENT * a.norm().max(b.norm())
        }
    };
    if same {
        return None;
    }
    let factor = match (canonical, printed) {
        (PairingValue::Exact(a), PairingValue::Exact(b)) if !a.is_zero() => b.ratio(a),
        _ => None,
    };
    let a = canonical.to_c64();
    let b = printed.to_c64();
    let numeric_ratio = (a.norm() > 0.0 && (b / a).im.abs() <= 1e-12 * (b / a).norm()).then(|| (b / a).re);
    Some(ModeDifference {
        location,
        canonical: canonical.to_string(),
        as_printed: printed.to_string(),
        factor,
        numeric_ratio,
    })
}

fn compare_adjoints(a: &AdjointForm, b: &AdjointForm) -> Vec<ModeDifference> {
    let mut out = Vec::new();
    for (l, (ca, cb)) in a.components.iter().zip(&b.components).enumerate() {
        let keys: std::collections::BTreeSet<i64> = ca.keys().chain(cb.keys()).copied().collect();
        for n in keys {
            let va = a.coefficient(l, n);
            let vb = b.coefficient(l, n);
            if let Some(d) = compare(format!("component {} index {n}", l + 1), &va, &vb) {
                out.push(d);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiPairingParams {
    pub k1: Rational,
    pub k2: Rational,
    pub nu: u32,
    pub s: i64,
}

fn factorial(n: u32) -> Rational {
    Rational::from(Integer::from(Integer::factorial(n)))
}

fn check_common(m1: u32, m2: u32, k1: &Rational, k2: &Rational, nu: u32, s: i64) -> Result<()> {
    if m1 != m2 {
        return Err(Error::InvalidArgument(format!("index mismatch: {m1} vs {m2}")));
    }
    if nu == 0 {
        return Err(Error::ZeroOrder);
    }
    if *k1 <= 2 || *k2 <= 2 {
        return Err(Error::InvalidArgument(format!("weights {k1}, {k2} must exceed 2")));
    }
    if s < 0 {
        return Err(Error::InvalidArgument(format!("s = {s} must be non-negative")));
    }
    Ok(())
}

fn check_weights(f_weight: &Rational, g_weight: &Rational, k1: &Rational, k2: &Rational, nu: u32) -> Result<Rational> {
    let total = Rational::from(k1 + k2) + 2 * nu;
    if *f_weight != total {
        return Err(Error::WeightMismatch(format!("f has weight {f_weight} but k1 + k2 + 2 nu = {total}")));
    }
    if g_weight != k1 {
        return Err(Error::WeightMismatch(format!("g has weight {g_weight} but k1 = {k1}")));
    }
    Ok(total)
}

/// `(-(s + kappa2))^u C(nu, u) Gamma(k1' + nu) Gamma(k2 + nu) / (Gamma(k1' + nu - u) Gamma(k2 + u))`.
fn printed_weights(k1_shifted: &Rational, k2: &Rational, nu: u32, xs: &Rational) -> Result<Vec<Rational>> {
    (0..=nu)
        .map(|u| {
            Ok(rpow(&Rational::from(-xs), u as i64)
                * Rational::from(binomial(nu, u))
                * pairing_gamma_ratio(k1_shifted, k2, nu, u)?)
        })
        .collect()
}

fn scaled(r: PairingResult, c: &SymExpr, formula: FormulaId) -> PairingResult {
    let mag = c.to_f64().abs();
    PairingResult {
        value: r.value.mul(&PairingValue::Exact(c.clone())),
        truncation_n: r.truncation_n,
        tail_bound: r.tail_bound.map(|t| t * mag),
        formula,
    }
}

fn inv_sqrt_2m(m: u32) -> SymExpr {
    SymExpr::power(&Rational::from(2 * m), &rat(-1, 2)).expect("positive base")
}

/// Pairing of a Jacobi cusp form `f` with the heat bracket of `g` and a Poincare series.
pub fn jacobi_bracket_pairing(
    f: &ThetaComponentForm,
    g: &ThetaComponentForm,
    p: &JacobiPairingParams,
) -> Result<DualPairing> {
    check_common(f.index(), g.index(), &p.k1, &p.k2, p.nu, p.s)?;
    let total = check_weights(f.weight(), g.weight(), &p.k1, &p.k2, p.nu)?;
    if !f.is_cusp() {
        return Err(Error::NotCuspidal("f".into()));
    }
    let m = f.index();
    let kappa2 = frac(&Rational::from(f.kappa() - g.kappa()));

    // Canonical: (4m)^nu / (nu! sqrt(2m)) times the vector-valued pairing of the decompositions.
    let gg = g.psi();
    let ff = f.psi().with_tensor_factors(gg.offsets().to_vec(), vec![kappa2.clone()])?;
    let vv = bracket_pairing_core(
        &ff,
        &gg,
        &BracketPairingParams {
            k1: Rational::from(&p.k1 - rat(1, 2)),
            k2: p.k2.clone(),
            nu: p.nu,
            s: p.s,
            r: 0,
            max_n: None,
        },
    )?;
    let c = SymExpr::rational(rpow(&Rational::from(4 * m), p.nu as i64) / factorial(p.nu)).mul(&inv_sqrt_2m(m));
    let canonical = scaled(vv, &c, FormulaId::JacobiBracketPairing);

    // As printed, from Jacobi coefficients.
    let backend = f.backend().join(&g.backend())?;
    let four_m = 4 * m as i64;
    let k1s = Rational::from(&p.k1 - rat(1, 2));
    let xs = Rational::from(&kappa2 + p.s);
    let weights = printed_weights(&k1s, &p.k2, p.nu, &xs)?;
    let e = Rational::from(&total - 1);
    let neg_e = Rational::from(-&e);
    let mut acc = PairingValue::zero(backend);
    let mut truncation = i64::MAX;
    for j in 1..=2 * m as i64 {
        let jj = rat(j * j, four_m);
        let mut n = ceil_i64(&Rational::from(&jj - g.kappa()));
        loop {
            let xg = Rational::from(g.kappa() + n);
            let xf = Rational::from(&xg + &xs);
            let (Some(cg), Some(cf)) = (g.coefficient_at(&xg, j)?, f.coefficient_at(&xf, j)?) else {
                truncation = truncation.min(n - 1);
                break;
            };
            n += 1;
            let base = Rational::from(&xf - &jj);
            if cg.is_zero() || cf.is_zero() || base.cmp0().is_eq() {
                continue;
            }
            let y = Rational::from(&xg - &jj);
            let mut poly = Rational::new();
            for (u, w) in weights.iter().enumerate() {
                poly += Rational::from(w * &rpow(&y, (p.nu - u as u32) as i64));
            }
            let term = PairingValue::from_coeff(&cf.mul(&cg.conj()))
                .scale(&poly)
                .mul(&power_value(&base, &neg_e, backend)?);
            acc = acc.add(&term);
        }
    }
    let head = SymExpr::rational(rpow(&Rational::from(4 * m), p.nu as i64) / factorial(p.nu))
        .mul(&SymExpr::gamma(&Rational::from(&total - rat(3, 2)))?)
        .mul(&inv_sqrt_2m(m))
        .mul(&SymExpr::four_pi_pow(&neg_e));
    let as_printed = PairingResult {
        value: acc.mul(&PairingValue::Exact(head)),
        truncation_n: truncation,
        tail_bound: None,
        formula: FormulaId::JacobiBracketPairing,
    };
    let differences = compare("value".into(), &canonical.value, &as_printed.value).into_iter().collect();
    Ok(DualPairing { canonical, as_printed, differences })
}

/// Pairing of a skew-holomorphic cusp form `f` with the skew bracket of `g` and a Poincare series.
pub fn skew_bracket_pairing(f: &SkewThetaForm, g: &SkewThetaForm, p: &JacobiPairingParams) -> Result<DualPairing> {
    check_common(f.index(), g.index(), &p.k1, &p.k2, p.nu, p.s)?;
    let total = check_weights(f.weight(), g.weight(), &p.k1, &p.k2, p.nu)?;
    if !f.is_cusp() {
        return Err(Error::NotCuspidal("f".into()));
    }
    let m = f.index();
    let kappa2 = frac(&Rational::from(g.kappa() - f.kappa()));

    // Canonical: conj of (-1)^nu / (nu! sqrt(2m)) times the vector-valued pairing.
    let gg = g.psi_sk();
    let ff = f.psi_sk().with_tensor_factors(gg.offsets().to_vec(), vec![kappa2.clone()])?;
    let vv = bracket_pairing_core(
        &ff,
        &gg,
        &BracketPairingParams {
            k1: Rational::from(&p.k1 - rat(1, 2)),
            k2: p.k2.clone(),
            nu: p.nu,
            s: p.s,
            r: 0,
            max_n: None,
        },
    )?;
    let sign = if p.nu % 2 == 0 { 1 } else { -1 };
    let c = SymExpr::rational(Rational::from(sign) / factorial(p.nu)).mul(&inv_sqrt_2m(m));
    let mut canonical = scaled(vv, &c, FormulaId::SkewBracketPairing);
    canonical.value = canonical.value.conj();

    // As printed.
    let backend = f.backend().join(&g.backend())?;
    let four_m = 4 * m as i64;
    let k1s = Rational::from(&p.k1 - rat(1, 2));
    let xs = Rational::from(&kappa2 + p.s);
    let weights = printed_weights(&k1s, &p.k2, p.nu, &xs)?;
    let e = Rational::from(&total - 1);
    let neg_e = Rational::from(-&e);
    let mut acc = PairingValue::zero(backend);
    let mut truncation = i64::MAX;
    for j in 1..=2 * m as i64 {
        let jj = rat(j * j, four_m);
        let n_hi = floor_i64(&Rational::from(&jj - g.kappa()));
        let mut n = n_hi;
        loop {
            let xg = Rational::from(g.kappa() + n);
            let xf = Rational::from(&xg - &xs);
            let (Some(dg), Some(df)) = (g.coefficient_at(&xg, j)?, f.coefficient_at(&xf, j)?) else {
                truncation = truncation.min(n_hi - n - 1);
                break;
            };
            n -= 1;
            let base = Rational::from(&jj - &xf);
            if dg.is_zero() || df.is_zero() || base.cmp0().is_eq() {
                continue;
            }
            let y = Rational::from(&jj - &xg);
            let mut poly = Rational::new();
            for (u, w) in weights.iter().enumerate() {
                poly += Rational::from(w * &rpow(&y, (p.nu - u as u32) as i64));
            }
            let term = PairingValue::from_coeff(&df.mul(&dg.conj()))
                .scale(&poly)
                .mul(&power_value(&base, &neg_e, backend)?);
            acc = acc.add(&term);
        }
    }
    let head = SymExpr::rational(Rational::from(1) / factorial(p.nu))
        .mul(&SymExpr::gamma(&Rational::from(&total - rat(3, 2)))?)
        .mul(&inv_sqrt_2m(m))
        .mul(&SymExpr::four_pi_pow(&neg_e));
    let as_printed = PairingResult {
        value: acc.mul(&PairingValue::Exact(head)),
        truncation_n: truncation,
        tail_bound: None,
        formula: FormulaId::SkewBracketPairing,
    };
    let differences = compare("value".into(), &canonical.value, &as_printed.value).into_iter().collect();
    Ok(DualPairing { canonical, as_printed, differences })
}

fn check_adjoint(m_h: u32, h_weight: &Rational, g: &VVForm, p: &AdjointParams) -> Result<Rational> {
    if p.nu == 0 {
        return Err(Error::ZeroOrder);
    }
    if p.k1 <= 2 || p.k2 <= 2 {
        return Err(Error::InvalidArgument(format!("weights {}, {} must exceed 2", p.k1, p.k2)));
    }
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch("g must be scalar".into()));
    }
    if m_h == 0 {
        return Err(Error::InvalidArgument("index must be positive".into()));
    }
    check_weights(h_weight, g.weight(), &p.k1, &p.k2, p.nu)
}

/// Adjoint of `f -> [f, g]^hol_nu` applied to a Jacobi cusp form `h`.
pub fn jacobi_adjoint(h: &ThetaComponentForm, g: &VVForm, p: &AdjointParams) -> Result<DualAdjoint> {
    let total = check_adjoint(h.index(), h.weight(), g, p)?;
    if !h.is_cusp() {
        return Err(Error::NotCuspidal("h".into()));
    }
    let m = h.index();
    let kappa1 = g.offsets()[0].clone();
    let kappa2 = frac(&Rational::from(h.kappa() - &kappa1));
    let right: Vec<Rational> = (1..=2 * m as i64).map(|mu| component_offset(m, &kappa2, mu)).collect();

    // Canonical: (4m)^nu / nu! times the vector-valued adjoint of the decomposition.
    let hh = h.psi().with_tensor_factors(vec![kappa1.clone()], right.clone())?;
    let vp = AdjointParams { k1: p.k1.clone(), k2: Rational::from(&p.k2 - rat(1, 2)), nu: p.nu, max_index: p.max_index };
    let vv = adjoint_coeffs_core(&hh, g, &vp)?;
    let c = SymExpr::rational(rpow(&Rational::from(4 * m), p.nu as i64) / factorial(p.nu));
    let mut canonical = vv.scale_exact(&c);
    canonical.tail_bound = vv.tail_bound * c.to_f64().abs();
    canonical.kind = AdjointKind::Jacobi { index: m, kappa: kappa2.clone() };
    canonical.weight = p.k2.clone();
    canonical.formula = FormulaId::JacobiAdjoint;

    // As printed: c(n + kappa2, r) with r = mu, so that x = n + kappa2 - mu^2/4m.
    let backend = h.backend().join(&g.backend())?;
    let four_m = 4 * m as i64;
    let nu = p.nu;
    let k2s = Rational::from(&p.k2 - rat(1, 2));
    let e = Rational::from(&total - rat(3, 2));
    let neg_e = Rational::from(-&e);
    let k2e = Rational::from(&p.k2 - rat(3, 2));
    let sign_scale = rpow(&Rational::from(-four_m), nu as i64) / factorial(nu);
    let head = SymExpr::rational(sign_scale)
        .mul(&SymExpr::gamma(&e)?)
        .mul(&SymExpr::four_pi_pow(&Rational::from(&k2e - &e)))
        .mul(&SymExpr::gamma(&k2e)?.inv().expect("single term"));
    let b_series = g.component(0);
    let mut components = Vec::with_capacity(2 * m as usize);
    for (i, off) in right.iter().enumerate() {
        let mu = i as i64 + 1;
        let mm = rat(mu * mu, four_m);
        let mut comp = BTreeMap::new();
        for idx in 0..=p.max_index {
            let x = Rational::from(off + idx);
            if x.cmp0().is_eq() {
                continue;
            }
            let mut acc = PairingValue::zero(backend);
            for (t, b) in b_series.terms() {
                let ty = Rational::from(&kappa1 + t);
                let xh = Rational::from(&x + &mm) + &ty;
                let Some(ch) = h.coefficient_at(&xh, mu)? else { break };
                if ch.is_zero() {
                    continue;
                }
                let mut poly = Rational::new();
                for u in 0..=nu {
                    poly += rpow(&Rational::from(-&x), u as i64)
                        * Rational::from(binomial(nu, u))
                        * pairing_gamma_ratio(&p.k1, &k2s, nu, u)?
                        * rpow(&ty, (nu - u) as i64);
                }
                let base = Rational::from(&xh - &mm);
                let term = PairingValue::from_coeff(&ch.mul(&b.conj()))
                    .scale(&poly)
                    .mul(&power_value(&base, &neg_e, backend)?);
                acc = acc.add(&term);
            }
            if acc.is_zero() {
                continue;
            }
            let lead = SymExpr::power(&x, &k2e)?.mul(&head);
            let v = acc.mul(&PairingValue::Exact(lead));
            if !v.is_zero() {
                comp.insert(idx, v);
            }
        }
        components.push(comp);
    }
    let as_printed = AdjointForm {
        kind: AdjointKind::Jacobi { index: m, kappa: kappa2 },
        weight: p.k2.clone(),
        offsets: right,
        components,
        max_index: p.max_index,
        tail_bound: canonical.tail_bound,
        formula: FormulaId::JacobiAdjoint,
    };
    let differences = compare_adjoints(&canonical, &as_printed);
    Ok(DualAdjoint { canonical, as_printed, differences })
}

/// Adjoint of `f -> [f, g]^skew_nu` applied to a skew-holomorphic cusp form `h`.
/// Components are returned in stored (conjugated) layout.
pub fn skew_adjoint(h: &SkewThetaForm, g: &VVForm, p: &AdjointParams) -> Result<DualAdjoint> {
    let total = check_adjoint(h.index(), h.weight(), g, p)?;
    if !h.is_cusp() {
        return Err(Error::NotCuspidal("h".into()));
    }
    let m = h.index();
    let kappa1 = g.offsets()[0].clone();
    let kappa2 = frac(&Rational::from(h.kappa() + &kappa1));
    let right: Vec<Rational> = (1..=2 * m as i64).map(|mu| skew_component_offset(m, &kappa2, mu)).collect();

    // Canonical: (-1)^nu / nu! times the vector-valued adjoint of the decomposition.
    let hh = h.psi_sk().with_tensor_factors(vec![kappa1.clone()], right.clone())?;
    let vp = AdjointParams { k1: p.k1.clone(), k2: Rational::from(&p.k2 - rat(1, 2)), nu: p.nu, max_index: p.max_index };
    let vv = adjoint_coeffs_core(&hh, g, &vp)?;
    let sign = if p.nu % 2 == 0 { 1 } else { -1 };
    let c = SymExpr::rational(Rational::from(sign) / factorial(p.nu));
    let mut canonical = vv.scale_exact(&c);
    canonical.tail_bound = vv.tail_bound * c.to_f64().abs();
    canonical.kind = AdjointKind::Skew { index: m, kappa: kappa2.clone() };
    canonical.weight = p.k2.clone();
    canonical.formula = FormulaId::SkewAdjoint;

    // As printed: d(n + kappa2, mu) with x = mu^2/4m - n - kappa2 the stored exponent.
    let backend = h.backend().join(&g.backend())?;
    let four_m = 4 * m as i64;
    let nu = p.nu;
    let k2s = Rational::from(&p.k2 - rat(1, 2));
    let e = Rational::from(&total - rat(3, 2));
    let neg_e = Rational::from(-&e);
    let k2e = Rational::from(&p.k2 - rat(3, 2));
    let head = SymExpr::rational(Rational::from(sign) / factorial(nu))
        .mul(&SymExpr::gamma(&e)?)
        .mul(&SymExpr::four_pi_pow(&Rational::from(&k2e - &e)))
        .mul(&SymExpr::gamma(&k2e)?.inv().expect("single term"));
    let b_series = g.component(0);
    let mut components = Vec::with_capacity(2 * m as usize);
    for (i, off) in right.iter().enumerate() {
        let mu = i as i64 + 1;
        let mm = rat(mu * mu, four_m);
        let mut comp = BTreeMap::new();
        for idx in 0..=p.max_index {
            let x = Rational::from(off + idx);
            if x.cmp0().is_eq() {
                continue;
            }
            let mut acc = PairingValue::zero(backend);
            for (t, b) in b_series.terms() {
                let ty = Rational::from(&kappa1 + t);
                // n - t - kappa1 + kappa2 with n + kappa2 = mu^2/4m - x
                let xh = Rational::from(&mm - &x) - &ty;
                let Some(dh) = h.coefficient_at(&xh, mu)? else { break };
                if dh.is_zero() {
                    continue;
                }
                let mut poly = Rational::new();
                for u in 0..=nu {
                    poly += rpow(&Rational::from(-&x), u as i64)
                        * Rational::from(binomial(nu, u))
                        * pairing_gamma_ratio(&p.k1, &k2s, nu, u)?
                        * rpow(&ty, (nu - u) as i64);
                }
                let base = Rational::from(&mm - &xh);
                let term = PairingValue::from_coeff(&dh.mul(b))
                    .scale(&poly)
                    .mul(&power_value(&base, &neg_e, backend)?);
                acc = acc.add(&term);
            }
            if acc.is_zero() {
                continue;
            }
            let lead = SymExpr::power(&x, &k2e)?.mul(&head);
            // Stored layout holds conj(d).
            let v = acc.mul(&PairingValue::Exact(lead)).conj();
            if !v.is_zero() {
                comp.insert(idx, v);
            }
        }
        components.push(comp);
    }
    let as_printed = AdjointForm {
        kind: AdjointKind::Skew { index: m, kappa: kappa2 },
        weight: p.k2.clone(),
        offsets: right,
        components,
        max_index: p.max_index,
        tail_bound: canonical.tail_bound,
        formula: FormulaId::SkewAdjoint,
    };
    let differences = compare_adjoints(&canonical, &as_printed);
    Ok(DualAdjoint { canonical, as_printed, differences })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qseries::FourierSeries;

    fn jacobi(m: u32, weight: Rational, kappa: Rational, terms: &[(i64, i64, i64)], cusp: bool) -> ThetaComponentForm {
        let comps = (1..=2 * m as i64)
            .map(|mu| {
                let t = terms.iter().filter(|(q, _, _)| *q == mu).map(|(_, n, c)| (*n, Rational::from(*c)));
                FourierSeries::from_rationals(component_offset(m, &kappa, mu), 6, t).unwrap()
            })
            .collect();
        ThetaComponentForm::new(m, weight, kappa, comps, cusp).unwrap()
    }

    fn skew(m: u32, weight: Rational, kappa: Rational, terms: &[(i64, i64, i64)], cusp: bool) -> SkewThetaForm {
        let comps = (1..=2 * m as i64)
            .map(|mu| {
                let t = terms.iter().filter(|(q, _, _)| *q == mu).map(|(_, n, c)| (*n, Rational::from(*c)));
                FourierSeries::from_rationals(skew_component_offset(m, &kappa, mu), 6, t).unwrap()
            })
            .collect();
        SkewThetaForm::new(m, weight, kappa, comps, cusp).unwrap()
    }

    fn params(nu: u32) -> JacobiPairingParams {
        JacobiPairingParams { k1: rat(9, 2), k2: Rational::from(6), nu, s: 1 }
    }

    #[test]
    fn zero_form_pairs_to_zero_in_both_modes() {
        let total = Rational::from(rat(9, 2) + 8);
        let f = jacobi(1, total, rat(1, 3), &[], true);
        let g = jacobi(1, rat(9, 2), Rational::new(), &[(1, 1, 1), (2, 0, 1)], false);
        let d = jacobi_bracket_pairing(&f, &g, &params(1)).unwrap();
        assert!(d.canonical.value.is_zero() && d.as_printed.value.is_zero());
        assert!(d.differences.is_empty());
    }

    #[test]
    fn single_term_ratio_is_inverse_sqrt_of_four_pi_x() {
        let total = Rational::from(rat(9, 2) + 8);
        let f = jacobi(1, total, rat(1, 3), &[(1, 2, 1)], true);
        let ones: Vec<(i64, i64, i64)> = (1..=2).flat_map(|mu| (0..=6).map(move |n| (mu, n, 1))).collect();
        let g = jacobi(1, rat(9, 2), Rational::new(), &ones, false);
        let d = jacobi_bracket_pairing(&f, &g, &params(1)).unwrap();
        assert_eq!(d.differences.len(), 1);
        // f's only term is index 2 of component 1, at exponent 2 + 1/3 - 1/4.
        let x = rat(25, 12);
        let want = SymExpr::four_pi_pow(&rat(-1, 2)).mul(&SymExpr::power(&x, &rat(-1, 2)).unwrap());
        assert_eq!(d.differences[0].factor.as_ref(), Some(&want));
    }

    #[test]
    fn canonical_is_scaled_vector_pairing() {
        let total = Rational::from(rat(9, 2) + 8);
        let f = jacobi(2, total, rat(1, 3), &[(1, 1, 2), (3, 2, -1), (4, 1, 5)], true);
        let g = jacobi(2, rat(9, 2), Rational::new(), &[(1, 1, 1), (2, 0, 3), (4, 2, 1)], false);
        let d = jacobi_bracket_pairing(&f, &g, &params(1)).unwrap();
        let gg = g.psi();
        let ff = f.psi().with_tensor_factors(gg.offsets().to_vec(), vec![rat(1, 3)]).unwrap();
        let bp = BracketPairingParams { k1: Rational::from(4), k2: Rational::from(6), nu: 1, s: 1, r: 0, max_n: None };
        let vv = bracket_pairing_core(&ff, &gg, &bp).unwrap().value;
        let c = SymExpr::rational(Rational::from(8)).mul(&inv_sqrt_2m(2));
        assert_eq!(d.canonical.value, vv.mul(&PairingValue::Exact(c)));
    }

    #[test]
    fn holomorphic_adjoint_modes_agree() {
        let h = jacobi(1, Rational::from(12), Rational::new(), &[(1, 1, 3), (2, 1, -2), (2, 3, 1)], true);
        let g = fixtures::e4(8);
        let p = AdjointParams { k1: Rational::from(4), k2: Rational::from(6), nu: 1, max_index: 3 };
        let d = jacobi_adjoint(&h, &g, &p).unwrap();
        assert!(d.differences.is_empty());
        assert!(d.canonical.components.iter().any(|c| !c.is_empty()));
    }

    #[test]
    fn skew_adjoint_modes_differ_by_sign_for_odd_order() {
        let g = fixtures::e4(8);
        for nu in [1u32, 2] {
            let total = Rational::from(4 + 2 * nu as i64);
            let h = skew(1, total + 6, Rational::new(), &[(1, 1, 3), (2, 1, -2), (2, 3, 1)], true);
            let p = AdjointParams { k1: Rational::from(4), k2: Rational::from(6), nu, max_index: 3 };
            let d = skew_adjoint(&h, &g, &p).unwrap();
            if nu == 1 {
                assert!(!d.differences.is_empty());
                assert!(d.differences.iter().all(|x| x.factor == Some(SymExpr::rational(Rational::from(-1)))));
            } else {
                assert!(d.differences.is_empty());
            }
        }
    }

    #[test]
    fn skew_pairing_zero_and_index_mismatch() {
        let total = Rational::from(rat(9, 2) + 8);
        let f = skew(1, total.clone(), rat(1, 3), &[], true);
        let g = skew(1, rat(9, 2), Rational::new(), &[(1, 0, 1)], false);
        let d = skew_bracket_pairing(&f, &g, &params(1)).unwrap();
        assert!(d.canonical.value.is_zero());
        let g2 = skew(2, rat(9, 2), Rational::new(), &[], false);
        assert!(skew_bracket_pairing(&f, &g2, &params(1)).is_err());
    }
}
