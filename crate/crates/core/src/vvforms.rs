//! Vector-valued forms for a finite-image representation that is diagonal at
//! `T`, and their Rankin-Cohen brackets.

use crate::error::{Error, Result};
use crate::number::{binomial, floor_i64, frac, in_unit_interval, Backend};
use crate::qseries::FourierSeries;
use rug::Rational;

/// Offsets of the two factors of a tensor product representation.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorFactors {
    pub left: Vec<Rational>,
    pub right: Vec<Rational>,
}

impl TensorFactors {
    /// Integer part of `left[j] + right[l]`, moved into the indices of slot (j, l).
    pub fn carry(&self, j: usize, l: usize) -> i64 {
        floor_i64(&Rational::from(&self.left[j] + &self.right[l]))
    }

    pub fn folded_offsets(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.left.len() * self.right.len());
        for a in &self.left {
            for b in &self.right {
                out.push(frac(&Rational::from(a + b)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierData {
    weight: Rational,
    offsets: Vec<Rational>,
    tensor: Option<TensorFactors>,
}

impl MultiplierData {
    pub fn new(weight: Rational, offsets: Vec<Rational>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        for o in &offsets {
            if !in_unit_interval(o) {
                return Err(Error::OffsetOutOfRange(o.to_string()));
            }
        }
        Ok(MultiplierData { weight, offsets, tensor: None })
    }

    pub fn scalar(weight: Rational, offset: Rational) -> Result<Self> {
        Self::new(weight, vec![offset])
    }

    /// Multiplier data of a tensor product with slots in row-major order.
    pub fn tensor_of(weight: Rational, left: Vec<Rational>, right: Vec<Rational>) -> Result<Self> {
        let factors = TensorFactors { left, right };
        let mut m = Self::new(weight, factors.folded_offsets())?;
        for o in factors.left.iter().chain(&factors.right) {
            if !in_unit_interval(o) {
                return Err(Error::OffsetOutOfRange(o.to_string()));
            }
        }
        m.tensor = Some(factors);
        Ok(m)
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.offsets.len()
    }

    pub fn tensor(&self) -> Option<&TensorFactors> {
        self.tensor.as_ref()
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.weight = weight;
        self
    }

    /// Attaches a tensor decomposition; the folded offsets must match.
    pub fn with_tensor_factors(self, left: Vec<Rational>, right: Vec<Rational>) -> Result<Self> {
        let m = Self::tensor_of(self.weight.clone(), left, right)?;
        if m.offsets != self.offsets {
            return Err(Error::OffsetMismatch(
                "tensor factors do not fold to the stored offsets".into(),
            ));
        }
        Ok(m)
    }
}

/// Multiplier data of the tensor product; the weight is `k1 + k2`.
pub fn tensor_meta(m1: &MultiplierData, m2: &MultiplierData) -> MultiplierData {
    MultiplierData::tensor_of(
        Rational::from(&m1.weight + &m2.weight),
        m1.offsets.clone(),
        m2.offsets.clone(),
    )
    .expect("offsets already validated")
}

#[derive(Clone, Debug, PartialEq)]
pub struct VVForm {
    meta: MultiplierData,
    components: Vec<FourierSeries>,
    cusp: bool,
}

impl VVForm {
    pub fn new(meta: MultiplierData, components: Vec<FourierSeries>, cusp: bool) -> Result<Self> {
        if components.len() != meta.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} components for dimension {}",
                components.len(),
                meta.dim()
            )));
        }
        let backend = components[0].backend();
        for (j, (c, o)) in components.iter().zip(meta.offsets()).enumerate() {
            if c.offset() != o {
                return Err(Error::OffsetMismatch(format!(
                    "component {j} has offset {} but the multiplier gives {o}",
                    c.offset()
                )));
            }
            if !c.backend().same_kind(&backend) {
                return Err(Error::BackendMismatch(format!("component {j}")));
            }
            if let Some(v) = c.valuation() {
                if v < 0 {
                    return Err(Error::InvalidArgument(format!(
                        "component {j} has a coefficient at negative index {v}"
                    )));
                }
            }
        }
        let form = VVForm { meta, components, cusp };
        if cusp {
            if let Some(j) = form.noncusp_component() {
                return Err(Error::CuspFlagViolated(format!("component {j}")));
            }
        }
        Ok(form)
    }

    pub fn scalar(weight: Rational, series: FourierSeries, cusp: bool) -> Result<Self> {
        let meta = MultiplierData::scalar(weight, series.offset().clone())?;
        Self::new(meta, vec![series], cusp)
    }

    pub fn meta(&self) -> &MultiplierData {
        &self.meta
    }

    pub fn weight(&self) -> &Rational {
        self.meta.weight()
    }

    pub fn offsets(&self) -> &[Rational] {
        self.meta.offsets()
    }

    pub fn dim(&self) -> usize {
        self.meta.dim()
    }

    pub fn components(&self) -> &[FourierSeries] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &FourierSeries {
        &self.components[j]
    }

    pub fn backend(&self) -> Backend {
        self.components
            .iter()
            .skip(1)
            .fold(self.components[0].backend(), |b, c| b.join(&c.backend()).unwrap_or(b))
    }

    /// Smallest component precision.
    pub fn precision(&self) -> i64 {
        self.components.iter().map(|c| c.precision()).min().unwrap_or(0)
    }

    pub fn cusp_flag(&self) -> bool {
        self.cusp
    }

    /// First component with a nonzero `q^0` coefficient.
    fn noncusp_component(&self) -> Option<usize> {
        self.components.iter().position(|c| {
            c.offset().cmp0().is_eq() && c.coeff(0).map(|a| !a.is_zero()).unwrap_or(false)
        })
    }

    /// Whether every `q^0` coefficient vanishes.
    pub fn is_cusp(&self) -> bool {
        self.noncusp_component().is_none()
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.meta = self.meta.with_weight(weight);
        self
    }

    pub fn with_cusp_flag(self, cusp: bool) -> Result<Self> {
        Self::new(self.meta, self.components, cusp)
    }

    pub fn with_tensor_factors(mut self, left: Vec<Rational>, right: Vec<Rational>) -> Result<Self> {
        self.meta = self.meta.with_tensor_factors(left, right)?;
        Ok(self)
    }

    /// Componentwise `(q d/dq)^s`.
    pub fn derivative(&self, s: u32) -> VVForm {
        let components: Vec<_> = self.components.iter().map(|c| c.diag_pow(s)).collect();
        let cusp = self.cusp || s > 0;
        VVForm { meta: self.meta.clone(), components, cusp }
    }

    pub fn scale_rational(&self, q: &Rational) -> VVForm {
        VVForm {
            meta: self.meta.clone(),
            components: self.components.iter().map(|c| c.scale_rational(q)).collect(),
            cusp: self.cusp,
        }
    }

    pub fn add(&self, other: &VVForm) -> Result<VVForm> {
        if self.offsets() != other.offsets() {
            return Err(Error::OffsetMismatch("forms have different offsets".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(VVForm { meta: self.meta.clone(), components, cusp: self.cusp && other.cusp })
    }

    pub fn truncate(&self, precision: i64) -> VVForm {
        VVForm {
            meta: self.meta.clone(),
            components: self.components.iter().map(|c| c.truncate(precision)).collect(),
            cusp: self.cusp,
        }
    }

    pub fn to_float(&self, prec: u32) -> VVForm {
        VVForm {
            meta: self.meta.clone(),
            components: self.components.iter().map(|c| c.to_float(prec)).collect(),
            cusp: self.cusp,
        }
    }

    /// Same offsets and coefficients up to the common precision of each component.
    pub fn agrees_with(&self, other: &VVForm) -> bool {
        self.dim() == other.dim()
            && self.components.iter().zip(&other.components).all(|(a, b)| a.agrees_with(b))
    }
}

/// `Gamma(k + nu) / Gamma(k + i)`, the product `(k+i)(k+i+1)...(k+nu-1)`.
pub fn gamma_ratio(k: &Rational, nu: u32, i: u32) -> Result<Rational> {
    if i > nu {
        return Err(Error::InvalidArgument(format!("i={i} exceeds nu={nu}")));
    }
    let mut acc = Rational::from(1);
    for t in i..nu {
        let f = Rational::from(k + t);
        if f.cmp0().is_eq() {
            return Err(Error::GammaPole(format!("Gamma({k} + {t}) in a ratio with nu={nu}")));
        }
        acc *= f;
    }
    Ok(acc)
}

/// `x (x-1) ... (x-s+1) / s!`.
pub fn gen_binomial(x: &Rational, s: u32) -> Rational {
    let mut acc = Rational::from(1);
    for t in 0..s {
        acc *= Rational::from(x - t);
        acc /= t + 1;
    }
    acc
}

/// Weights of the order-`nu` bracket for weights `k1`, `k2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketPlan {
    pub nu: u32,
    pub k1: Rational,
    pub k2: Rational,
    /// `weights[i]` multiplies `f1^(i) (x) f2^(nu - i)`.
    pub weights: Vec<Rational>,
}

impl BracketPlan {
    pub fn new(k1: &Rational, k2: &Rational, nu: u32) -> Result<Self> {
        let mut weights = Vec::with_capacity(nu as usize + 1);
        for i in 0..=nu {
            let sign = if (nu - i) % 2 == 0 { 1 } else { -1 };
            let w = Rational::from(binomial(nu, i))
                * gamma_ratio(k1, nu, i)?
                * gamma_ratio(k2, nu, nu - i)?
                * sign;
            weights.push(w);
        }
        Ok(BracketPlan { nu, k1: k1.clone(), k2: k2.clone(), weights })
    }

    pub fn output_weight(&self) -> Rational {
        Rational::from(&self.k1 + &self.k2) + 2 * self.nu
    }
}

/// Tensor-product Rankin-Cohen bracket `[f1, f2]_nu` on `rho1 (x) rho2`.
pub fn rc_bracket(f1: &VVForm, f2: &VVForm, nu: u32) -> Result<VVForm> {
    if nu == 0 {
        return Err(Error::ZeroOrder);
    }
    f1.backend().join(&f2.backend())?;
    let plan = BracketPlan::new(f1.weight(), f2.weight(), nu)?;
    let d1 = f1.dim();
    let d2 = f2.dim();
    let derivs1: Vec<VVForm> = (0..=nu).map(|i| f1.derivative(i)).collect();
    let derivs2: Vec<VVForm> = (0..=nu).map(|i| f2.derivative(i)).collect();
    let mut components = Vec::with_capacity(d1 * d2);
    for j in 0..d1 {
        for l in 0..d2 {
            let mut acc: Option<FourierSeries> = None;
            for (i, w) in plan.weights.iter().enumerate() {
                let term = derivs1[i]
                    .component(j)
                    .mul(derivs2[nu as usize - i].component(l))?
                    .scale_rational(w);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term)?,
                });
            }
            components.push(acc.expect("nu >= 1 gives at least one term"));
        }
    }
    let meta = tensor_meta(f1.meta(), f2.meta()).with_weight(plan.output_weight());
    for (idx, c) in components.iter().enumerate() {
        if c.offset().cmp0().is_eq() {
            if let Some(a) = c.coeff(0) {
                if !a.is_zero() {
                    return Err(Error::Internal(format!(
                        "bracket slot {idx} has a nonzero constant term"
                    )));
                }
            }
        }
    }
    VVForm::new(meta, components, true)
}

/// Reorders slot (j, l) of a form on `rho1 (x) rho2` to slot (l, j) of `rho2 (x) rho1`.
pub fn swap_slots(f: &VVForm) -> Result<VVForm> {
    let t = f
        .meta()
        .tensor()
        .ok_or_else(|| Error::NotTensor("swap_slots needs tensor factors".into()))?;
    let d1 = t.left.len();
    let d2 = t.right.len();
    let mut components = Vec::with_capacity(d1 * d2);
    for l in 0..d2 {
        for j in 0..d1 {
            components.push(f.component(j * d2 + l).clone());
        }
    }
    let meta = MultiplierData::tensor_of(f.weight().clone(), t.right.clone(), t.left.clone())?;
    VVForm::new(meta, components, f.cusp_flag())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    #[test]
    fn gamma_ratio_products() {
        assert_eq!(gamma_ratio(&rat(4, 1), 3, 1).unwrap(), rat(5 * 6, 1));
        assert_eq!(gamma_ratio(&rat(4, 1), 3, 3).unwrap(), 1);
        assert!(matches!(gamma_ratio(&rat(-1, 1), 2, 0), Err(Error::GammaPole(_))));
    }

    #[test]
    fn gen_binomial_values() {
        assert_eq!(gen_binomial(&rat(5, 1), 2), 10);
        assert_eq!(gen_binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(gen_binomial(&rat(7, 3), 0), 1);
    }

    #[test]
    fn first_order_weights() {
        let p = BracketPlan::new(&rat(4, 1), &rat(6, 1), 1).unwrap();
        assert_eq!(p.weights, vec![rat(-4, 1), rat(6, 1)]);
        assert_eq!(p.output_weight(), 12);
    }

    #[test]
    fn zero_order_rejected() {
        let s = FourierSeries::from_rationals(Rational::new(), 3, [(0, Rational::from(1))]).unwrap();
        let f = VVForm::scalar(rat(4, 1), s, false).unwrap();
        assert!(matches!(rc_bracket(&f, &f, 0), Err(Error::ZeroOrder)));
    }

    #[test]
    fn cusp_flag_is_validated() {
        let s = FourierSeries::from_rationals(Rational::new(), 3, [(0, Rational::from(1))]).unwrap();
        assert!(matches!(VVForm::scalar(rat(4, 1), s, true), Err(Error::CuspFlagViolated(_))));
    }

    #[test]
    fn swap_is_an_involution() {
        let a = FourierSeries::from_rationals(rat(1, 3), 4, [(0, Rational::from(1)), (2, Rational::from(5))]).unwrap();
        let b = FourierSeries::from_rationals(rat(1, 2), 4, [(1, Rational::from(2))]).unwrap();
        let c = FourierSeries::from_rationals(rat(3, 4), 4, [(0, Rational::from(-1))]).unwrap();
        let f = VVForm::new(MultiplierData::new(rat(3, 1), vec![rat(1, 3), rat(1, 2)]).unwrap(), vec![a, b], false).unwrap();
        let g = VVForm::scalar(rat(5, 1), c, false).unwrap();
        let h = rc_bracket(&f, &g, 2).unwrap();
        assert_eq!(swap_slots(&swap_slots(&h).unwrap()).unwrap(), h);
    }
}
