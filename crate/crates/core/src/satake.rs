//! Local algebra at an unramified prime.
//!
//! A class is the multiset of Satake parameters of a local component. Every
//! local invariant used downstream (Hecke eigenvalues at prime powers,
//! symmetric-power and adjoint eigenvalues, Rankin–Selberg products) is a
//! power sum of some derived parameter multiset, so the module is built
//! around [`LocalParameters::power_sum`] and a handful of multiset
//! constructions on top of it.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Admission tolerance for the unitarity invariant.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Exponent in the bound `|α_j| ≤ p^{7/64}` towards Ramanujan.
pub const RAMANUJAN_EXPONENT: f64 = 7.0 / 64.0;

/// Anything carrying a multiset of Satake parameters at a prime.
pub trait LocalParameters {
    fn params(&self) -> &[Complex64];
    fn prime(&self) -> u64;

    /// `a_{p^l} = Σ_j α_j^l`.
    fn power_sum(&self, l: u32) -> Complex64 {
        assert!(l >= 1, "power_sum needs l >= 1");
        self.params().iter().map(|a| a.powu(l)).sum()
    }

    fn rank(&self) -> usize {
        self.params().len()
    }

    /// Product of the parameters.
    fn central_value(&self) -> Complex64 {
        self.params().iter().product()
    }

    fn max_modulus(&self) -> f64 {
        self.params().iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

/// Satake class `{α₁, α₂}` of an unramified GL(2) component.
///
/// Classes are stored canonically: for a nontempered class `α₁` is the
/// parameter of modulus `> 1`; for a tempered class with trivial central
/// character `α₁ = e^{iθ}` with `θ ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnramifiedClass {
    alphas: [Complex64; 2],
    p: u64,
}

impl UnramifiedClass {
    pub fn new(alpha1: Complex64, alpha2: Complex64, p: u64) -> Result<Self> {
        if !is_unitary_pair(alpha1, alpha2) {
            return Err(Error::NotUnitary(format!(
                "p = {p}: {{{alpha1}, {alpha2}}} is not closed under conj = inverse"
            )));
        }
        let (a1, a2) = canonical_order(alpha1, alpha2);
        Ok(Self { alphas: [a1, a2], p })
    }

    /// Tempered class `{e^{iθ}, e^{-iθ}}` with trivial central character.
    pub fn tempered(theta: f64, p: u64) -> Self {
        let a = Complex64::from_polar(1.0, theta);
        let (a1, a2) = canonical_order(a, a.conj());
        Self { alphas: [a1, a2], p }
    }

    /// Nontempered class `{u·e^{t}, u·e^{-t}}` with `u = e^{i·phase}`.
    pub fn nontempered(t: f64, u_phase: f64, p: u64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("nontempered t must be positive, got {t}")));
        }
        let u = Complex64::from_polar(1.0, u_phase);
        Ok(Self { alphas: [u * t.exp(), u * (-t).exp()], p })
    }

    pub fn from_shape(shape: LocalShape, p: u64) -> Result<Self> {
        match shape {
            LocalShape::Tempered { theta } => Ok(Self::tempered(theta, p)),
            LocalShape::NonTempered { u_phase, t } => Self::nontempered(t, u_phase, p),
        }
    }

    pub fn alpha1(&self) -> Complex64 {
        self.alphas[0]
    }

    pub fn alpha2(&self) -> Complex64 {
        self.alphas[1]
    }

    /// `ω_p = α₁α₂`.
    pub fn central_character(&self) -> Complex64 {
        self.alphas[0] * self.alphas[1]
    }

    pub fn is_tempered(&self) -> bool {
        (self.alphas[0].norm() - 1.0).abs() <= UNITARITY_TOL
    }

    pub fn shape(&self) -> LocalShape {
        if self.is_tempered() {
            let omega = self.central_character();
            let theta = if (omega - 1.0).norm() <= UNITARITY_TOL {
                self.alphas[0].arg().abs()
            } else {
                (self.alphas[0] / self.alphas[1]).arg().abs() / 2.0
            };
            LocalShape::Tempered { theta }
        } else {
            LocalShape::NonTempered { u_phase: self.alphas[0].arg(), t: self.alphas[0].norm().ln() }
        }
    }

    /// The same multiset seen as a rank-2 lift.
    pub fn as_lifted(&self) -> LiftedClass {
        LiftedClass { params: self.alphas.to_vec(), p: self.p, label: "π".into() }
    }
}

impl LocalParameters for UnramifiedClass {
    fn params(&self) -> &[Complex64] {
        &self.alphas
    }

    fn prime(&self) -> u64 {
        self.p
    }
}

fn is_unitary_pair(a1: Complex64, a2: Complex64) -> bool {
    if a1.norm() == 0.0 || a2.norm() == 0.0 || !a1.is_finite() || !a2.is_finite() {
        return false;
    }
    let scale = a1.norm().max(a2.norm()).max(1.0 / a1.norm().min(a2.norm()));
    let tol = UNITARITY_TOL * scale;
    let close = |x: Complex64, y: Complex64| (x - y).norm() <= tol;
    let (c1, c2) = (a1.conj(), a2.conj());
    let (i1, i2) = (a1.inv(), a2.inv());
    let multiset_eq = (close(c1, i1) && close(c2, i2)) || (close(c1, i2) && close(c2, i1));
    multiset_eq && ((a1 * a2).norm() - 1.0).abs() <= tol
}

fn canonical_order(a1: Complex64, a2: Complex64) -> (Complex64, Complex64) {
    let (n1, n2) = (a1.norm(), a2.norm());
    if (n1 - n2).abs() > UNITARITY_TOL {
        return if n1 > n2 { (a1, a2) } else { (a2, a1) };
    }
    // tempered: prefer the parameter with nonnegative imaginary part
    if a1.im < 0.0 && a2.im >= 0.0 {
        (a2, a1)
    } else {
        (a1, a2)
    }
}

/// Angle/exponent description of a local class.
///
/// `NonTempered.t` is the natural logarithm of `|α₁|`, so `t = t'·ln p`
/// when `|α₁| = p^{t'}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LocalShape {
    Tempered { theta: f64 },
    NonTempered { u_phase: f64, t: f64 },
}

impl LocalShape {
    /// Checks `t ≤ (7/64)·ln p` for nontempered shapes at `p`.
    pub fn within_bound_at(&self, p: u64) -> bool {
        match *self {
            LocalShape::Tempered { .. } => true,
            LocalShape::NonTempered { t, .. } => t <= RAMANUJAN_EXPONENT * (p as f64).ln() * (1.0 + 1e-15),
        }
    }

    /// The `y` used by the closed-form tables at exponent `l`.
    pub fn y_at(&self, l: u32) -> f64 {
        match *self {
            LocalShape::Tempered { theta } => (l as f64 * theta).cos().abs(),
            LocalShape::NonTempered { t, .. } => (l as f64 * t).exp(),
        }
    }
}

/// A lifted multiset of parameters (symmetric power, adjoint, tensor,
/// twist) at a prime.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedClass {
    params: Vec<Complex64>,
    p: u64,
    label: String,
}

impl LiftedClass {
    pub fn from_params(params: Vec<Complex64>, p: u64, label: impl Into<String>) -> Self {
        Self { params, p, label: label.into() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl LocalParameters for LiftedClass {
    fn params(&self) -> &[Complex64] {
        &self.params
    }

    fn prime(&self) -> u64 {
        self.p
    }
}

/// `Sym^k`: parameters `α₁^{k-j} α₂^j`, `j = 0..=k`.
pub fn sym_power(class: &UnramifiedClass, k: u32) -> Result<LiftedClass> {
    if !(1..=4).contains(&k) {
        return Err(Error::SymPowerRange(k));
    }
    let (a1, a2) = (class.alpha1(), class.alpha2());
    let params = (0..=k).map(|j| a1.powu(k - j) * a2.powu(j)).collect();
    let label = if k == 1 { "π".to_string() } else { format!("Sym^{k}π") };
    Ok(LiftedClass { params, p: class.p, label })
}

/// `Ad`: parameters `{α₁/α₂, 1, α₂/α₁}`.
pub fn adjoint_class(class: &UnramifiedClass) -> LiftedClass {
    let r = class.alpha1() / class.alpha2();
    LiftedClass { params: vec![r, Complex64::new(1.0, 0.0), r.inv()], p: class.p, label: "Adπ".into() }
}

/// `a_{p^l}(Ad π) = |a_{p^l}(π)|² − 1`.
pub fn adjoint_eigenvalue(class: &UnramifiedClass, l: u32) -> f64 {
    class.power_sum(l).norm_sqr() - 1.0
}

/// Rankin–Selberg class: all pairwise products.
pub fn tensor_product(a: &impl LocalParameters, b: &impl LocalParameters) -> Result<LiftedClass> {
    if a.prime() != b.prime() {
        return Err(Error::PrimeMismatch(a.prime(), b.prime()));
    }
    let params = a.params().iter().flat_map(|x| b.params().iter().map(move |y| x * y)).collect();
    Ok(LiftedClass { params, p: a.prime(), label: "⊗".into() })
}

/// Contragredient: parameters `1/α_j`.
pub fn dual(class: &impl LocalParameters) -> LiftedClass {
    LiftedClass {
        params: class.params().iter().map(|a| a.inv()).collect(),
        p: class.prime(),
        label: "dual".into(),
    }
}

/// Character twist: every parameter multiplied by a unit.
pub fn twist(class: &impl LocalParameters, unit: Complex64) -> Result<LiftedClass> {
    if (unit.norm() - 1.0).abs() > UNITARITY_TOL {
        return Err(Error::NonUnitTwist(unit.to_string()));
    }
    Ok(LiftedClass {
        params: class.params().iter().map(|a| a * unit).collect(),
        p: class.prime(),
        label: "twist".into(),
    })
}

/// Identifiers of the closed-form eigenvalue tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaId {
    /// `|a(π)|`
    AbsStd,
    /// `a(Ad π)`
    Adjoint,
    /// `|a(ω⁻¹ ⊗ Sym³π)|`
    AbsSym3Twist,
    /// `a(ω⁻² ⊗ Sym⁴π)`
    Sym4Twist,
    /// `|a(π × ω⁻¹ ⊗ Sym²π)|`
    AbsPiXSym2,
    /// `a(π × ω⁻² ⊗ Sym³π)`
    PiXSym3,
}

impl FormulaId {
    pub const ALL: [FormulaId; 6] = [
        FormulaId::AbsStd,
        FormulaId::Adjoint,
        FormulaId::AbsSym3Twist,
        FormulaId::Sym4Twist,
        FormulaId::AbsPiXSym2,
        FormulaId::PiXSym3,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::AbsStd => "abs_std",
            FormulaId::Adjoint => "adjoint",
            FormulaId::AbsSym3Twist => "abs_sym3_twist",
            FormulaId::Sym4Twist => "sym4_twist",
            FormulaId::AbsPiXSym2 => "abs_pi_x_sym2",
            FormulaId::PiXSym3 => "pi_x_sym3",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFormula(s.to_string()))
    }
}

/// Closed-form value of `formula` at exponent `l`.
///
/// The absolute values on `abs_pi_x_sym2` and `abs_sym3_twist` are applied
/// to the whole polynomial, so the tables stay correct for `y < 1/2` too.
pub fn closed_form(shape: LocalShape, formula: FormulaId, l: u32) -> f64 {
    let y = shape.y_at(l);
    match shape {
        LocalShape::Tempered { .. } => {
            let y2 = y * y;
            match formula {
                FormulaId::AbsStd => 2.0 * y,
                FormulaId::Adjoint => 4.0 * y2 - 1.0,
                FormulaId::AbsSym3Twist => 4.0 * (2.0 * y2 * y - y).abs(),
                FormulaId::Sym4Twist => 16.0 * y2 * y2 - 12.0 * y2 + 1.0,
                FormulaId::AbsPiXSym2 => 2.0 * y * (4.0 * y2 - 1.0).abs(),
                FormulaId::PiXSym3 => 16.0 * y2 * y2 - 8.0 * y2,
            }
        }
        LocalShape::NonTempered { .. } => {
            let iy = 1.0 / y;
            let p = |k: i32| y.powi(k) + iy.powi(k);
            match formula {
                FormulaId::AbsStd => p(1),
                FormulaId::Adjoint => p(2) + 1.0,
                FormulaId::AbsSym3Twist => p(3) + p(1),
                FormulaId::Sym4Twist => p(4) + p(2) + 1.0,
                FormulaId::AbsPiXSym2 => p(3) + 2.0 * p(1),
                FormulaId::PiXSym3 => p(4) + 2.0 * p(2) + 2.0,
            }
        }
    }
}

/// The same quantity as [`closed_form`], computed by lifting, twisting and
/// tensoring the class itself.
pub fn pipeline_value(class: &UnramifiedClass, formula: FormulaId, l: u32) -> f64 {
    let omega_inv = class.central_character().inv();
    let lift = |k: u32, j: i32| -> LiftedClass {
        let s = sym_power(class, k).expect("k in range");
        twist(&s, unit_power(omega_inv, j)).expect("unit twist")
    };
    match formula {
        FormulaId::AbsStd => class.power_sum(l).norm(),
        FormulaId::Adjoint => adjoint_class(class).power_sum(l).re,
        FormulaId::AbsSym3Twist => lift(3, 1).power_sum(l).norm(),
        FormulaId::Sym4Twist => lift(4, 2).power_sum(l).re,
        FormulaId::AbsPiXSym2 => tensor_product(class, &lift(2, 1)).expect("same prime").power_sum(l).norm(),
        FormulaId::PiXSym3 => tensor_product(class, &lift(3, 2)).expect("same prime").power_sum(l).re,
    }
}

fn unit_power(u: Complex64, j: i32) -> Complex64 {
    // renormalize so accumulated rounding never trips the unit check
    let v = u.powi(j);
    v / v.norm()
}

/// `| |a_{p^l}(π)|⁴ − (2 + 3·a_{p^l}(Ad π) + a_{p^l}(ω⁻² ⊗ Sym⁴π)) |`.
pub fn check_degree4_identity(class: &UnramifiedClass, l: u32) -> f64 {
    let lhs = class.power_sum(l).norm_sqr().powi(2);
    let sym4 = twist(&sym_power(class, 4).expect("k = 4"), unit_power(class.central_character().inv(), 2))
        .expect("unit twist")
        .power_sum(l);
    let rhs = Complex64::new(2.0 + 3.0 * adjoint_eigenvalue(class, l), 0.0) + sym4;
    (Complex64::new(lhs, 0.0) - rhs).norm()
}

/// Largest magnitude appearing in the degree-4 identity; used to scale
/// tolerances.
pub fn degree4_scale(class: &UnramifiedClass, l: u32) -> f64 {
    class.max_modulus().powi(4 * l as i32).max(1.0) * 16.0
}

/// Folds any angle into `[0, π]`.
pub fn fold_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        2.0 * PI - t
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, LN_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn power_sum_examples() {
        assert!(close(UnramifiedClass::tempered(0.0, 2).power_sum(1).re, 2.0));
        let z = UnramifiedClass::tempered(FRAC_PI_3, 2).power_sum(2);
        assert!(close(z.re, -1.0) && z.im.abs() < 1e-12);
        let nt = UnramifiedClass::nontempered(LN_2, 0.0, 2).unwrap();
        assert!(close(nt.power_sum(1).re, 2.5));
    }

    #[test]
    fn sym_power_examples() {
        let id = UnramifiedClass::tempered(0.0, 5);
        let s = sym_power(&id, 3).unwrap();
        assert_eq!(s.rank(), 4);
        assert!(s.params().iter().all(|a| (a - c(1.0, 0.0)).norm() < 1e-15));

        let i_class = UnramifiedClass::new(c(0.0, 1.0), c(0.0, -1.0), 3).unwrap();
        let s2 = sym_power(&i_class, 2).unwrap();
        let expect = [c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        for (a, b) in s2.params().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }

        let q = UnramifiedClass::tempered(FRAC_PI_4, 7);
        assert!(close(sym_power(&q, 4).unwrap().power_sum(1).re, -1.0));
        assert_eq!(sym_power(&q, 1).unwrap().params(), q.params());
        assert!(matches!(sym_power(&q, 5), Err(Error::SymPowerRange(5))));
        assert!(matches!(sym_power(&q, 0), Err(Error::SymPowerRange(0))));
    }

    #[test]
    fn adjoint_examples() {
        assert!(close(adjoint_eigenvalue(&UnramifiedClass::tempered(0.0, 2), 1), 3.0));
        assert!(adjoint_eigenvalue(&UnramifiedClass::tempered(FRAC_PI_3, 2), 1).abs() < 1e-12);
        let nt = UnramifiedClass::nontempered(LN_2, 0.0, 2).unwrap();
        assert!(close(adjoint_eigenvalue(&nt, 1), 5.25));
        for l in 1..6 {
            let via_lift = adjoint_class(&nt).power_sum(l);
            assert!(close(via_lift.re, adjoint_eigenvalue(&nt, l)));
        }
    }

    #[test]
    fn tensor_examples() {
        let id = UnramifiedClass::tempered(0.0, 11);
        let t = tensor_product(&id, &id).unwrap();
        assert_eq!(t.rank(), 4);
        assert!(t.params().iter().all(|a| (a - c(1.0, 0.0)).norm() < 1e-15));

        let q = UnramifiedClass::tempered(FRAC_PI_6, 11);
        let sym2 = twist(&sym_power(&q, 2).unwrap(), q.central_character().inv()).unwrap();
        let v = tensor_product(&q, &sym2).unwrap().power_sum(1).norm();
        assert!((v - 3.464_101_615_137_754).abs() < 1e-12);

        let other = UnramifiedClass::tempered(0.3, 13);
        assert!(matches!(tensor_product(&q, &other), Err(Error::PrimeMismatch(11, 13))));
    }

    #[test]
    fn twist_examples() {
        let q = UnramifiedClass::tempered(FRAC_PI_3, 2);
        let same = twist(&q, c(1.0, 0.0)).unwrap();
        assert_eq!(same.params(), q.params());
        let s2 = twist(&sym_power(&q, 2).unwrap(), q.central_character().inv()).unwrap();
        assert!(s2.power_sum(1).norm() < 1e-12);

        let nt = UnramifiedClass::nontempered(LN_2, 0.0, 2).unwrap();
        let s4 = twist(&sym_power(&nt, 4).unwrap(), nt.central_character().inv().powi(2)).unwrap();
        assert!(close(s4.power_sum(1).re, 21.3125));
        assert!(matches!(twist(&q, c(2.0, 0.0)), Err(Error::NonUnitTwist(_))));
    }

    #[test]
    fn closed_form_examples() {
        let y1 = LocalShape::Tempered { theta: 0.0 };
        assert!(close(closed_form(y1, FormulaId::AbsStd, 1), 2.0));
        assert!(close(closed_form(y1, FormulaId::Sym4Twist, 1), 5.0));
        let nt = LocalShape::NonTempered { u_phase: 0.0, t: LN_2 };
        assert!(close(closed_form(nt, FormulaId::PiXSym3, 1), 26.5625));
        assert!("bogus".parse::<FormulaId>().is_err());
        for id in FormulaId::ALL {
            assert_eq!(id.as_str().parse::<FormulaId>().unwrap(), id);
        }
    }

    #[test]
    fn degree4_examples() {
        assert!(check_degree4_identity(&UnramifiedClass::tempered(0.0, 2), 1) < 1e-12);
        assert!(check_degree4_identity(&UnramifiedClass::tempered(FRAC_PI_3, 2), 1) < 1e-12);
        let nt = UnramifiedClass::nontempered(LN_2, 0.0, 2).unwrap();
        assert!(close(nt.power_sum(1).norm().powi(4), 39.0625));
        assert!(check_degree4_identity(&nt, 1) < 1e-12);
    }

    #[test]
    fn unitarity_and_canonical_order() {
        assert!(UnramifiedClass::new(c(2.0, 0.0), c(2.0, 0.0), 2).is_err());
        assert!(UnramifiedClass::new(c(1.0, 0.0), c(0.0, 0.0), 2).is_err());
        // swapped nontempered input is normalized so α₁ is the large parameter
        let cl = UnramifiedClass::new(c(0.5, 0.0), c(2.0, 0.0), 2).unwrap();
        assert_eq!(cl.alpha1(), c(2.0, 0.0));
        match cl.shape() {
            LocalShape::NonTempered { t, .. } => assert!(t > 0.0),
            s => panic!("unexpected {s:?}"),
        }
        let t = UnramifiedClass::tempered(FRAC_PI_2, 2);
        assert!(t.alpha1().im > 0.0);
        assert!(t.is_tempered());
    }

    #[test]
    fn fold_angle_range() {
        assert!(close(fold_angle(-FRAC_PI_3), FRAC_PI_3));
        assert!(close(fold_angle(2.0 * PI - 0.1), 0.1));
    }
}
