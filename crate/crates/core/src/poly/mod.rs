//! Exact calculus of polynomial differential forms over ℚ.
//!
//! Coefficients are arbitrary-precision rationals, so every identity in
//! this module (d∘d = 0, dδ + δd = Δ, δ = ±⋆d⋆, Δ∘Δ⁻¹ = Id, …) is tested
//! bit-exactly, not to a tolerance. The Laplacian here is the geometer's
//! positive one, Δ = −Σ_μ ∂_μ²; every sign in the module is pinned to that
//! convention.

mod laplace;
mod text;

pub use laplace::{
    harmonic_decompose, inverse_laplacian, inverse_laplacian_form, kernel_dimension_audit,
    nilpotency_index, HarmonicExpansion, HarmonicTerm,
};

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{exterior_basis, hodge_star_basis, interior_basis, FormIndex};
use crate::rng::SplitMix64;

/// Exact rational scalar.
pub type Rat = BigRational;

/// Rational from an integer pair; helper for literals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest f64 of a rational (numerator over denominator in doubles).
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms map an exponent multi-index (length n) to its coefficient; zero
/// coefficients are never stored. The zero polynomial has no terms and
/// reports degree `None`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, value: Rat) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], value);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rat::one())
    }

    /// Single monomial c · x^exps.
    pub fn monomial(n: usize, exps: &[u32], coeff: Rat) -> Self {
        assert_eq!(exps.len(), n, "exponent multi-index length must equal n");
        let mut p = Self::zero(n);
        p.add_term(exps.to_vec(), coeff);
        p
    }

    /// The coordinate polynomial x_{axis} (0-based axis).
    pub fn var(n: usize, axis: usize) -> Self {
        assert!(axis < n);
        let mut exps = vec![0u32; n];
        exps[axis] = 1;
        Self::monomial(n, &exps, Rat::one())
    }

    /// |x|² = Σ x_μ².
    pub fn norm_sq(n: usize) -> Self {
        let mut p = Self::zero(n);
        for mu in 0..n {
            let mut exps = vec![0u32; n];
            exps[mu] = 2;
            p.add_term(exps, Rat::one());
        }
        p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub(crate) fn add_term(&mut self, exps: Vec<u32>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        Self { n: self.n, terms }
    }

    /// Partial derivative ∂/∂x_mu.
    pub fn partial(&self, mu: usize) -> Self {
        assert!(mu < self.n);
        let mut out = Self::zero(self.n);
        for (exps, coeff) in &self.terms {
            let e = exps[mu];
            if e == 0 {
                continue;
            }
            let mut de = exps.clone();
            de[mu] = e - 1;
            out.add_term(de, coeff * Rat::from(BigInt::from(e)));
        }
        out
    }

    /// Hodge Laplacian on scalars: Δ = −Σ ∂_μ².
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.n);
        for mu in 0..self.n {
            out = &out - &self.partial(mu).partial(mu);
        }
        out
    }

    /// Split into homogeneous parts, ascending degree; zero parts omitted.
    pub fn homogeneous_parts(&self) -> Vec<(usize, Polynomial)> {
        let mut parts: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            let d: usize = exps.iter().map(|&x| x as usize).sum();
            parts
                .entry(d)
                .or_insert_with(|| Polynomial::zero(self.n))
                .add_term(exps.clone(), coeff.clone());
        }
        parts.into_iter().collect()
    }

    /// Evaluate at a floating-point point (coefficients rounded to f64).
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.n);
        let mut acc = 0.0;
        for (exps, coeff) in &self.terms {
            let mut term = rat_to_f64(coeff);
            for (x, &e) in point.iter().zip(exps.iter()) {
                term *= x.powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.n);
        let mut acc = Rat::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (x, &e) in point.iter().zip(exps.iter()) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n, "polynomials live in different dimensions");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n, "polynomials live in different dimensions");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n, "polynomials live in different dimensions");
        let mut out = Polynomial::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        Polynomial { n: self.n, terms }
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", text::poly_to_text(self))
    }
}

/// Differential k-form with [`Polynomial`] coefficients.
///
/// Components are keyed by [`FormIndex`]; absent components are zero. The
/// zero form of any degree has an empty component map, and zero forms of
/// different recorded degree compare equal (there is only one zero).
#[derive(Clone, Eq, Debug)]
pub struct PolyForm {
    n: usize,
    k: usize,
    components: BTreeMap<FormIndex, Polynomial>,
}

impl PartialEq for PolyForm {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.components == other.components
            && (self.k == other.k || (self.is_zero() && other.is_zero()))
    }
}

impl PolyForm {
    pub fn zero(n: usize, k: usize) -> Self {
        assert!(k <= n, "form degree {k} exceeds dimension {n}");
        Self {
            n,
            k,
            components: BTreeMap::new(),
        }
    }

    /// 0-form wrapping a scalar polynomial.
    pub fn from_scalar(p: Polynomial) -> Self {
        let n = p.ambient_dim();
        let mut f = Self::zero(n, 0);
        f.set_component(FormIndex::scalar(n), p);
        f
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, idx: &FormIndex) -> Polynomial {
        self.components
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.n))
    }

    pub fn components(&self) -> impl Iterator<Item = (&FormIndex, &Polynomial)> {
        self.components.iter()
    }

    /// Insert or overwrite a component; zero polynomials are dropped.
    pub fn set_component(&mut self, idx: FormIndex, p: Polynomial) {
        assert_eq!(idx.ambient_dim(), self.n);
        assert_eq!(idx.degree(), self.k, "component degree must match the form");
        assert_eq!(p.ambient_dim(), self.n);
        if p.is_zero() {
            self.components.remove(&idx);
        } else {
            self.components.insert(idx, p);
        }
    }

    fn add_component(&mut self, idx: FormIndex, p: Polynomial) {
        let sum = &self.component(&idx) + &p;
        self.set_component(idx, sum);
    }

    /// Sum of forms. A zero form is absorbed regardless of its recorded
    /// degree, so degree-boundary results (d at top degree, δ at degree 0)
    /// compose without special cases.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.k, rhs.k, "cannot add forms of different degree");
        let mut out = self.clone();
        for (idx, p) in &rhs.components {
            out.add_component(idx.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for (idx, p) in &self.components {
            out.set_component(idx.clone(), p.scale(s));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    /// Exterior derivative d = Σ ε_μ ∘ ∂_μ; the zero form at top degree.
    pub fn d(&self) -> Self {
        let out_k = (self.k + 1).min(self.n);
        let mut out = Self::zero(self.n, out_k);
        for (idx, p) in &self.components {
            for mu in 0..self.n {
                let dp = p.partial(mu);
                if dp.is_zero() {
                    continue;
                }
                if let Some((sign, target)) = exterior_basis(mu, idx).into_parts() {
                    out.add_component(target, dp.scale(&rat(sign.into(), 1)));
                }
            }
        }
        out
    }

    /// Codifferential δ = −Σ ι_μ ∘ ∂_μ; the zero form at degree 0.
    pub fn delta(&self) -> Self {
        let out_k = self.k.saturating_sub(1);
        let mut out = Self::zero(self.n, out_k);
        for (idx, p) in &self.components {
            for mu in 0..self.n {
                let dp = p.partial(mu);
                if dp.is_zero() {
                    continue;
                }
                if let Some((sign, target)) = interior_basis(mu, idx).into_parts() {
                    out.add_component(target, dp.scale(&rat(-i64::from(sign), 1)));
                }
            }
        }
        out
    }

    /// Hodge Laplacian Δ = dδ + δd = −Σ ∂_μ², applied componentwise.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for (idx, p) in &self.components {
            out.set_component(idx.clone(), p.laplacian());
        }
        out
    }

    /// Hodge star applied to every component label.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.n, self.n - self.k);
        for (idx, p) in &self.components {
            let (sign, target) = hodge_star_basis(idx).into_parts().expect("star is nonzero");
            out.add_component(target, p.scale(&rat(sign.into(), 1)));
        }
        out
    }

    /// Render in the line-oriented text format; see the module docs of
    /// [`PolyForm::parse_text`] for the grammar.
    pub fn to_text(&self) -> String {
        text::form_to_text(self)
    }

    /// Parse the text format produced by [`PolyForm::to_text`].
    pub fn parse_text(input: &str) -> Result<Self> {
        text::parse_form(input)
    }
}

/// Fixture generator: sparse random polynomial with small integer-ratio
/// coefficients, degree ≤ `max_deg`.
pub fn random_polynomial(
    rng: &mut SplitMix64,
    n: usize,
    max_deg: usize,
    max_terms: usize,
) -> Polynomial {
    let mut p = Polynomial::zero(n);
    let terms = 1 + rng.next_below(max_terms as u64) as usize;
    for _ in 0..terms {
        let deg = rng.next_below(max_deg as u64 + 1) as usize;
        let mut exps = vec![0u32; n];
        for _ in 0..deg {
            let axis = rng.next_below(n as u64) as usize;
            exps[axis] += 1;
        }
        let num = rng.next_below(19) as i64 - 9;
        let den = 1 + rng.next_below(4) as i64;
        p.add_term(exps, rat(num, den));
    }
    p
}

/// Fixture generator: random k-form with sparse polynomial components.
pub fn random_polyform(
    rng: &mut SplitMix64,
    n: usize,
    k: usize,
    max_deg: usize,
    max_terms: usize,
) -> PolyForm {
    let mut f = PolyForm::zero(n, k);
    for idx in FormIndex::all(n, k) {
        // Leave roughly a quarter of the components zero.
        if rng.next_below(4) == 0 {
            continue;
        }
        f.set_component(idx, random_polynomial(rng, n, max_deg, max_terms));
    }
    f
}

/// Σ_I θ_I·φ_I as a polynomial; the exact pointwise inner product of two
/// forms of equal degree.
pub fn pointwise_inner(a: &PolyForm, b: &PolyForm) -> Result<Polynomial> {
    if a.ambient_dim() != b.ambient_dim() || a.degree() != b.degree() {
        return Err(Error::DimensionMismatch("pointwise inner product".into()));
    }
    let mut acc = Polynomial::zero(a.ambient_dim());
    for (idx, p) in a.components() {
        let q = b.component(idx);
        if !q.is_zero() {
            acc = &acc + &(p * &q);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_basics() {
        let n = 2;
        let x = Polynomial::var(n, 0);
        let y = Polynomial::var(n, 1);
        let p = &(&x * &x) + &y; // x² + y
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.partial(0), &x + &x);
        assert_eq!(p.partial(1), Polynomial::one(n));
        assert!(Polynomial::zero(n).degree().is_none());
    }

    #[test]
    fn laplacian_examples() {
        // Δ(x₁²) = −2 under Δ = −Σ∂².
        let n = 2;
        let x = Polynomial::var(n, 0);
        let p = &x * &x;
        assert_eq!(p.laplacian(), Polynomial::constant(n, rat(-2, 1)));
        // x₁x₂ is harmonic.
        let xy = &Polynomial::var(n, 0) * &Polynomial::var(n, 1);
        assert!(xy.laplacian().is_zero());
    }

    #[test]
    fn d_examples() {
        let n = 2;
        // d(x₁ dx₂) = dx₁∧dx₂
        let mut f = PolyForm::zero(n, 1);
        f.set_component(FormIndex::new(n, &[1]).unwrap(), Polynomial::var(n, 0));
        let df = f.d();
        assert_eq!(
            df.component(&FormIndex::new(n, &[0, 1]).unwrap()),
            Polynomial::one(n)
        );
        // d(x₁x₂) = x₂ dx₁ + x₁ dx₂
        let g = PolyForm::from_scalar(&Polynomial::var(n, 0) * &Polynomial::var(n, 1));
        let dg = g.d();
        assert_eq!(
            dg.component(&FormIndex::new(n, &[0]).unwrap()),
            Polynomial::var(n, 1)
        );
        assert_eq!(
            dg.component(&FormIndex::new(n, &[1]).unwrap()),
            Polynomial::var(n, 0)
        );
        // d∘d = 0 on x₁²x₂ dx₃ in n=3.
        let n = 3;
        let mut h = PolyForm::zero(n, 1);
        let x1 = Polynomial::var(n, 0);
        let x2 = Polynomial::var(n, 1);
        h.set_component(FormIndex::new(n, &[2]).unwrap(), &(&x1 * &x1) * &x2);
        assert!(h.d().d().is_zero());
    }

    #[test]
    fn delta_examples() {
        let n = 2;
        // δ(x₁ dx₁) = −1
        let mut f = PolyForm::zero(n, 1);
        f.set_component(FormIndex::new(n, &[0]).unwrap(), Polynomial::var(n, 0));
        let df = f.delta();
        assert_eq!(
            df.component(&FormIndex::scalar(n)),
            Polynomial::constant(n, rat(-1, 1))
        );
        // δ(dx₁) = 0 (constant coefficient)
        let mut g = PolyForm::zero(n, 1);
        g.set_component(FormIndex::new(n, &[0]).unwrap(), Polynomial::one(n));
        assert!(g.delta().is_zero());
        // δ(x₂ dx₁) = 0
        let mut h = PolyForm::zero(n, 1);
        h.set_component(FormIndex::new(n, &[0]).unwrap(), Polynomial::var(n, 1));
        assert!(h.delta().is_zero());
    }

    #[test]
    fn laplacian_equals_d_delta_plus_delta_d() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..40 {
            let n = 1 + rng.next_below(4) as usize;
            let k = rng.next_below(n as u64 + 1) as usize;
            let f = random_polyform(&mut rng, n, k, 6, 4);
            let via_dd = f.delta().d().add(&f.d().delta());
            assert_eq!(via_dd, f.laplacian(), "n={n} k={k}");
        }
    }

    #[test]
    fn d_squared_and_delta_squared_vanish() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..40 {
            let n = 1 + rng.next_below(4) as usize;
            let k = rng.next_below(n as u64 + 1) as usize;
            let f = random_polyform(&mut rng, n, k, 6, 4);
            assert!(f.d().d().is_zero());
            assert!(f.delta().delta().is_zero());
        }
    }

    /// δθ = (−1)^{nk+n+1} ⋆d⋆θ, exactly.
    #[test]
    fn delta_equals_signed_star_d_star() {
        let mut rng = SplitMix64::new(13);
        for _ in 0..40 {
            let n = 1 + rng.next_below(4) as usize;
            let k = rng.next_below(n as u64 + 1) as usize;
            let f = random_polyform(&mut rng, n, k, 5, 3);
            let sds = f.star().d().star();
            let sign = if (n * k + n + 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(f.delta(), sds.scale(&rat(sign, 1)), "n={n} k={k}");
        }
    }

    #[test]
    fn star_star_on_forms() {
        let mut rng = SplitMix64::new(17);
        for _ in 0..20 {
            let n = 1 + rng.next_below(4) as usize;
            let k = rng.next_below(n as u64 + 1) as usize;
            let f = random_polyform(&mut rng, n, k, 4, 3);
            let sign = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
            assert_eq!(f.star().star(), f.scale(&rat(sign, 1)));
        }
    }
}
