//! Direct-space validations that never touch the FFT path: Gamma-function
//! constants, radial quadrature of the kernel transform, real-space
//! convolution and singular-integral sums, and polynomial-moment checks.
//!
//! These are the second route of every cross-engine comparison: the
//! spectral engine defines operators through symbols, the functions here
//! define the same operators through their kernels, and the test suites
//! require the two to agree within documented envelopes.

mod gamma;
mod quad;

pub use gamma::{ball_volume, gamma_constant, gamma_fn, sphere_area};
pub use quad::{integrate, radial_integral};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::FormIndex;
use crate::grid::GridForm;

/// Result of one two-sided kernel check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// One row of an oracle report table.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub check: String,
    pub n: usize,
    pub alpha: f64,
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub pass: bool,
}

impl OracleRow {
    pub fn csv_header() -> &'static str {
        "check,n,alpha,params,lhs,rhs,rel_err,pass"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.17e},{:.17e},{:.3e},{}",
            self.check,
            self.n,
            self.alpha,
            self.params,
            self.lhs,
            self.rhs,
            self.rel_err,
            self.pass
        )
    }
}

/// Two-sided Gaussian pairing for the kernel normalization: the transform
/// side ∫|ξ|^{−α} e^{−s|ξ|²} dξ against the kernel side
/// ∫ |x|^{α−n}/γ(n,α) · (π/s)^{n/2} e^{−|x|²/4s} dx, both reduced to radial
/// integrals and evaluated by adaptive quadrature. Equality of the two sides
/// is exactly the statement that |x|^{α−n}/γ(n,α) transforms to |ξ|^{−α}.
pub fn gaussian_pairing_check(n: usize, alpha: f64, s: f64) -> Result<PairingCheck> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Gaussian width s={s} must be positive"
        )));
    }
    let area = sphere_area(n);
    let lhs = area * radial_integral(n as f64 - 1.0 - alpha, s)?;
    let gamma_na = gamma_constant(n, alpha)?;
    let rhs = (std::f64::consts::PI / s).powf(n as f64 / 2.0) / gamma_na
        * area
        * radial_integral(alpha - 1.0, 1.0 / (4.0 * s))?;
    let rel_err = (lhs - rhs).abs() / lhs.abs().max(rhs.abs());
    Ok(PairingCheck { lhs, rhs, rel_err })
}

fn require_scalar_bump(phi: &GridForm) -> Result<&[f64]> {
    if phi.degree() != 0 {
        return Err(Error::InvalidArgument(
            "kernel oracles take scalar (degree 0) fields".into(),
        ));
    }
    Ok(phi.component(&FormIndex::scalar(phi.spec().dim())))
}

/// Fractional integral by real-space quadrature of the convolution
/// φ(y)·|x−y|^{α−n}/γ(n,α) over the box, evaluated at the given flat sample
/// indices. The singular cell at y = x is replaced by the analytic integral
/// of the kernel over the ball of equal volume. The input must leave at
/// least a quarter-box margin per side.
pub fn direct_riesz_potential(phi: &GridForm, alpha: f64, points: &[usize]) -> Result<Vec<f64>> {
    let spec = *phi.spec();
    let n = spec.dim();
    if !(alpha > 0.0 && alpha < n as f64) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < α < n, got α={alpha}, n={n}"
        )));
    }
    if phi.mass_outside_central(2) > 1e-3 {
        return Err(Error::InvalidArgument(
            "margin violation: the field must be concentrated in the central half-box".into(),
        ));
    }
    let data = require_scalar_bump(phi)?;
    let gamma_na = gamma_constant(n, alpha)?;
    let hn = spec.cell_volume();
    // Equal-volume ball: hⁿ = V_n ρⁿ; ∫_{|z|<ρ} |z|^{α−n} dz = |S^{n−1}| ρ^α/α.
    let rho = (hn / ball_volume(n)).powf(1.0 / n as f64);
    let singular_cell = sphere_area(n) * rho.powf(alpha) / alpha;
    let coords: Vec<f64> = (0..spec.size()).map(|i| spec.coord(i)).collect();
    let mut out = Vec::with_capacity(points.len());
    for &target in points {
        if target >= spec.point_count() {
            return Err(Error::InvalidArgument(format!(
                "sample index {target} out of range"
            )));
        }
        let x = decode_coords(&spec, target, &coords);
        let mut acc = 0.0;
        spec.for_each_point(|flat, point| {
            if flat == target {
                return;
            }
            let mut dist2 = 0.0;
            for (axis, &i) in point.iter().enumerate() {
                let d = x[axis] - coords[i];
                dist2 += d * d;
            }
            acc += data[flat] * dist2.powf(0.5 * (alpha - n as f64));
        });
        out.push((acc * hn + data[target] * singular_cell) / gamma_na);
    }
    Ok(out)
}

fn decode_coords(spec: &crate::grid::GridSpec, flat: usize, coords: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; spec.dim()];
    let mut rest = flat;
    for axis in (0..spec.dim()).rev() {
        out[axis] = coords[rest % spec.size()];
        rest /= spec.size();
    }
    out
}

/// Truncated singular integral for the directional Riesz transform:
///
/// ```text
/// T_δφ(x) = c_n Σ_{|x−y| > δ} (x_j − y_j)/|x−y|^{n+1} · φ(y) hⁿ,
/// c_n = Γ((n+1)/2)/π^{(n+1)/2},
/// ```
///
/// with minimal-image (periodic) displacements; displacements touching a
/// half-box plane are skipped since their minimal image is ambiguous. By
/// oddness of the kernel the sum annihilates constants exactly. Converges
/// to the spectral R_j as δ ↓ 0 and N ↑ ∞.
pub fn truncated_riesz_at(
    phi: &GridForm,
    j: usize,
    delta: f64,
    points: &[usize],
) -> Result<Vec<f64>> {
    let spec = *phi.spec();
    let n = spec.dim();
    if j >= n {
        return Err(Error::InvalidArgument(format!(
            "direction {j} out of range for n={n}"
        )));
    }
    if delta < spec.spacing() {
        return Err(Error::InvalidArgument(format!(
            "truncation δ={delta} below the grid spacing {}",
            spec.spacing()
        )));
    }
    let data = require_scalar_bump(phi)?;
    let constant =
        gamma_fn((n as f64 + 1.0) / 2.0) / std::f64::consts::PI.powf((n as f64 + 1.0) / 2.0);
    let hn = spec.cell_volume();
    let l = spec.box_len();
    let half = l / 2.0;
    let delta2 = delta * delta;
    let coords: Vec<f64> = (0..spec.size()).map(|i| spec.coord(i)).collect();
    let mut out = Vec::with_capacity(points.len());
    for &target in points {
        if target >= spec.point_count() {
            return Err(Error::InvalidArgument(format!(
                "sample index {target} out of range"
            )));
        }
        let x = decode_coords(&spec, target, &coords);
        let mut acc = 0.0;
        spec.for_each_point(|flat, point| {
            let mut dist2 = 0.0;
            let mut zj = 0.0;
            let mut skip = false;
            for (axis, &i) in point.iter().enumerate() {
                let mut d = x[axis] - coords[i];
                if d > half {
                    d -= l;
                } else if d < -half {
                    d += l;
                }
                if d.abs() == half {
                    skip = true;
                    break;
                }
                if axis == j {
                    zj = d;
                }
                dist2 += d * d;
            }
            if skip || dist2 <= delta2 {
                return;
            }
            acc += data[flat] * zj * dist2.powf(-0.5 * (n as f64 + 1.0));
        });
        out.push(constant * acc * hn);
    }
    Ok(out)
}

/// Full-field version of [`truncated_riesz_at`]; O(N^{2n}), intended for
/// small grids.
pub fn truncated_riesz_transform(phi: &GridForm, j: usize, delta: f64) -> Result<GridForm> {
    let spec = *phi.spec();
    let points: Vec<usize> = (0..spec.point_count()).collect();
    let values = truncated_riesz_at(phi, j, delta, &points)?;
    let mut out = GridForm::zero(spec, 0);
    out.set_component(FormIndex::scalar(spec.dim()), values)?;
    Ok(out)
}

/// Smallest total degree whose Riemann-sum moment ∫x^μ φ exceeds the
/// threshold 1e−8·‖φ‖₁·L^{|μ|}; returns `mmax + 1` when every moment
/// through degree `mmax` vanishes. A field annihilating all polynomial
/// moments is the discrete stand-in for a Lizorkin test function.
pub fn moment_vanish_order(phi: &GridForm, mmax: usize) -> Result<usize> {
    let spec = *phi.spec();
    let n = spec.dim();
    let data = require_scalar_bump(phi)?;
    let l1 = phi.lp_norm(1.0)?;
    if l1 == 0.0 {
        return Ok(mmax + 1);
    }
    let hn = spec.cell_volume();
    let coords: Vec<f64> = (0..spec.size()).map(|i| spec.coord(i)).collect();
    for degree in 0..=mmax {
        let threshold = 1e-8 * l1 * spec.box_len().powi(degree as i32);
        for exps in multi_indices(n, degree) {
            let mut moment = 0.0;
            spec.for_each_point(|flat, point| {
                let mut monomial = 1.0;
                for (axis, &i) in point.iter().enumerate() {
                    monomial *= coords[i].powi(exps[axis] as i32);
                }
                moment += monomial * data[flat];
            });
            if (moment * hn).abs() > threshold {
                return Ok(degree);
            }
        }
    }
    Ok(mmax + 1)
}

/// Exponent multi-indices of exact total degree.
fn multi_indices(n: usize, degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(axis: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if axis + 1 == current.len() {
            current[axis] = remaining;
            out.push(current.clone());
            return;
        }
        for e in (0..=remaining).rev() {
            current[axis] = e;
            rec(axis + 1, remaining - e, current, out);
        }
    }
    rec(0, degree as u32, &mut current, &mut out);
    out
}

/// Relative L² distance after removing each sample set's mean: the right
/// metric for operators defined modulo constants (the torus remnant of
/// "modulo polynomials").
pub fn compare_modulo_constant(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    assert!(!a.is_empty());
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (ma, mb) = (mean(a), mean(b));
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in a.iter().zip(b.iter()) {
        num += ((x - ma) - (y - mb)).powi(2);
        den += (y - mb).powi(2);
    }
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (num / den).sqrt()
    }
}
