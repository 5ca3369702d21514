//! Differential forms sampled on a periodic cubic grid.
//!
//! The grid is the desk-scale surrogate for forms on ℝⁿ: a centered cube of
//! side `L` with `N` samples per axis (power of two), sample 0 sitting at
//! coordinate −L/2. Test functions are rapidly decaying centered bumps, so
//! periodization error is controlled by the box margin.
//!
//! The spectral convention follows the analyst's transform with phase
//! e^{+i x·ξ}: the forward transform approximates ∫f(x)e^{+ix·ξ}dx as a
//! Riemann sum (factor hⁿ), the inverse is (1/Lⁿ)Σ e^{−ix·ξ}, and the
//! frequency of lattice index j is ξ = (2π/L)·j̃ with j̃ the signed alias in
//! [−N/2, N/2). Under this convention ∂_μ has symbol −iξ_μ and real fields
//! have Hermitian-symmetric coefficients; both facts are pinned by tests.

mod fft;
mod io;

pub use io::{read_form, write_form};

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::FormIndex;
use crate::par;

/// Geometry of the periodic grid: dimension, per-axis sample count and the
/// physical box period.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GridSpec {
    n: usize,
    size: usize,
    box_len: f64,
}

impl GridSpec {
    pub fn new(n: usize, size: usize, box_len: f64) -> Result<Self> {
        if n == 0 || n > 4 {
            return Err(Error::InvalidArgument(format!(
                "grid dimension {n} outside 1..=4"
            )));
        }
        if !size.is_power_of_two() || size < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid size {size} is not a power of two ≥ 2"
            )));
        }
        if !(box_len > 0.0) || !box_len.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "box length {box_len} must be positive"
            )));
        }
        Ok(Self { n, size, box_len })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Samples per axis.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn box_len(&self) -> f64 {
        self.box_len
    }

    /// Grid spacing h = L/N.
    pub fn spacing(&self) -> f64 {
        self.box_len / self.size as f64
    }

    /// Total number of samples Nⁿ.
    pub fn point_count(&self) -> usize {
        self.size.pow(self.n as u32)
    }

    /// hⁿ, the Riemann-sum cell volume.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    /// Physical coordinate of axis index i: the box is centered at the
    /// origin, sample 0 at −L/2.
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - self.size as f64 / 2.0) * self.spacing()
    }

    /// Signed frequency alias j̃ ∈ [−N/2, N/2) of axis index j.
    pub fn alias(&self, j: usize) -> i64 {
        debug_assert!(j < self.size);
        if j < self.size / 2 {
            j as i64
        } else {
            j as i64 - self.size as i64
        }
    }

    /// Angular frequency ξ = (2π/L)·j̃ of axis index j.
    pub fn frequency(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.alias(j) as f64 / self.box_len
    }

    /// Per-axis frequency table (identical for every axis).
    pub fn frequency_table(&self) -> Vec<f64> {
        (0..self.size).map(|j| self.frequency(j)).collect()
    }

    /// Walk all lattice points in flat (row-major, axis 0 slowest) order,
    /// maintaining the per-axis index vector.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[usize])) {
        let mut idx = vec![0usize; self.n];
        let total = self.point_count();
        for flat in 0..total {
            f(flat, &idx);
            for axis in (0..self.n).rev() {
                idx[axis] += 1;
                if idx[axis] < self.size {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }
}

fn dense_components<T: Clone>(spec: &GridSpec, k: usize, fill: T) -> BTreeMap<FormIndex, Vec<T>> {
    FormIndex::all(spec.dim(), k)
        .into_iter()
        .map(|idx| (idx, vec![fill.clone(); spec.point_count()]))
        .collect()
}

/// Real-sampled differential k-form on a [`GridSpec`] lattice.
///
/// Every component is materialized (zero data for zero components), in
/// canonical [`FormIndex`] order. A zero form of mismatched degree is
/// absorbed by [`GridForm::add`], so degree-boundary cases (d at top
/// degree, δ on scalars) compose without special cases.
#[derive(Clone, Debug)]
pub struct GridForm {
    spec: GridSpec,
    k: usize,
    components: BTreeMap<FormIndex, Vec<f64>>,
}

impl GridForm {
    pub fn zero(spec: GridSpec, k: usize) -> Self {
        assert!(
            k <= spec.dim(),
            "form degree {k} exceeds dimension {}",
            spec.dim()
        );
        Self {
            spec,
            k,
            components: dense_components(&spec, k, 0.0),
        }
    }

    pub fn from_scalar_samples(spec: GridSpec, data: Vec<f64>) -> Result<Self> {
        let mut f = Self::zero(spec, 0);
        f.set_component(FormIndex::scalar(spec.dim()), data)?;
        Ok(f)
    }

    /// Scalar field sampled from a closure of the physical coordinates.
    pub fn sample_scalar(spec: GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        let mut data = vec![0.0; spec.point_count()];
        let mut coords = vec![0.0; spec.dim()];
        spec.for_each_point(|flat, idx| {
            for (c, &i) in coords.iter_mut().zip(idx.iter()) {
                *c = spec.coord(i);
            }
            data[flat] = f(&coords);
        });
        Self::from_scalar_samples(spec, data).expect("length matches spec")
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn component(&self, idx: &FormIndex) -> &[f64] {
        self.components.get(idx).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn components(&self) -> impl Iterator<Item = (&FormIndex, &Vec<f64>)> {
        self.components.iter()
    }

    pub fn component_mut(&mut self, idx: &FormIndex) -> Option<&mut Vec<f64>> {
        self.components.get_mut(idx)
    }

    pub fn set_component(&mut self, idx: FormIndex, data: Vec<f64>) -> Result<()> {
        if idx.ambient_dim() != self.spec.dim() || idx.degree() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "component {idx} does not fit a degree-{} form in dimension {}",
                self.k,
                self.spec.dim()
            )));
        }
        if data.len() != self.spec.point_count() {
            return Err(Error::DimensionMismatch(format!(
                "component has {} samples, expected {}",
                data.len(),
                self.spec.point_count()
            )));
        }
        self.components.insert(idx, data);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.components
            .values()
            .all(|v| v.iter().all(|&x| x == 0.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for data in out.components.values_mut() {
            for x in data.iter_mut() {
                *x *= s;
            }
        }
        out
    }

    /// Sum; a zero form of mismatched degree is absorbed.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.spec, rhs.spec, "grids differ");
        if self.k != rhs.k {
            if self.is_zero() {
                return rhs.clone();
            }
            if rhs.is_zero() {
                return self.clone();
            }
            panic!(
                "cannot add nonzero forms of degrees {} and {}",
                self.k, rhs.k
            );
        }
        let mut out = self.clone();
        for (idx, data) in &rhs.components {
            let target = out.components.get_mut(idx).expect("dense components");
            for (t, r) in target.iter_mut().zip(data.iter()) {
                *t += r;
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-1.0))
    }

    /// Riemann-sum L^p norm: (Σ_x |θ(x)|^p hⁿ)^{1/p} with |θ(x)| the
    /// pointwise Euclidean norm over components; `p = ∞` gives the max.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "L^p norm needs p ≥ 1, got {p}"
            )));
        }
        let mut point_sq = vec![0.0f64; self.spec.point_count()];
        for data in self.components.values() {
            for (acc, &x) in point_sq.iter_mut().zip(data.iter()) {
                *acc += x * x;
            }
        }
        if p.is_infinite() {
            return Ok(point_sq.iter().fold(0.0f64, |m, &s| m.max(s)).sqrt());
        }
        let hn = self.spec.cell_volume();
        if p == 2.0 {
            return Ok((point_sq.iter().sum::<f64>() * hn).sqrt());
        }
        let sum: f64 = point_sq.iter().map(|&s| s.powf(p / 2.0)).sum();
        Ok((sum * hn).powf(1.0 / p))
    }

    /// Discrete pairing ⟨θ, φ⟩ = hⁿ Σ_x Σ_I θ_I(x) φ_I(x); the grid analogue
    /// of ∫ θ ∧ ⋆φ. Pairing a zero form of mismatched degree gives 0.
    pub fn pairing(&self, rhs: &Self) -> Result<f64> {
        if self.spec != rhs.spec {
            return Err(Error::DimensionMismatch(
                "pairing of incompatible forms".into(),
            ));
        }
        if self.k != rhs.k {
            if self.is_zero() || rhs.is_zero() {
                return Ok(0.0);
            }
            return Err(Error::DimensionMismatch(
                "pairing of incompatible forms".into(),
            ));
        }
        let mut acc = 0.0;
        for (idx, data) in &self.components {
            let other = rhs.component(idx);
            acc += data
                .iter()
                .zip(other.iter())
                .map(|(a, b)| a * b)
                .sum::<f64>();
        }
        Ok(acc * self.spec.cell_volume())
    }

    /// Mean of one component (plain average of samples).
    pub fn component_mean(&self, idx: &FormIndex) -> f64 {
        let data = self.component(idx);
        if data.is_empty() {
            return 0.0;
        }
        data.iter().sum::<f64>() / data.len() as f64
    }

    /// Subtract every component's mean; returns the largest removed mean in
    /// absolute value.
    pub fn project_mean_zero(&mut self) -> f64 {
        let mut max_mean = 0.0f64;
        let keys: Vec<FormIndex> = self.components.keys().cloned().collect();
        for idx in keys {
            let mean = self.component_mean(&idx);
            max_mean = max_mean.max(mean.abs());
            if mean != 0.0 {
                for x in self.components.get_mut(&idx).unwrap() {
                    *x -= mean;
                }
            }
        }
        max_mean
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .values()
            .flat_map(|v| v.iter())
            .fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    /// Pullback under the dilation x ↦ 2^j·x, with the degree factor t^k of
    /// a k-form. Requires the samples to be concentrated in the central
    /// 2^{−|j|} fraction of the box; the returned flag is true when more
    /// than a 1e−6 fraction of the ℓ¹ mass sits outside that region (the
    /// result then wraps or truncates).
    ///
    /// For j ≥ 0 this resamples on the coarser sub-lattice exactly; for
    /// j < 0 the form is first upsampled by trigonometric interpolation.
    pub fn dilate(&self, j: i32) -> Result<(Self, bool)> {
        if j == 0 {
            return Ok((self.clone(), false));
        }
        let steps = j.unsigned_abs() as usize;
        if steps >= self.spec.size().trailing_zeros() as usize {
            return Err(Error::InvalidArgument(format!(
                "dilation 2^{j} too large for grid size {}",
                self.spec.size()
            )));
        }
        let factor = 1usize << steps;
        let warn = self.mass_outside_central(factor) > 1e-6;
        let t_pow_k = if j >= 0 {
            (factor as f64).powi(self.k as i32)
        } else {
            (factor as f64).powi(-(self.k as i32))
        };
        let n = self.spec.dim();
        let size = self.spec.size();
        let c = size / 2;
        let mut out = GridForm::zero(self.spec, self.k);
        if j > 0 {
            for (idx, data) in &self.components {
                let target = out.components.get_mut(idx).unwrap();
                let mut src = vec![0usize; n];
                self.spec.for_each_point(|flat, point| {
                    let mut in_range = true;
                    for (s, &i) in src.iter_mut().zip(point.iter()) {
                        let offset = i as i64 - c as i64;
                        let mapped = c as i64 + offset * factor as i64;
                        if mapped < 0 || mapped >= size as i64 {
                            in_range = false;
                            break;
                        }
                        *s = mapped as usize;
                    }
                    if in_range {
                        let mut src_flat = 0usize;
                        for &s in &src {
                            src_flat = src_flat * size + s;
                        }
                        target[flat] = t_pow_k * data[src_flat];
                    }
                });
            }
        } else {
            let fine = self.upsample(factor)?;
            let fine_size = fine.spec.size();
            let fine_c = fine_size / 2;
            for (idx, data) in &fine.components {
                let target = out.components.get_mut(idx).unwrap();
                self.spec.for_each_point(|flat, point| {
                    let mut src_flat = 0usize;
                    for &i in point {
                        let mapped = (fine_c as i64 + (i as i64 - c as i64)) as usize;
                        src_flat = src_flat * fine_size + mapped;
                    }
                    target[flat] = t_pow_k * data[src_flat];
                });
            }
        }
        Ok((out, warn))
    }

    /// Fraction of ℓ¹ mass outside the central 1/factor cube.
    pub(crate) fn mass_outside_central(&self, factor: usize) -> f64 {
        let size = self.spec.size();
        let c = size as i64 / 2;
        let half_width = (size / (2 * factor)) as i64;
        let mut outside = 0.0;
        let mut total = 0.0;
        for data in self.components.values() {
            self.spec.for_each_point(|flat, point| {
                let v = data[flat].abs();
                total += v;
                if point.iter().any(|&i| (i as i64 - c).abs() > half_width) {
                    outside += v;
                }
            });
        }
        if total == 0.0 {
            0.0
        } else {
            outside / total
        }
    }

    /// Trigonometric interpolation onto a grid refined by `factor` per axis
    /// (same box). Exact for band-limited data.
    fn upsample(&self, factor: usize) -> Result<Self> {
        let spec = self.spec;
        let fine_spec = GridSpec::new(spec.dim(), spec.size() * factor, spec.box_len())?;
        let spectrum = fft_form(self);
        let mut fine_spectrum = SpectralForm::zero(fine_spec, self.k);
        let coarse_size = spec.size() as i64;
        let nyquist = coarse_size / 2;
        for (idx, data) in &spectrum.components {
            let target = fine_spectrum.components.get_mut(idx).unwrap();
            fine_spec.for_each_point(|flat, point| {
                let mut weight = 1.0;
                let mut src_flat = 0usize;
                for &m in point {
                    let alias = fine_spec.alias(m);
                    if alias.abs() > nyquist {
                        weight = 0.0;
                        break;
                    }
                    if alias.abs() == nyquist {
                        weight *= 0.5;
                    }
                    let src = alias.rem_euclid(coarse_size) as usize;
                    src_flat = src_flat * spec.size() + src;
                }
                if weight != 0.0 {
                    target[flat] = data[src_flat] * weight;
                }
            });
        }
        Ok(ifft_form(&fine_spectrum))
    }
}

/// Fixture generator: independent uniform(−1, 1) samples in every component.
pub fn random_form(rng: &mut crate::rng::SplitMix64, spec: GridSpec, k: usize) -> GridForm {
    let mut f = GridForm::zero(spec, k);
    let keys: Vec<FormIndex> = f.components().map(|(i, _)| i.clone()).collect();
    for idx in keys {
        let data: Vec<f64> = (0..spec.point_count()).map(|_| rng.next_signed()).collect();
        f.set_component(idx, data).expect("fixture matches spec");
    }
    f
}

/// Relative L² distance ‖a − b‖₂ / ‖b‖₂ (zero when both vanish).
pub fn rel_l2_error(a: &GridForm, b: &GridForm) -> f64 {
    let denom = b.lp_norm(2.0).expect("p=2");
    let num = a.sub(b).lp_norm(2.0).expect("p=2");
    if denom == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / denom
    }
}

/// Fourier coefficients of a [`GridForm`]: same component layout, complex
/// entries indexed by the frequency lattice.
#[derive(Clone, Debug)]
pub struct SpectralForm {
    spec: GridSpec,
    k: usize,
    components: BTreeMap<FormIndex, Vec<Complex64>>,
}

impl SpectralForm {
    pub fn zero(spec: GridSpec, k: usize) -> Self {
        assert!(k <= spec.dim());
        Self {
            spec,
            k,
            components: dense_components(&spec, k, Complex64::new(0.0, 0.0)),
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn component(&self, idx: &FormIndex) -> &[Complex64] {
        self.components.get(idx).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn components(&self) -> impl Iterator<Item = (&FormIndex, &Vec<Complex64>)> {
        self.components.iter()
    }

    pub fn component_mut(&mut self, idx: &FormIndex) -> Option<&mut Vec<Complex64>> {
        self.components.get_mut(idx)
    }

    pub fn is_zero(&self) -> bool {
        self.components
            .values()
            .all(|v| v.iter().all(|c| c.norm_sqr() == 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for data in out.components.values_mut() {
            for x in data.iter_mut() {
                *x *= s;
            }
        }
        out
    }

    /// Sum; a zero form of mismatched degree is absorbed.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.spec, rhs.spec, "grids differ");
        if self.k != rhs.k {
            if self.is_zero() {
                return rhs.clone();
            }
            if rhs.is_zero() {
                return self.clone();
            }
            panic!(
                "cannot add nonzero forms of degrees {} and {}",
                self.k, rhs.k
            );
        }
        let mut out = self.clone();
        for (idx, data) in &rhs.components {
            let target = out.components.get_mut(idx).expect("dense components");
            for (t, r) in target.iter_mut().zip(data.iter()) {
                *t += r;
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Zero the ξ = 0 coefficient of every component (the discrete
    /// projection that quotients out constants).
    pub fn zero_dc(&mut self) {
        for data in self.components.values_mut() {
            data[0] = Complex64::new(0.0, 0.0);
        }
    }

    /// Largest DC-coefficient magnitude across components.
    pub fn dc_magnitude(&self) -> f64 {
        self.components
            .values()
            .map(|v| v[0].norm())
            .fold(0.0, f64::max)
    }

    /// Spectral pairing (1/Lⁿ) Σ_ξ Σ_I F_I(ξ)·conj(G_I(ξ)); equals the grid
    /// pairing of the underlying real forms (discrete Parseval). Pairing a
    /// zero form of mismatched degree gives 0.
    pub fn pairing(&self, rhs: &Self) -> Result<Complex64> {
        if self.spec != rhs.spec {
            return Err(Error::DimensionMismatch(
                "pairing of incompatible forms".into(),
            ));
        }
        if self.k != rhs.k {
            if self.is_zero() || rhs.is_zero() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            return Err(Error::DimensionMismatch(
                "pairing of incompatible forms".into(),
            ));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, data) in &self.components {
            let other = rhs.component(idx);
            for (a, b) in data.iter().zip(other.iter()) {
                acc += a * b.conj();
            }
        }
        Ok(acc / self.spec.box_len().powi(self.spec.dim() as i32))
    }

    /// Coefficient-space L² norm, consistent with the grid L² norm.
    pub fn l2_norm(&self) -> f64 {
        let mut acc = 0.0;
        for data in self.components.values() {
            acc += data.iter().map(|c| c.norm_sqr()).sum::<f64>();
        }
        (acc / self.spec.box_len().powi(self.spec.dim() as i32)).sqrt()
    }

    /// Relative coefficient-space distance ‖a − b‖ / ‖b‖.
    pub fn rel_l2_error(&self, rhs: &Self) -> f64 {
        let denom = rhs.l2_norm();
        let num = self.sub(rhs).l2_norm();
        if denom == 0.0 {
            if num == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            num / denom
        }
    }

    /// Deviation from Hermitian symmetry F(−ξ) = conj F(ξ), relative to the
    /// largest coefficient. Roundoff-level for transforms of real fields and
    /// after any multiplier with σ(−ξ) = conj σ(ξ).
    pub fn hermitian_residual(&self) -> f64 {
        let size = self.spec.size();
        let mut max_coeff = 0.0f64;
        let mut max_dev = 0.0f64;
        for data in self.components.values() {
            self.spec.for_each_point(|flat, point| {
                let coeff = data[flat];
                max_coeff = max_coeff.max(coeff.norm());
                let mut neg_flat = 0usize;
                for &m in point {
                    let neg = (size - m) % size;
                    neg_flat = neg_flat * size + neg;
                }
                max_dev = max_dev.max((data[neg_flat] - coeff.conj()).norm());
            });
        }
        if max_coeff == 0.0 {
            0.0
        } else {
            max_dev / max_coeff
        }
    }
}

/// Forward transform of every component: F(ξ_m) = hⁿ Σ_x θ(x) e^{+i x·ξ_m}.
pub fn fft_form(form: &GridForm) -> SpectralForm {
    let spec = *form.spec();
    let hn = spec.cell_volume();
    let mut out = SpectralForm::zero(spec, form.degree());
    let mut jobs: Vec<(&Vec<f64>, &mut Vec<Complex64>)> = out
        .components
        .iter_mut()
        .map(|(idx, dst)| (form.components.get(idx).expect("same layout"), dst))
        .collect();
    par::for_each_mut(&mut jobs, |(src, dst)| {
        let mut buf: Vec<Complex64> = src.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft::dft_axes(&mut buf, spec.dim(), spec.size(), 1.0);
        // Centered-box phase: e^{−iπ·Σ j̃} = (−1)^{Σ j}, plus the hⁿ scale.
        spec.for_each_point(|flat, point| {
            let parity: usize = point.iter().sum();
            let scale = if parity % 2 == 0 { hn } else { -hn };
            dst[flat] = buf[flat] * scale;
        });
    });
    out
}

/// Inverse transform: θ(x_j) = (1/Lⁿ) Σ_m F(ξ_m) e^{−i x_j·ξ_m}, real part.
pub fn ifft_form(spectrum: &SpectralForm) -> GridForm {
    ifft_form_with_residual(spectrum).0
}

/// Inverse transform plus the largest imaginary residue relative to the
/// largest sample; the residue is roundoff-level whenever the spectrum is
/// Hermitian-symmetric.
pub fn ifft_form_with_residual(spectrum: &SpectralForm) -> (GridForm, f64) {
    let spec = *spectrum.spec();
    let scale = 1.0 / spec.box_len().powi(spec.dim() as i32);
    let mut out = GridForm::zero(spec, spectrum.degree());
    let mut jobs: Vec<(&Vec<Complex64>, &mut Vec<f64>, f64)> = out
        .components
        .iter_mut()
        .map(|(idx, dst)| (spectrum.components.get(idx).expect("same layout"), dst, 0.0))
        .collect();
    par::for_each_mut(&mut jobs, |(src, dst, imag)| {
        let mut buf = vec![Complex64::new(0.0, 0.0); src.len()];
        spec.for_each_point(|flat, point| {
            let parity: usize = point.iter().sum();
            let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
            buf[flat] = src[flat] * sign;
        });
        fft::dft_axes(&mut buf, spec.dim(), spec.size(), -1.0);
        let mut max_re = 0.0f64;
        let mut max_im = 0.0f64;
        for (d, b) in dst.iter_mut().zip(buf.iter()) {
            let v = b * scale;
            *d = v.re;
            max_re = max_re.max(v.re.abs());
            max_im = max_im.max(v.im.abs());
        }
        *imag = if max_re == 0.0 {
            max_im
        } else {
            max_im / max_re
        };
    });
    let worst = jobs.iter().map(|(_, _, imag)| *imag).fold(0.0, f64::max);
    (out, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn spec2(n: usize, size: usize, box_len: f64) -> GridSpec {
        GridSpec::new(n, size, box_len).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(0, 8, 1.0).is_err());
        assert!(GridSpec::new(5, 8, 1.0).is_err());
        assert!(GridSpec::new(2, 12, 1.0).is_err());
        assert!(GridSpec::new(2, 8, 0.0).is_err());
        assert!(GridSpec::new(2, 8, -1.0).is_err());
        let s = spec2(2, 8, 4.0);
        assert_eq!(s.spacing(), 0.5);
        assert_eq!(s.alias(3), 3);
        assert_eq!(s.alias(4), -4);
        assert_eq!(s.alias(7), -1);
        assert_eq!(s.coord(4), 0.0);
        assert_eq!(s.coord(0), -2.0);
    }

    #[test]
    fn fft_of_constant_concentrates_at_dc() {
        let spec = spec2(2, 16, 3.0);
        let f = GridForm::sample_scalar(spec, |_| 1.0);
        let spectrum = fft_form(&f);
        let data = spectrum.component(&FormIndex::scalar(2));
        let vol = spec.box_len().powi(2);
        assert!((data[0].re - vol).abs() < 1e-10 * vol);
        assert!(data[0].im.abs() < 1e-10 * vol);
        for &c in &data[1..] {
            assert!(c.norm() < 1e-10 * vol);
        }
    }

    #[test]
    fn fft_of_single_cosine_mode() {
        let spec = spec2(1, 32, 5.0);
        let l = spec.box_len();
        let f = GridForm::sample_scalar(spec, |x| (2.0 * std::f64::consts::PI * x[0] / l).cos());
        let spectrum = fft_form(&f);
        let data = spectrum.component(&FormIndex::scalar(1));
        let expected = l / 2.0;
        // Conjugate pair at j̃ = ±1, i.e. indices 1 and N−1.
        assert!((data[1].re - expected).abs() < 1e-9);
        assert!(data[1].im.abs() < 1e-9);
        assert!((data[31] - data[1].conj()).norm() < 1e-9);
        for (j, &c) in data.iter().enumerate() {
            if j != 1 && j != 31 {
                assert!(c.norm() < 1e-9, "leak at {j}");
            }
        }
    }

    #[test]
    fn roundtrip_identity() {
        let mut rng = SplitMix64::new(5);
        for &(n, size) in &[(1usize, 32usize), (2, 16), (3, 8)] {
            let spec = spec2(n, size, 2.5);
            let k = rng.next_below(n as u64 + 1) as usize;
            let f = random_form(&mut rng, spec, k);
            let (back, imag) = ifft_form_with_residual(&fft_form(&f));
            assert!(imag < 1e-12, "imaginary residue {imag}");
            assert!(rel_l2_error(&back, &f) < 1e-12);
        }
    }

    #[test]
    fn hermitian_symmetry_of_real_transform() {
        let mut rng = SplitMix64::new(9);
        let spec = spec2(2, 16, 1.0);
        let f = random_form(&mut rng, spec, 1);
        assert!(fft_form(&f).hermitian_residual() < 1e-12);
    }

    /// fft(∂f) = (−iξ)·fft(f), checked against an analytic derivative.
    #[test]
    fn differentiation_rule() {
        let spec = spec2(1, 64, 7.0);
        let l = spec.box_len();
        let omega = 2.0 * std::f64::consts::PI * 3.0 / l;
        let f = GridForm::sample_scalar(spec, |x| (omega * x[0]).cos());
        let df = GridForm::sample_scalar(spec, |x| -omega * (omega * x[0]).sin());
        let spectrum_f = fft_form(&f);
        let spectrum_df = fft_form(&df);
        let idx = FormIndex::scalar(1);
        let fd = spectrum_f.component(&idx);
        let dfd = spectrum_df.component(&idx);
        for j in 0..spec.size() {
            let xi = spec.frequency(j);
            let expected = Complex64::new(0.0, -xi) * fd[j];
            assert!((dfd[j] - expected).norm() < 1e-10 * l, "mode {j}");
        }
    }

    /// hⁿ Σ f·g = (1/Lⁿ) Σ F·conj(G), the discrete Parseval identity.
    #[test]
    fn parseval_pairing() {
        let mut rng = SplitMix64::new(21);
        let spec = spec2(2, 16, 3.0);
        for k in 0..=2 {
            let f = random_form(&mut rng, spec, k);
            let g = random_form(&mut rng, spec, k);
            let grid_pairing = f.pairing(&g).unwrap();
            let spectral = fft_form(&f).pairing(&fft_form(&g)).unwrap();
            assert!((grid_pairing - spectral.re).abs() < 1e-10 * grid_pairing.abs().max(1.0));
            assert!(spectral.im.abs() < 1e-10 * grid_pairing.abs().max(1.0));
        }
    }

    #[test]
    fn lp_norm_examples() {
        let spec = spec2(2, 16, 1.0);
        let one = GridForm::sample_scalar(spec, |_| 1.0);
        for p in [1.0, 1.5, 2.0, 3.0] {
            assert!((one.lp_norm(p).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((one.lp_norm(f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
        assert!(one.lp_norm(0.5).is_err());
        // Homogeneity: ‖c·f‖ = |c|·‖f‖.
        let mut rng = SplitMix64::new(33);
        let f = random_form(&mut rng, spec, 1);
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            let a = f.scale(-3.5).lp_norm(p).unwrap();
            let b = 3.5 * f.lp_norm(p).unwrap();
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    /// Sampled Gaussian L^p norms against the closed-form radial integral
    /// ∫ e^{−p|x|²} dx = (π/p)^{n/2}.
    #[test]
    fn gaussian_norm_against_gamma_integral() {
        for n in 1..=2usize {
            let spec = spec2(n, 64, 14.0);
            let g =
                GridForm::sample_scalar(spec, |x| (-x.iter().map(|v| v * v).sum::<f64>()).exp());
            for p in [1.0, 2.0, 3.0] {
                let expected = (std::f64::consts::PI / p).powf(n as f64 / (2.0 * p));
                let got = g.lp_norm(p).unwrap();
                assert!(
                    (got - expected).abs() < 1e-6 * expected,
                    "n={n} p={p}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn dilate_identity_and_norm_scaling() {
        let spec = spec2(2, 128, 8.0);
        let bump = GridForm::sample_scalar(spec, |x| {
            (-6.0 * x.iter().map(|v| v * v).sum::<f64>()).exp()
        });
        let (same, warn) = bump.dilate(0).unwrap();
        assert!(!warn);
        assert_eq!(rel_l2_error(&same, &bump), 0.0);
        // ‖h_t^* f‖_s = t^{−n/s} ‖f‖_s for a scalar (t = 2, n = 2).
        let (dilated, warn) = bump.dilate(1).unwrap();
        assert!(!warn, "bump is concentrated in the central half");
        for s in [1.5, 2.0, 3.0] {
            let lhs = dilated.lp_norm(s).unwrap();
            let rhs = 2.0f64.powf(-2.0 / s) * bump.lp_norm(s).unwrap();
            assert!((lhs - rhs).abs() < 1e-3 * rhs, "s={s}: {lhs} vs {rhs}");
        }
        // 1-form pullback picks up one extra factor of t.
        let mut one_form = GridForm::zero(spec, 1);
        one_form
            .set_component(
                FormIndex::new(2, &[0]).unwrap(),
                bump.component(&FormIndex::scalar(2)).to_vec(),
            )
            .unwrap();
        let (dilated, _) = one_form.dilate(1).unwrap();
        for s in [1.5, 2.0, 3.0] {
            let lhs = dilated.lp_norm(s).unwrap();
            let rhs = 2.0f64.powf(1.0 - 2.0 / s) * one_form.lp_norm(s).unwrap();
            assert!((lhs - rhs).abs() < 1e-3 * rhs, "s={s}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn dilate_down_then_up_roundtrips_bandlimited() {
        let spec = spec2(2, 64, 8.0);
        let bump = GridForm::sample_scalar(spec, |x| {
            (-6.0 * x.iter().map(|v| v * v).sum::<f64>()).exp()
        });
        let (down, warn_down) = bump.dilate(-1).unwrap();
        assert!(!warn_down);
        let (back, _) = down.dilate(1).unwrap();
        // h_2^* h_{1/2}^* = id up to interpolation error at this resolution.
        assert!(rel_l2_error(&back, &bump) < 1e-6);
    }

    #[test]
    fn dilate_flags_support_violation() {
        let spec = spec2(1, 64, 2.0);
        // Mass pushed to the box edge.
        let f =
            GridForm::sample_scalar(spec, |x| ((x[0] - 0.9) * 40.0).exp() / (1.0 + x[0] * x[0]));
        let (_, warn) = f.dilate(1).unwrap();
        assert!(warn);
    }

    #[test]
    fn dilate_rejects_oversized_steps() {
        let spec = spec2(1, 8, 1.0);
        let f = GridForm::zero(spec, 0);
        assert!(f.dilate(3).is_err());
        assert!(f.dilate(-3).is_err());
    }
}
