//! Adaptive Gauss–Kronrod quadrature and the radial integrals used by the
//! kernel checks.

use crate::error::{Error, Result};

// 7/15-point Gauss–Kronrod pair on [−1, 1] (positive abscissae).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod panel: (kronrod value, |kronrod − gauss|).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half.abs())
}

/// Globally adaptive integral of `f` over [a, b] to the requested relative
/// tolerance; bisects the worst panel first.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(b > a) {
        return Err(Error::InvalidArgument(format!("bad interval [{a}, {b}]")));
    }
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }
    let (value, error) = gk15(&f, a, b);
    let mut panels = vec![Panel { a, b, value, error }];
    for _ in 0..2000 {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= rel_tol * total.abs().max(f64::MIN_POSITIVE) {
            return Ok(total);
        }
        // Split the panel with the largest error estimate.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("nonempty");
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Err(Error::QuadratureNonConvergence(format!(
                "interval [{a}, {b}] cannot be bisected further"
            )));
        }
        let (lv, le) = gk15(&f, a, mid);
        let (rv, re) = gk15(&f, mid, b);
        panels.push(Panel {
            a,
            b: mid,
            value: lv,
            error: le,
        });
        panels.push(Panel {
            a: mid,
            b,
            value: rv,
            error: re,
        });
    }
    Err(Error::QuadratureNonConvergence(
        "panel budget exhausted".into(),
    ))
}

/// ∫₀^∞ r^β e^{−c r²} dr for β > −1, c > 0, to relative accuracy ~1e−10.
///
/// The substitution r = u^p with p ≥ 1/(β+1) turns an integrable endpoint
/// singularity into a smooth integrand; the upper limit is cut where the
/// exponential underflows.
pub fn radial_integral(beta: f64, c: f64) -> Result<f64> {
    if !(beta > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "radial exponent β={beta} ≤ −1 diverges"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "decay rate c={c} must be positive"
        )));
    }
    let p = if beta >= 0.0 {
        1.0
    } else {
        (2.0 / (beta + 1.0)).ceil()
    };
    // exp(−c u^{2p}) < 1e−320 beyond this point.
    let upper = (745.0 / c).powf(1.0 / (2.0 * p)) * 1.02;
    let integrand = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        p * u.powf(p * (beta + 1.0) - 1.0) * (-c * u.powf(2.0 * p)).exp()
    };
    integrate(integrand, 0.0, upper, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gamma::gamma_fn;

    #[test]
    fn integrates_polynomials_exactly() {
        // K15 is exact well beyond cubic.
        let v = integrate(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - (4.0 - 4.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // ∫₀¹ 1/√x dx = 2, integrable endpoint singularity.
        let v = integrate(|x| if x > 0.0 { x.powf(-0.5) } else { 0.0 }, 0.0, 1.0, 1e-9).unwrap();
        assert!((v - 2.0).abs() < 1e-7, "{v}");
    }

    #[test]
    fn radial_integral_matches_gamma_closed_form() {
        // ∫₀^∞ r^β e^{−cr²} dr = Γ((β+1)/2) / (2 c^{(β+1)/2}).
        for &(beta, c) in &[
            (0.0, 1.0),
            (1.0, 2.0),
            (2.5, 0.5),
            (-0.5, 1.0),
            (-0.9, 3.0),
            (4.0, 0.25),
        ] {
            let got = radial_integral(beta, c).unwrap();
            let expected = gamma_fn((beta + 1.0) / 2.0) / (2.0 * c.powf((beta + 1.0) / 2.0));
            assert!(
                (got - expected).abs() < 1e-9 * expected,
                "β={beta} c={c}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn rejects_divergent_inputs() {
        assert!(radial_integral(-1.0, 1.0).is_err());
        assert!(radial_integral(0.0, 0.0).is_err());
        assert!(integrate(|x| x, 1.0, 0.0, 1e-8).is_err());
    }
}
