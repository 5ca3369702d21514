//! The `verify-algebra` suites: exhaustive sign laws of the basis algebra
//! and bit-exact identities of the polynomial calculus, reported one line
//! per identity.

use hodge_forms::exterior::{
    exterior_basis, hodge_star_basis, interior_basis, wedge_basis, FormIndex, SignedIndex,
};
use hodge_forms::poly::{
    harmonic_decompose, inverse_laplacian_form, nilpotency_index, random_polyform,
    random_polynomial, rat,
};
use hodge_forms::rng::SplitMix64;

pub struct IdentityResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn run(
    name: &'static str,
    fault: Option<&str>,
    body: impl Fn() -> Result<(), String>,
) -> IdentityResult {
    let mut result = match body() {
        Ok(()) => IdentityResult {
            name,
            pass: true,
            detail: String::new(),
        },
        Err(detail) => IdentityResult {
            name,
            pass: false,
            detail,
        },
    };
    if fault == Some(name) {
        // Test hook: deliberately report this identity as broken.
        result.pass = !result.pass;
        result.detail = "fault injected".to_string();
    }
    result
}

/// Exhaustive exterior-algebra sign laws for every basis element, n ≤ n_max.
pub fn exterior_suite(n_max: usize, fault: Option<&str>) -> Vec<IdentityResult> {
    let mut results = Vec::new();

    results.push(run("star-volume-condition", fault, || {
        for n in 1..=n_max {
            for k in 0..=n {
                for a in FormIndex::all(n, k) {
                    let (s, comp) = hodge_star_basis(&a).into_parts().expect("nonzero");
                    let (ws, widx) = wedge_basis(&a, &comp)
                        .map_err(|e| e.to_string())?
                        .into_parts()
                        .ok_or("wedge with complement vanished")?;
                    if widx != FormIndex::volume(n) || s * ws != 1 {
                        return Err(format!("a∧⋆a ≠ vol at n={n} a={a}"));
                    }
                }
            }
        }
        Ok(())
    }));

    results.push(run("star-involution", fault, || {
        for n in 1..=n_max {
            for k in 0..=n {
                let sign = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
                for a in FormIndex::all(n, k) {
                    let ss = hodge_star_basis(&a).and_then(hodge_star_basis);
                    if ss != SignedIndex::term(sign, a.clone()) {
                        return Err(format!("⋆⋆ ≠ (−1)^(k(n−k)) at n={n} a={a}"));
                    }
                }
            }
        }
        Ok(())
    }));

    results.push(run("interior-star-conjugation", fault, || {
        for n in 1..=n_max {
            for k in 0..=n {
                let sign = if (n * k + n) % 2 == 0 { 1 } else { -1 };
                for a in FormIndex::all(n, k) {
                    for mu in 0..n {
                        let lhs = interior_basis(mu, &a);
                        let rhs = hodge_star_basis(&a)
                            .and_then(|b| exterior_basis(mu, b))
                            .and_then(hodge_star_basis);
                        let rhs = match rhs.into_parts() {
                            None => SignedIndex::zero(),
                            Some((s, i)) => SignedIndex::term(s * sign, i),
                        };
                        if lhs != rhs {
                            return Err(format!("ι ≠ ±⋆ε⋆ at n={n} mu={mu} a={a}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }));

    results.push(run("clifford-anticommutation", fault, || {
        for n in 1..=n_max {
            for k in 0..=n {
                for a in FormIndex::all(n, k) {
                    for mu in 0..n {
                        for nu in 0..n {
                            let t1 = exterior_basis(nu, &a).and_then(|b| interior_basis(mu, b));
                            let t2 = interior_basis(mu, &a).and_then(|b| exterior_basis(nu, b));
                            let coeff = |t: &SignedIndex| match t.index() {
                                Some(i) if *i == a => t.sign(),
                                _ => 0,
                            };
                            let expected = i32::from(mu == nu);
                            if coeff(&t1) + coeff(&t2) != expected {
                                return Err(format!("ιε+ει ≠ δ·Id at n={n} a={a} mu={mu} nu={nu}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }));

    results
}

/// Bit-exact polynomial-calculus identities on a seeded random corpus.
pub fn polyform_suite(
    n_max: usize,
    forms: usize,
    seed: u64,
    fault: Option<&str>,
) -> Vec<IdentityResult> {
    let n_cap = n_max.min(4);
    let corpus: Vec<_> = {
        let mut rng = SplitMix64::new(seed);
        (0..forms)
            .map(|_| {
                let n = 1 + rng.next_below(n_cap as u64) as usize;
                let k = rng.next_below(n as u64 + 1) as usize;
                random_polyform(&mut rng, n, k, 6, 4)
            })
            .collect()
    };
    let mut results = Vec::new();

    results.push(run("d-squared-zero", fault, || {
        for f in &corpus {
            if !f.d().d().is_zero() {
                return Err("d∘d ≠ 0".into());
            }
        }
        Ok(())
    }));

    results.push(run("delta-squared-zero", fault, || {
        for f in &corpus {
            if !f.delta().delta().is_zero() {
                return Err("δ∘δ ≠ 0".into());
            }
        }
        Ok(())
    }));

    results.push(run("laplacian-anticommutator", fault, || {
        for f in &corpus {
            if f.d().delta().add(&f.delta().d()) != f.laplacian() {
                return Err("dδ + δd ≠ Δ".into());
            }
        }
        Ok(())
    }));

    results.push(run("codifferential-star-route", fault, || {
        for f in &corpus {
            let sign = if (f.ambient_dim() * f.degree() + f.ambient_dim() + 1) % 2 == 0 {
                1
            } else {
                -1
            };
            if f.delta() != f.star().d().star().scale(&rat(sign, 1)) {
                return Err("δ ≠ (−1)^(nk+n+1)⋆d⋆".into());
            }
        }
        Ok(())
    }));

    results.push(run("inverse-laplacian-right-inverse", fault, || {
        for f in &corpus {
            if inverse_laplacian_form(f).laplacian() != *f {
                return Err("Δ∘Δ⁻¹ ≠ Id".into());
            }
        }
        Ok(())
    }));

    results.push(run("harmonic-decomposition-exact", fault, || {
        let mut rng = SplitMix64::new(seed ^ 0x5eed);
        for _ in 0..forms {
            let n = 1 + rng.next_below(n_cap as u64) as usize;
            let p = random_polynomial(&mut rng, n, 6, 4);
            let expansion = harmonic_decompose(&p);
            if expansion.reconstruct() != p {
                return Err("reconstruction differs from input".into());
            }
            for term in &expansion.terms {
                if !term.harmonic.laplacian().is_zero() {
                    return Err(format!("non-harmonic block at m={} nu={}", term.m, term.nu));
                }
            }
        }
        Ok(())
    }));

    results.push(run("nilpotency-bound", fault, || {
        let mut rng = SplitMix64::new(seed ^ 0xfeed);
        for _ in 0..forms {
            let n = 1 + rng.next_below(n_cap as u64) as usize;
            let p = random_polynomial(&mut rng, n, 6, 4);
            let m = nilpotency_index(&p);
            let bound = p.degree().map(|d| d / 2 + 1).unwrap_or(0);
            if m > bound {
                return Err(format!("index {m} exceeds bound {bound}"));
            }
        }
        Ok(())
    }));

    results
}
