//! Harmonic decomposition and the constructive inverse Laplacian.
//!
//! Every polynomial f splits uniquely as a finite sum
//! Σ a_{m,ν} |x|^{2m} h_{m,ν} with each h_{m,ν} harmonic and homogeneous of
//! degree ν. For harmonic homogeneous h the Laplacian acts on such blocks by
//!
//! ```text
//! Δ(|x|^{2m+2} h) = −c · |x|^{2m} h,   c = 2(m+1)(2m + 2ν + n),
//! ```
//!
//! under this crate's convention Δ = −Σ∂² (the classical identity carries
//! +c for Δ = +Σ∂²; the sign here is fixed by symbolically applying Δ, see
//! the `radial_block_eigenvalue` test). Dividing by −c term by term inverts
//! Δ exactly, which is what [`inverse_laplacian`] does.
//!
//! The decomposition itself is computed per homogeneous degree by the
//! classical projection recursion: for f homogeneous of degree d the sum
//! h = Σ_j a_j |x|^{2j} (Σ∂²)^j f with
//!
//! ```text
//! a_0 = 1,  a_{j+1} = −a_j / (2(j+1)(2d − 2j + n − 4))
//! ```
//!
//! is harmonic, and f − h is divisible by |x|²; recursing on the quotient
//! terminates because the degree drops by two each round. No linear system
//! is solved and all arithmetic stays in ℚ.

use num_traits::{One, Zero};

use super::{rat, PolyForm, Polynomial, Rat};

/// One block a·|x|^{2m}·h of a harmonic expansion; `harmonic` is homogeneous
/// of degree `nu` and exactly harmonic. The scalar weight is kept separate
/// so the radial factor is explicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicTerm {
    pub m: usize,
    pub nu: usize,
    pub weight: Rat,
    pub harmonic: Polynomial,
}

/// Harmonic expansion of a polynomial: f = Σ weight·|x|^{2m}·h_{m,ν}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicExpansion {
    n: usize,
    pub terms: Vec<HarmonicTerm>,
}

impl HarmonicExpansion {
    /// Re-assemble Σ weight·|x|^{2m}·h; reconstruction is bit-exact.
    pub fn reconstruct(&self) -> Polynomial {
        let norm_sq = Polynomial::norm_sq(self.n);
        let mut acc = Polynomial::zero(self.n);
        for t in &self.terms {
            let mut radial = Polynomial::one(self.n);
            for _ in 0..t.m {
                radial = &radial * &norm_sq;
            }
            acc = &acc + &(&radial * &t.harmonic).scale(&t.weight);
        }
        acc
    }
}

/// (Σ∂²)-eigenfactor of multiplication by |x|^{2j} on homogeneous degree-ν
/// input: Δ_std(|x|^{2j} g) = |x|^{2j} Δ_std g + β |x|^{2j−2} g with
/// β = 2j(2ν + 2j + n − 2).
fn beta(n: usize, j: usize, nu: usize) -> Rat {
    rat((2 * j) as i64, 1) * rat((2 * nu + 2 * j + n - 2) as i64, 1)
}

/// Classical positive-definite-side Laplacian Σ∂², used internally by the
/// projection recursion.
fn laplacian_std(p: &Polynomial) -> Polynomial {
    -&p.laplacian()
}

/// Harmonic projection of a homogeneous polynomial of degree d:
/// returns (h, g) with f = h + |x|²·g, h harmonic homogeneous of degree d
/// and g homogeneous of degree d − 2.
fn split_homogeneous(f: &Polynomial, d: usize) -> (Polynomial, Polynomial) {
    let n = f.ambient_dim();
    // Powers (Σ∂²)^j f until they vanish.
    let mut powers = vec![f.clone()];
    loop {
        let next = laplacian_std(powers.last().unwrap());
        if next.is_zero() {
            break;
        }
        powers.push(next);
    }
    // a_0 = 1, a_{j+1} = −a_j / β_{j+1}(d − 2(j+1)).
    let mut h = f.clone();
    let mut g = Polynomial::zero(n);
    let mut a = Rat::one();
    let norm_sq = Polynomial::norm_sq(n);
    let mut radial = Polynomial::one(n); // |x|^{2(j-1)} in the g accumulator
    for (j, pf) in powers.iter().enumerate().skip(1) {
        let denom = beta(n, j, d - 2 * j);
        a = -(a / denom);
        // h += a_j |x|^{2j} (Σ∂²)^j f, accumulated via g: h = f − |x|²·g.
        g = &g - &(&radial * pf).scale(&a);
        radial = &radial * &norm_sq;
        h = &h + &(&radial * pf).scale(&a);
    }
    (h, g)
}

/// Decompose f as Σ a_{m,ν}|x|^{2m} h_{m,ν} with every h harmonic and
/// homogeneous. Each homogeneous part of f is handled independently; the
/// expansion is unique and reconstruction is exact.
pub fn harmonic_decompose(f: &Polynomial) -> HarmonicExpansion {
    let n = f.ambient_dim();
    let mut terms = Vec::new();
    for (deg, part) in f.homogeneous_parts() {
        let mut m = 0usize;
        let mut current = part;
        let mut d = deg;
        loop {
            if current.is_zero() {
                break;
            }
            if d < 2 {
                // Degree 0 and 1 polynomials are harmonic as they stand.
                terms.push(HarmonicTerm {
                    m,
                    nu: d,
                    weight: Rat::one(),
                    harmonic: current,
                });
                break;
            }
            let (h, g) = split_homogeneous(&current, d);
            if !h.is_zero() {
                terms.push(HarmonicTerm {
                    m,
                    nu: d,
                    weight: Rat::one(),
                    harmonic: h,
                });
            }
            current = g;
            m += 1;
            d -= 2;
        }
    }
    terms.sort_by_key(|t| (t.m, t.nu));
    HarmonicExpansion { n, terms }
}

/// Smallest m with Δ^m f = 0; zero input gives 0. Always terminates with
/// m ≤ ⌊deg f / 2⌋ + 1.
pub fn nilpotency_index(f: &Polynomial) -> usize {
    let mut m = 0;
    let mut current = f.clone();
    while !current.is_zero() {
        current = current.laplacian();
        m += 1;
    }
    m
}

/// Particular solution g of Δg = f, built block by block from the harmonic
/// expansion: the block a|x|^{2m}h with h of degree ν contributes
/// −(a/c)|x|^{2m+2}h, c = 2(m+1)(2m+2ν+n). Exact: Δ(inverse_laplacian(f)) = f
/// bit for bit. The solution is unique up to a harmonic polynomial.
pub fn inverse_laplacian(f: &Polynomial) -> Polynomial {
    let n = f.ambient_dim();
    let expansion = harmonic_decompose(f);
    let norm_sq = Polynomial::norm_sq(n);
    let mut out = Polynomial::zero(n);
    for t in &expansion.terms {
        let c = rat(2 * (t.m as i64 + 1), 1) * rat((2 * t.m + 2 * t.nu + n) as i64, 1);
        let coeff = -(&t.weight / c);
        let mut radial = Polynomial::one(n);
        for _ in 0..(t.m + 1) {
            radial = &radial * &norm_sq;
        }
        out = &out + &(&radial * &t.harmonic).scale(&coeff);
    }
    out
}

/// Componentwise inverse Laplacian of a polynomial form.
pub fn inverse_laplacian_form(f: &PolyForm) -> PolyForm {
    let mut out = PolyForm::zero(f.ambient_dim(), f.degree());
    for (idx, p) in f.components() {
        out.set_component(idx.clone(), inverse_laplacian(p));
    }
    out
}

/// Monomial exponent vectors of total degree d in n variables, in
/// deterministic (lexicographic) order.
fn monomials_of_degree(n: usize, d: usize) -> Vec<Vec<u32>> {
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
    if n == 0 {
        return out;
    }
    rec(0, d as u32, &mut current, &mut out);
    out
}

/// Per-degree kernel audit of Δ on homogeneous scalar polynomials: for each
/// ν ≤ dmax, the dimension of {h homogeneous of degree ν : Δh = 0}, computed
/// by exact rational row reduction of the matrix of Δ.
pub fn kernel_dimension_audit(n: usize, dmax: usize) -> Vec<(usize, usize)> {
    let mut table = Vec::new();
    for nu in 0..=dmax {
        let domain = monomials_of_degree(n, nu);
        let dim_domain = domain.len();
        if nu < 2 {
            // Δ maps into degree ν−2 < 0, so everything is harmonic.
            table.push((nu, dim_domain));
            continue;
        }
        let codomain = monomials_of_degree(n, nu - 2);
        let col_of: std::collections::BTreeMap<&Vec<u32>, usize> =
            codomain.iter().enumerate().map(|(i, e)| (e, i)).collect();
        // Rows: images Δ(x^e) over the codomain monomial basis.
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(dim_domain);
        for exps in &domain {
            let image = Polynomial::monomial(n, exps, Rat::one()).laplacian();
            let mut row = vec![Rat::zero(); codomain.len()];
            for (e, c) in image.terms() {
                row[col_of[&e.to_vec()]] = c.clone();
            }
            rows.push(row);
        }
        let rank = rational_rank(&mut rows);
        table.push((nu, dim_domain - rank));
    }
    table
}

/// Rank by fraction-exact Gaussian elimination.
fn rational_rank(rows: &mut [Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_value = rows[rank][col].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot_value;
            for c in col..ncols {
                let delta = &rows[rank][c] * &factor;
                rows[r][c] = &rows[r][c] - &delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    /// Δ(|x|^{2m+2} h) = −2(m+1)(2m+2ν+n)·|x|^{2m} h for harmonic homogeneous
    /// h: the sign and magnitude this module relies on, checked symbolically.
    #[test]
    fn radial_block_eigenvalue() {
        for n in 1..=4 {
            let norm_sq = Polynomial::norm_sq(n);
            let harmonics: Vec<(usize, Polynomial)> =
                vec![(0, Polynomial::one(n)), (1, Polynomial::var(n, 0))];
            for (nu, h) in harmonics {
                for m in 0..3usize {
                    let mut block = h.clone();
                    for _ in 0..(m + 1) {
                        block = &block * &norm_sq;
                    }
                    let lhs = block.laplacian();
                    let c = rat(
                        2 * (m as i64 + 1) * (2 * m as i64 + 2 * nu as i64 + n as i64),
                        1,
                    );
                    let mut radial = h.clone();
                    for _ in 0..m {
                        radial = &radial * &norm_sq;
                    }
                    assert_eq!(lhs, radial.scale(&-c), "n={n} m={m} nu={nu}");
                }
            }
        }
    }

    #[test]
    fn nilpotency_examples() {
        let n = 2;
        let xy = &Polynomial::var(n, 0) * &Polynomial::var(n, 1);
        assert_eq!(nilpotency_index(&xy), 1);
        assert_eq!(nilpotency_index(&Polynomial::norm_sq(3)), 2);
        assert_eq!(nilpotency_index(&Polynomial::zero(n)), 0);
    }

    #[test]
    fn nilpotency_bound() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let n = 1 + rng.next_below(4) as usize;
            let f = super::super::random_polynomial(&mut rng, n, 6, 4);
            let m = nilpotency_index(&f);
            let bound = f.degree().map(|d| d / 2 + 1).unwrap_or(0);
            assert!(m <= bound, "m={m} exceeds bound {bound} for {f:?}");
        }
    }

    #[test]
    fn decompose_norm_squared() {
        // |x|² in n=3: single block m=1, ν=0, weight·h = 1.
        let f = Polynomial::norm_sq(3);
        let exp = harmonic_decompose(&f);
        assert_eq!(exp.terms.len(), 1);
        let t = &exp.terms[0];
        assert_eq!((t.m, t.nu), (1, 0));
        assert_eq!(t.harmonic.scale(&t.weight), Polynomial::one(3));
        assert_eq!(exp.reconstruct(), f);
    }

    #[test]
    fn decompose_x1_squared() {
        // x₁² in n=2 splits as (x₁²−x₂²)/2 + |x|²/2.
        let n = 2;
        let x = Polynomial::var(n, 0);
        let y = Polynomial::var(n, 1);
        let f = &x * &x;
        let exp = harmonic_decompose(&f);
        assert_eq!(exp.terms.len(), 2);
        let expected_h = (&(&x * &x) - &(&y * &y)).scale(&rat(1, 2));
        let t_harm = exp.terms.iter().find(|t| t.m == 0).unwrap();
        assert_eq!((t_harm.m, t_harm.nu), (0, 2));
        assert_eq!(t_harm.harmonic.scale(&t_harm.weight), expected_h);
        let t_rad = exp.terms.iter().find(|t| t.m == 1).unwrap();
        assert_eq!((t_rad.m, t_rad.nu), (1, 0));
        assert_eq!(
            t_rad.harmonic.scale(&t_rad.weight),
            Polynomial::constant(n, rat(1, 2))
        );
        assert_eq!(exp.reconstruct(), f);
    }

    #[test]
    fn decompose_harmonic_is_identity() {
        // A harmonic homogeneous polynomial is its own single m=0 block.
        let n = 2;
        let xy = &Polynomial::var(n, 0) * &Polynomial::var(n, 1);
        let exp = harmonic_decompose(&xy);
        assert_eq!(exp.terms.len(), 1);
        assert_eq!(exp.terms[0].m, 0);
        assert_eq!(exp.terms[0].weight, Rat::one());
        assert_eq!(exp.terms[0].harmonic, xy);
    }

    #[test]
    fn decomposition_exact_and_harmonic_on_random_corpus() {
        let mut rng = SplitMix64::new(19);
        for _ in 0..60 {
            let n = 1 + rng.next_below(4) as usize;
            let f = super::super::random_polynomial(&mut rng, n, 6, 5);
            let exp = harmonic_decompose(&f);
            assert_eq!(exp.reconstruct(), f);
            for t in &exp.terms {
                assert!(
                    t.harmonic.laplacian().is_zero(),
                    "block not harmonic: {t:?}"
                );
                // Homogeneity of degree ν.
                for (_, part) in t.harmonic.homogeneous_parts() {
                    assert_eq!(part.degree(), Some(t.nu));
                }
            }
        }
    }

    #[test]
    fn inverse_laplacian_examples() {
        // Δ⁻¹(1) = −|x|²/4 in n=2.
        let g = inverse_laplacian(&Polynomial::one(2));
        assert_eq!(g, Polynomial::norm_sq(2).scale(&rat(-1, 4)));
        assert_eq!(g.laplacian(), Polynomial::one(2));
        // Δ⁻¹(x₁) = −|x|²x₁/10 in n=3.
        let x1 = Polynomial::var(3, 0);
        let g = inverse_laplacian(&x1);
        assert_eq!(g, (&Polynomial::norm_sq(3) * &x1).scale(&rat(-1, 10)));
        assert_eq!(g.laplacian(), x1);
    }

    #[test]
    fn inverse_laplacian_right_inverse_on_random_corpus() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..50 {
            let n = 1 + rng.next_below(4) as usize;
            let k = rng.next_below(n as u64 + 1) as usize;
            let f = super::super::random_polyform(&mut rng, n, k, 6, 4);
            let g = inverse_laplacian_form(&f);
            assert_eq!(g.laplacian(), f, "Δ∘Δ⁻¹ must be the identity");
        }
    }

    #[test]
    fn inverse_laplacian_left_inverse_up_to_harmonics() {
        let mut rng = SplitMix64::new(29);
        for _ in 0..30 {
            let n = 1 + rng.next_below(3) as usize;
            let g = super::super::random_polynomial(&mut rng, n, 5, 4);
            let back = inverse_laplacian(&g.laplacian());
            let residue = &back - &g;
            assert!(residue.laplacian().is_zero(), "Δ⁻¹Δg − g must be harmonic");
        }
    }

    #[test]
    fn kernel_audit_known_dimensions() {
        // n=2: dim = 1 at ν=0, 2 for every ν ≥ 1.
        let table = kernel_dimension_audit(2, 8);
        assert_eq!(table[0], (0, 1));
        for (nu, dim) in table.iter().skip(1) {
            assert_eq!(*dim, 2, "n=2 nu={nu}");
        }
        // n=3: dim = 2ν+1.
        let table = kernel_dimension_audit(3, 8);
        for (nu, dim) in &table {
            assert_eq!(*dim, 2 * nu + 1, "n=3 nu={nu}");
        }
        // Every n: ν=1 gives n (all linear forms are harmonic).
        for n in 1..=4 {
            let table = kernel_dimension_audit(n, 1);
            assert_eq!(table[1], (1, n));
        }
    }
}
