//! Combinatorial exterior algebra on the basis of Λ^k((ℝⁿ)*).
//!
//! A basis covector dx_{i₁}∧…∧dx_{i_k} is labelled by its strictly
//! increasing axis set ([`FormIndex`]). Every operation here is a pure
//! function from basis labels to signed basis labels; the signs are
//! computed from merge parities, never by expanding wedge products
//! symbolically. The defining identities (the volume condition for ⋆,
//! the Clifford anticommutation relation, ⋆⋆ = (−1)^{k(n−k)}) are kept
//! as exhaustive tests instead.
//!
//! Axes are 0-based throughout the library.

use crate::error::{Error, Result};

/// Label of a basis k-covector: a strictly increasing set of axes in `[0, n)`.
///
/// The derived ordering (dimension, then lexicographic on the axis tuple) is
/// the canonical basis enumeration; component maps iterate in this order so
/// serialization is deterministic. Degree 0 is the empty axis set, degree n
/// the full one; neither is special-cased.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FormIndex {
    n: u8,
    axes: Vec<u8>,
}

impl FormIndex {
    /// Build a label from sorted axes. Rejects repeats, out-of-range axes
    /// and unsorted input.
    pub fn new(n: usize, axes: &[usize]) -> Result<Self> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("ambient dimension {n}")));
        }
        let mut prev: Option<usize> = None;
        for &a in axes {
            if a >= n {
                return Err(Error::InvalidArgument(format!(
                    "axis {a} out of range for n={n}"
                )));
            }
            if let Some(p) = prev {
                if a <= p {
                    return Err(Error::InvalidArgument(format!(
                        "axes must be strictly increasing, got {axes:?}"
                    )));
                }
            }
            prev = Some(a);
        }
        Ok(Self {
            n: n as u8,
            axes: axes.iter().map(|&a| a as u8).collect(),
        })
    }

    /// The degree-0 label (empty axis set).
    pub fn scalar(n: usize) -> Self {
        Self::new(n, &[]).expect("scalar index")
    }

    /// The degree-n label (all axes); ⋆1 up to sign.
    pub fn volume(n: usize) -> Self {
        let axes: Vec<usize> = (0..n).collect();
        Self::new(n, &axes).expect("volume index")
    }

    pub fn ambient_dim(&self) -> usize {
        self.n as usize
    }

    /// Form degree k = number of axes.
    pub fn degree(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> impl Iterator<Item = usize> + '_ {
        self.axes.iter().map(|&a| a as usize)
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.axes.binary_search(&(axis as u8)).is_ok()
    }

    /// Axes not present in this label, in increasing order.
    pub fn complement(&self) -> Self {
        let axes: Vec<u8> = (0..self.n).filter(|a| !self.axes.contains(a)).collect();
        Self { n: self.n, axes }
    }

    /// All degree-k labels in dimension n, in canonical (lexicographic) order.
    pub fn all(n: usize, k: usize) -> Vec<Self> {
        assert!(k <= n, "degree {k} exceeds dimension {n}");
        let mut out = Vec::new();
        let mut current: Vec<usize> = Vec::with_capacity(k);
        fn rec(
            n: usize,
            k: usize,
            start: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<FormIndex>,
        ) {
            if current.len() == k {
                out.push(FormIndex::new(n, current).expect("valid combination"));
                return;
            }
            for a in start..n {
                current.push(a);
                rec(n, k, a + 1, current, out);
                current.pop();
            }
        }
        rec(n, k, 0, &mut current, &mut out);
        out
    }
}

impl std::fmt::Display for FormIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.axes.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.axes.iter().map(|a| format!("dx{}", a + 1)).collect();
        write!(f, "{}", parts.join("∧"))
    }
}

/// A basis label with a sign in {−1, 0, +1}; the label is absent exactly
/// when the sign is 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedIndex {
    sign: i32,
    index: Option<FormIndex>,
}

impl SignedIndex {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            index: None,
        }
    }

    pub fn term(sign: i32, index: FormIndex) -> Self {
        assert!(sign == 1 || sign == -1);
        Self {
            sign,
            index: Some(index),
        }
    }

    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn index(&self) -> Option<&FormIndex> {
        self.index.as_ref()
    }

    /// Into (sign, index) for the non-zero case.
    pub fn into_parts(self) -> Option<(i32, FormIndex)> {
        self.index.map(|idx| (self.sign, idx))
    }

    /// Feed the label through another basis operation, multiplying signs.
    pub fn and_then(self, op: impl FnOnce(&FormIndex) -> SignedIndex) -> SignedIndex {
        match self.index {
            None => SignedIndex::zero(),
            Some(idx) => {
                let next = op(&idx);
                match next.index {
                    None => SignedIndex::zero(),
                    Some(nidx) => SignedIndex::term(self.sign * next.sign, nidx),
                }
            }
        }
    }
}

/// Parity of the permutation that merges two disjoint sorted axis lists:
/// the number of pairs (i ∈ a, j ∈ b) with i > j.
fn merge_inversions(a: &FormIndex, b: &FormIndex) -> usize {
    let mut inv = 0;
    for &ai in &a.axes {
        inv += b.axes.iter().filter(|&&bj| bj < ai).count();
    }
    inv
}

/// Wedge of two basis covectors: zero on a shared axis, otherwise the sorted
/// union signed by the merge parity.
pub fn wedge_basis(a: &FormIndex, b: &FormIndex) -> Result<SignedIndex> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(format!(
            "wedge of labels in dimensions {} and {}",
            a.n, b.n
        )));
    }
    if a.axes.iter().any(|ai| b.axes.contains(ai)) {
        return Ok(SignedIndex::zero());
    }
    let sign = if merge_inversions(a, b) % 2 == 0 {
        1
    } else {
        -1
    };
    let mut axes: Vec<u8> = a.axes.iter().chain(b.axes.iter()).copied().collect();
    axes.sort_unstable();
    Ok(SignedIndex::term(sign, FormIndex { n: a.n, axes }))
}

/// Hodge star on a basis covector: the complementary label, signed so that
/// a ∧ ⋆a is exactly the volume form dx₁∧…∧dx_n.
pub fn hodge_star_basis(a: &FormIndex) -> SignedIndex {
    let comp = a.complement();
    // a ∧ comp = sign · vol, so ⋆a = sign · comp.
    let sign = if merge_inversions(a, &comp) % 2 == 0 {
        1
    } else {
        -1
    };
    SignedIndex::term(sign, comp)
}

/// Interior product ι_μ on a basis covector: removes axis μ with the sign
/// (−1)^{position of μ}, zero when μ is absent.
pub fn interior_basis(mu: usize, a: &FormIndex) -> SignedIndex {
    assert!(mu < a.n as usize, "axis {mu} out of range for n={}", a.n);
    match a.axes.binary_search(&(mu as u8)) {
        Err(_) => SignedIndex::zero(),
        Ok(pos) => {
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            let axes: Vec<u8> = a.axes.iter().copied().filter(|&x| x != mu as u8).collect();
            SignedIndex::term(sign, FormIndex { n: a.n, axes })
        }
    }
}

/// Exterior product ε_μ = dx_μ ∧ · on a basis covector.
pub fn exterior_basis(mu: usize, a: &FormIndex) -> SignedIndex {
    assert!(mu < a.n as usize, "axis {mu} out of range for n={}", a.n);
    let dxmu = FormIndex {
        n: a.n,
        axes: vec![mu as u8],
    };
    wedge_basis(&dxmu, a).expect("same dimension")
}
