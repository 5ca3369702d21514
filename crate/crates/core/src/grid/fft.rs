//! Radix-2 complex FFT over the axes of a cubic lattice.
//!
//! Only the unnormalized kernels Σ x_j e^{±2πi jm/N} live here; the
//! physical normalization (spacing factors and the centered-box phase) is
//! applied by the callers in the parent module. Power-of-two sizes only.

use num_complex::Complex64;

/// In-place bit-reversal permutation.
fn bit_reverse(buf: &mut [Complex64]) {
    let n = buf.len();
    let mut j = 0usize;
    for i in 0..n {
        if i < j {
            buf.swap(i, j);
        }
        let mut mask = n >> 1;
        while mask > 0 && j & mask != 0 {
            j ^= mask;
            mask >>= 1;
        }
        j |= mask;
    }
}

/// Twiddle table e^{sign·2πi·j/N} for j < N/2.
fn twiddles(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n / 2)
        .map(|j| {
            let angle = sign * 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect()
}

/// In-place transform X_m = Σ_j x_j e^{sign·2πi·jm/N}; `tw` must come from
/// [`twiddles`] with the same sign and length.
fn fft_in_place(buf: &mut [Complex64], tw: &[Complex64]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    debug_assert_eq!(tw.len(), n / 2);
    bit_reverse(buf);
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for block in (0..n).step_by(len) {
            for i in 0..len / 2 {
                let w = tw[i * step];
                let a = buf[block + i];
                let b = buf[block + i + len / 2] * w;
                buf[block + i] = a + b;
                buf[block + i + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Apply the 1-D kernel along every axis of an `n_axes`-dimensional cube of
/// side `size`, axis 0 slowest (row-major). `sign` is the exponent sign.
pub(crate) fn dft_axes(data: &mut [Complex64], n_axes: usize, size: usize, sign: f64) {
    assert!(size.is_power_of_two(), "grid size must be a power of two");
    assert_eq!(data.len(), size.pow(n_axes as u32));
    if size == 1 {
        return;
    }
    let tw = twiddles(size, sign);
    let mut line = vec![Complex64::new(0.0, 0.0); size];
    for axis in 0..n_axes {
        let stride = size.pow((n_axes - 1 - axis) as u32);
        // Lines along `axis` start at indices whose axis-coordinate is 0:
        // flat = outer*stride*size + inner with inner < stride.
        let outer_count = data.len() / (stride * size);
        for outer in 0..outer_count {
            for inner in 0..stride {
                let base = outer * stride * size + inner;
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + t * stride];
                }
                fft_in_place(&mut line, &tw);
                for (t, slot) in line.iter().enumerate() {
                    data[base + t * stride] = *slot;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|m| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &v) in x.iter().enumerate() {
                    let angle = sign * 2.0 * std::f64::consts::PI * (j * m % n) as f64 / n as f64;
                    acc += v * Complex64::new(angle.cos(), angle.sin());
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let mut state = 0x12345u64;
        let mut rand = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for &n in &[1usize, 2, 4, 8, 16, 64] {
            let x: Vec<Complex64> = (0..n).map(|_| Complex64::new(rand(), rand())).collect();
            for sign in [1.0, -1.0] {
                let expected = naive_dft(&x, sign);
                let mut got = x.clone();
                if n > 1 {
                    let tw = twiddles(n, sign);
                    fft_in_place(&mut got, &tw);
                }
                for (g, e) in got.iter().zip(expected.iter()) {
                    assert!((g - e).norm() < 1e-9 * (n as f64), "n={n} sign={sign}");
                }
            }
        }
    }

    #[test]
    fn axes_transform_is_separable() {
        // 2-D transform equals nested 1-D transforms.
        let size = 8;
        let mut state = 7u64;
        let mut rand = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let data: Vec<Complex64> = (0..size * size)
            .map(|_| Complex64::new(rand(), rand()))
            .collect();
        let mut fast = data.clone();
        dft_axes(&mut fast, 2, size, -1.0);
        // Rows then columns, naively.
        let mut slow = data.clone();
        for r in 0..size {
            let row: Vec<Complex64> = (0..size).map(|c| slow[r * size + c]).collect();
            let out = naive_dft(&row, -1.0);
            for (c, v) in out.into_iter().enumerate() {
                slow[r * size + c] = v;
            }
        }
        for c in 0..size {
            let col: Vec<Complex64> = (0..size).map(|r| slow[r * size + c]).collect();
            let out = naive_dft(&col, -1.0);
            for (r, v) in out.into_iter().enumerate() {
                slow[r * size + c] = v;
            }
        }
        for (f, s) in fast.iter().zip(slow.iter()) {
            assert!((f - s).norm() < 1e-9);
        }
    }

    #[test]
    fn forward_backward_is_scaling() {
        let size = 16;
        let data: Vec<Complex64> = (0..size * size)
            .map(|i| Complex64::new(i as f64, (i % 7) as f64))
            .collect();
        let mut buf = data.clone();
        dft_axes(&mut buf, 2, size, 1.0);
        dft_axes(&mut buf, 2, size, -1.0);
        let scale = (size * size) as f64;
        for (b, d) in buf.iter().zip(data.iter()) {
            assert!((b / scale - d).norm() < 1e-9);
        }
    }
}
