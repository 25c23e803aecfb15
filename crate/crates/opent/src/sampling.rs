//! Seeded, reproducible random sampling: Haar unitaries and states, uniform
//! disorder, Gaussian ensembles.
//!
//! The generator is ChaCha12, fixed for the life of the crate so that a
//! `(seed, call sequence)` pair yields bit-identical output across runs and
//! platforms. Parallel workloads fork child streams up front (one fresh
//! 64-bit key per worker index, drawn in order from the parent), then each
//! worker owns its stream exclusively.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{dagger, qr_square, CMatrix, CVector, ZERO};

/// A seeded ChaCha12 stream. Single-owner: fork children for parallel work.
#[derive(Debug, Clone)]
pub struct SeededStream {
    rng: ChaCha12Rng,
    seed: u64,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
            seed,
        }
    }

    /// The seed this stream (or its ancestor) was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fork `n` independent child streams, deterministic in (seed, index).
    pub fn fork(&mut self, n: usize) -> Vec<SeededStream> {
        (0..n)
            .map(|_| {
                let key = self.rng.next_u64();
                SeededStream {
                    rng: ChaCha12Rng::seed_from_u64(key),
                    seed: self.seed,
                }
            })
            .collect()
    }

    /// Standard complex Gaussian: re, im ~ N(0, 1/2) independently.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }
}

/// Haar-random d x d unitary.
///
/// Complex Ginibre followed by QR with the diagonal-phase correction
/// Q <- Q diag(r_jj / |r_jj|); without the correction the QR convention
/// biases the distribution away from Haar.
pub fn haar_unitary(d: usize, rng: &mut SeededStream) -> CMatrix {
    assert!(d >= 1, "haar_unitary needs d >= 1");
    let mut g = Array2::from_elem((d, d), ZERO);
    for i in 0..d {
        for j in 0..d {
            g[[i, j]] = rng.complex_gaussian();
        }
    }
    let (mut q, rdiag) = qr_square(&g).expect("QR of a square Ginibre draw");
    for (j, r) in rdiag.iter().enumerate() {
        let phase = if r.norm() > 0.0 { r / r.norm() } else { Complex64::new(1.0, 0.0) };
        q.column_mut(j).mapv_inplace(|z| z * phase);
    }
    q
}

/// Haar-random unit vector in C^d.
pub fn haar_state(d: usize, rng: &mut SeededStream) -> CVector {
    assert!(d >= 1, "haar_state needs d >= 1");
    let mut v = CVector::from_elem(d, ZERO);
    loop {
        for z in v.iter_mut() {
            *z = rng.complex_gaussian();
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-100 {
            v.mapv_inplace(|z| z / norm);
            return v;
        }
    }
}

/// Haar-random SU(2) element (Haar U(2) with the determinant phase removed).
pub fn haar_su2(rng: &mut SeededStream) -> CMatrix {
    let u = haar_unitary(2, rng);
    let det = u[[0, 0]] * u[[1, 1]] - u[[0, 1]] * u[[1, 0]];
    let phase = det.sqrt();
    u.mapv(|z| z / phase)
}

/// i.i.d. uniform samples on [lo, hi).
pub fn uniform_disorder(count: usize, lo: f64, hi: f64, rng: &mut SeededStream) -> Result<Vec<f64>> {
    if lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "uniform_disorder needs lo < hi, got [{lo}, {hi})"
        )));
    }
    Ok((0..count).map(|_| rng.uniform(lo, hi)).collect())
}

/// GUE-distributed Hermitian matrix, H = (G + G^dag)/2 with G Ginibre.
pub fn gue_hamiltonian(d: usize, rng: &mut SeededStream) -> CMatrix {
    let mut g = Array2::from_elem((d, d), ZERO);
    for i in 0..d {
        for j in 0..d {
            g[[i, j]] = rng.complex_gaussian();
        }
    }
    let gd = dagger(&g);
    (g + gd).mapv(|z| z * Complex64::new(0.5, 0.0))
}

/// Mean and standard error of `f` over `n` samples.
///
/// Sampling is split over a fixed number of forked child streams so the
/// result does not depend on the worker count, and the reduction is pairwise.
pub fn mc_mean<F>(n: usize, rng: &mut SeededStream, f: F) -> (f64, f64)
where
    F: Fn(&mut SeededStream) -> f64 + Sync,
{
    use rayon::prelude::*;
    const CHUNKS: usize = 64;
    let chunks = CHUNKS.min(n.max(1));
    let mut streams = rng.fork(chunks);
    let sizes: Vec<usize> = (0..chunks)
        .map(|k| n / chunks + usize::from(k < n % chunks))
        .collect();
    let samples: Vec<f64> = streams
        .par_iter_mut()
        .zip(sizes.par_iter())
        .flat_map_iter(|(s, &m)| (0..m).map(|_| f(s)).collect::<Vec<_>>())
        .collect();
    mean_and_stderr(&samples)
}

/// Pairwise-summed mean and standard error of a sample vector.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    assert!(n >= 2, "need at least two samples");
    let mean = crate::linalg::pairwise_sum(samples) / n as f64;
    let sq: Vec<f64> = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = crate::linalg::pairwise_sum(&sq) / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_deviation};

    #[test]
    fn haar_unitary_is_unitary_and_reproducible() {
        let mut rng = SeededStream::new(42);
        let u = haar_unitary(5, &mut rng);
        assert!(unitarity_deviation(&u) < 1e-12);

        let u1 = haar_unitary(4, &mut SeededStream::new(7));
        let u2 = haar_unitary(4, &mut SeededStream::new(7));
        assert_eq!(max_abs_diff(&u1, &u2), 0.0);
    }

    #[test]
    fn haar_first_moment() {
        // E|U_11|^2 = 1/d for Haar; 10^4 draws at d=4 within 4 standard errors
        let mut rng = SeededStream::new(1);
        let n = 10_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| haar_unitary(4, &mut rng)[[0, 0]].norm_sqr())
            .collect();
        let (mean, se) = mean_and_stderr(&samples);
        assert!(
            (mean - 0.25).abs() <= 4.0 * se,
            "mean {mean} vs 0.25 (se {se})"
        );
    }

    #[test]
    fn haar_state_normalized_and_reproducible() {
        let mut rng = SeededStream::new(3);
        let v = haar_state(6, &mut rng);
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);

        let a = haar_state(3, &mut SeededStream::new(11));
        let b = haar_state(3, &mut SeededStream::new(11));
        assert_eq!(a, b);
    }

    #[test]
    fn haar_state_average_purity() {
        // purity of Tr_B |psi><psi| over Haar states on C^4 = (d_A+d_B)/(d+1) = 4/5
        let mut rng = SeededStream::new(5);
        let n = 10_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| {
                let psi = haar_state(4, &mut rng);
                // X[a, b] = psi[(a, b)]; purity = ||X^dag X||_F^2
                let x = Array2::from_shape_fn((2, 2), |(a, b)| psi[a * 2 + b]);
                let g = dagger(&x).dot(&x);
                g.iter().map(|z| z.norm_sqr()).sum()
            })
            .collect();
        let (mean, se) = mean_and_stderr(&samples);
        assert!(
            (mean - 0.8).abs() <= 4.0 * se,
            "mean purity {mean} vs 0.8 (se {se})"
        );
    }

    #[test]
    fn haar_su2_has_unit_determinant() {
        let mut rng = SeededStream::new(9);
        for _ in 0..20 {
            let v = haar_su2(&mut rng);
            let det = v[[0, 0]] * v[[1, 1]] - v[[0, 1]] * v[[1, 0]];
            assert!((det - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            assert!(unitarity_deviation(&v) < 1e-12);
        }
    }

    #[test]
    fn uniform_disorder_basics() {
        let mut rng = SeededStream::new(2);
        assert!(uniform_disorder(0, -1.0, 1.0, &mut rng).unwrap().is_empty());
        assert!(uniform_disorder(3, 1.0, 1.0, &mut rng).is_err());

        let n = 100_000;
        let xs = uniform_disorder(n, -10.0, 10.0, &mut rng).unwrap();
        let (mean, se) = mean_and_stderr(&xs);
        assert!(mean.abs() <= 4.0 * se, "mean {mean} (se {se})");
        assert!(xs.iter().all(|&x| (-10.0..10.0).contains(&x)));
    }

    #[test]
    fn forked_streams_are_independent_and_deterministic() {
        let mut a = SeededStream::new(17);
        let mut b = SeededStream::new(17);
        let ka: Vec<f64> = a.fork(4).iter_mut().map(|s| s.uniform(0.0, 1.0)).collect();
        let kb: Vec<f64> = b.fork(4).iter_mut().map(|s| s.uniform(0.0, 1.0)).collect();
        assert_eq!(ka, kb);
        // children differ from each other
        assert!(ka.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn mc_mean_independent_of_thread_count() {
        let f = |s: &mut SeededStream| s.uniform(0.0, 1.0);
        let (m1, _) = mc_mean(1000, &mut SeededStream::new(23), f);
        let (m2, _) = mc_mean(1000, &mut SeededStream::new(23), f);
        assert_eq!(m1, m2);
    }

    #[test]
    fn gue_is_hermitian() {
        let mut rng = SeededStream::new(31);
        let h = gue_hamiltonian(4, &mut rng);
        assert!(crate::linalg::hermiticity_deviation(&h) < 1e-15);
    }
}
