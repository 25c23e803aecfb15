//! Dense complex linear algebra over tensor-product Hilbert spaces.
//!
//! Matrices are `ndarray::Array2<Complex64>` in row-major layout; a composite
//! index over factors `[d_0, d_1, ...]` is flattened with factor 0 most
//! significant, so `kron(a, b)` places `a` on factor 0. Eigendecompositions
//! and QR go straight to LAPACK (`zheev`, `zgeqrf`/`zungqr`) through
//! column-major buffers owned by this module; everything else is pure ndarray.

use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Array2<Complex64>;
pub type CVector = Array1<Complex64>;

/// Default absolute tolerance on matrix entries for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-12;
/// Default absolute tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn identity(d: usize) -> CMatrix {
    Array2::eye(d)
}

/// Conjugate transpose, materialized in standard layout.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

pub fn sigma_x() -> CMatrix {
    ndarray::array![[ZERO, ONE], [ONE, ZERO]]
}

pub fn sigma_y() -> CMatrix {
    ndarray::array![[ZERO, -I], [I, ZERO]]
}

pub fn sigma_z() -> CMatrix {
    ndarray::array![[ONE, ZERO], [ZERO, -ONE]]
}

/// Kronecker product; `a` becomes the most significant factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[[i, j]];
            if aij == ZERO {
                continue;
            }
            let mut block = out.slice_mut(ndarray::s![i * rb..(i + 1) * rb, j * cb..(j + 1) * cb]);
            Zip::from(&mut block).and(b).for_each(|o, &bkl| *o = aij * bkl);
        }
    }
    out
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape mismatch in max_abs_diff");
    Zip::from(a)
        .and(b)
        .fold(0.0f64, |acc, x, y| acc.max((x - y).norm()))
}

/// max |U^dag U - 1|.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let g = dagger(u).dot(u);
    let d = g.nrows();
    let mut dev = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((g[[i, j]] - target).norm());
        }
    }
    dev
}

pub fn hermiticity_deviation(h: &CMatrix) -> f64 {
    let d = h.nrows();
    let mut dev = 0.0f64;
    for i in 0..d {
        for j in i..d {
            dev = dev.max((h[[i, j]] - h[[j, i]].conj()).norm());
        }
    }
    dev
}

pub fn ensure_unitary(u: &CMatrix, tol: f64) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let dev = unitarity_deviation(u);
    if dev > tol {
        return Err(Error::NotUnitary { max_dev: dev, tol });
    }
    Ok(())
}

pub fn ensure_hermitian(h: &CMatrix, tol: f64) -> Result<()> {
    if h.nrows() != h.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let dev = hermiticity_deviation(h);
    if dev > tol {
        return Err(Error::NotHermitian { max_dev: dev, tol });
    }
    Ok(())
}

/// Hilbert-Schmidt norm squared and spectral norm of a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// Tr(M^dag M).
    pub two_norm_sq: f64,
    /// Largest singular value.
    pub spectral_norm: f64,
}

pub fn two_norm_sq(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest singular value, via the top eigenvalue of M^dag M.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    // Gram on the smaller side.
    let g = if m.nrows() >= m.ncols() {
        dagger(m).dot(m)
    } else {
        m.dot(&dagger(m))
    };
    let (vals, _) = eigh(&g).expect("Gram matrix must be Hermitian");
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

pub fn norms(m: &CMatrix) -> Norms {
    Norms {
        two_norm_sq: two_norm_sq(m),
        spectral_norm: spectral_norm(m),
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the unitary of eigenvectors as
/// columns, so `h = v diag(w) v^dag`. The input is handed to LAPACK `zheev`
/// through an explicit column-major copy; only the lower triangle is read.
pub fn eigh(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::Dimension(format!(
            "eigh needs a square matrix, got {}x{}",
            n,
            h.ncols()
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), Array2::zeros((0, 0))));
    }
    let mut a = vec![ZERO; n * n];
    for j in 0..n {
        for i in 0..n {
            a[i + j * n] = h[[i, j]];
        }
    }
    let mut w = vec![0.0f64; n];
    let mut info = 0;
    // workspace query
    let mut work = vec![ZERO; 1];
    let mut rwork = vec![0.0f64; (3 * n - 2).max(1)];
    unsafe {
        lapack::zheev(
            b'V', b'L', n as i32, &mut a, n as i32, &mut w, &mut work, -1, &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zheev", info });
    }
    let lwork = work[0].re as i32;
    let mut work = vec![ZERO; lwork.max(1) as usize];
    unsafe {
        lapack::zheev(
            b'V', b'L', n as i32, &mut a, n as i32, &mut w, &mut work, lwork, &mut rwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zheev", info });
    }
    let mut v = Array2::zeros((n, n));
    for j in 0..n {
        for i in 0..n {
            v[[i, j]] = a[i + j * n];
        }
    }
    Ok((w, v))
}

/// QR of a square matrix; returns Q and the diagonal of R.
pub fn qr_square(m: &CMatrix) -> Result<(CMatrix, Vec<Complex64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Dimension(format!(
            "qr_square needs a square matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    let mut a = vec![ZERO; n * n];
    for j in 0..n {
        for i in 0..n {
            a[i + j * n] = m[[i, j]];
        }
    }
    let mut tau = vec![ZERO; n];
    let lwork = (4 * n).max(1) as i32;
    let mut work = vec![ZERO; lwork as usize];
    let mut info = 0;
    unsafe {
        lapack::zgeqrf(
            n as i32, n as i32, &mut a, n as i32, &mut tau, &mut work, lwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgeqrf", info });
    }
    let rdiag: Vec<Complex64> = (0..n).map(|j| a[j + j * n]).collect();
    unsafe {
        lapack::zungqr(
            n as i32, n as i32, n as i32, &mut a, n as i32, &tau, &mut work, lwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zungqr", info });
    }
    let mut q = Array2::zeros((n, n));
    for j in 0..n {
        for i in 0..n {
            q[[i, j]] = a[i + j * n];
        }
    }
    Ok((q, rdiag))
}

/// exp(i t h) for Hermitian `h`, via eigendecomposition.
///
/// The sign convention is +i, matching U_t = exp(itH).
pub fn expm_hermitian_phase(h: &CMatrix, t: f64) -> Result<CMatrix> {
    ensure_hermitian(h, HERMITIAN_TOL)?;
    let (vals, vecs) = eigh(h)?;
    Ok(unitary_from_eigh(&vals, &vecs, t))
}

/// Assemble exp(i t h) from a precomputed eigendecomposition of h.
///
/// Useful when many values of `t` share one diagonalization.
pub fn unitary_from_eigh(vals: &[f64], vecs: &CMatrix, t: f64) -> CMatrix {
    let n = vecs.nrows();
    let mut scaled = vecs.clone();
    for (k, &lam) in vals.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, t * lam);
        scaled.column_mut(k).mapv_inplace(|z| z * phase);
    }
    scaled.dot(&dagger(vecs))
}

/// Nearest unitary in Frobenius norm: M (M^dag M)^{-1/2}.
pub fn polar_unitary(m: &CMatrix) -> Result<CMatrix> {
    let g = dagger(m).dot(m);
    let (vals, vecs) = eigh(&g)?;
    let n = vals.len();
    let mut scaled = vecs.clone();
    for (k, &s) in vals.iter().enumerate() {
        if s <= 0.0 {
            return Err(Error::InvalidArgument(
                "polar projection of a rank-deficient matrix".into(),
            ));
        }
        let f = Complex64::new(1.0 / s.sqrt(), 0.0);
        scaled.column_mut(k).mapv_inplace(|z| z * f);
    }
    Ok(m.dot(&scaled.dot(&dagger(&vecs))))
}

fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * dims[j + 1];
    }
    s
}

/// Flat-index relabeling for a factor permutation: entry `map[old]` is the
/// flat index whose multi-index puts old factor `perm[j]` in new slot `j`.
fn permutation_index_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    assert_eq!(dims.len(), perm.len(), "perm length must match dims");
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        assert!(p < dims.len() && !seen[p], "perm must be a permutation");
        seen[p] = true;
    }
    let total: usize = dims.iter().product();
    let old_strides = strides_of(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides = strides_of(&new_dims);
    let mut map = vec![0usize; total];
    for (old, entry) in map.iter_mut().enumerate() {
        let mut new_flat = 0usize;
        for j in 0..dims.len() {
            let i = (old / old_strides[perm[j]]) % dims[perm[j]];
            new_flat += i * new_strides[j];
        }
        *entry = new_flat;
    }
    map
}

/// Permutation operator P with P|i_0, i_1, ...> = |i_{perm[0]}, i_{perm[1]}, ...>.
///
/// Every factor permutation in the crate goes through this helper (or
/// [`permute_factors`], which shares its index map).
pub fn permutation_matrix(dims: &[usize], perm: &[usize]) -> CMatrix {
    let map = permutation_index_map(dims, perm);
    let d: usize = dims.iter().product();
    let mut p = Array2::zeros((d, d));
    for (old, &new) in map.iter().enumerate() {
        p[[new, old]] = ONE;
    }
    p
}

/// Relabel the tensor factors of a square matrix, on rows and columns alike.
///
/// Equivalent to P m P^dag with P = `permutation_matrix(dims, perm)`, done by
/// index remapping.
pub fn permute_factors(m: &CMatrix, dims: &[usize], perm: &[usize]) -> CMatrix {
    let d: usize = dims.iter().product();
    assert_eq!(m.dim(), (d, d), "matrix does not match factor dims");
    let map = permutation_index_map(dims, perm);
    let mut out = Array2::zeros((d, d));
    for r in 0..d {
        for c in 0..d {
            out[[map[r], map[c]]] = m[[r, c]];
        }
    }
    out
}

/// Partial trace over the factors not listed in `keep`.
///
/// `keep` is a strictly increasing list of factor indices; the result lives on
/// the kept factors in their original order. Tr(result) = Tr(m).
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let d: usize = dims.iter().product();
    if m.dim() != (d, d) {
        return Err(Error::Dimension(format!(
            "matrix is {}x{} but the factor dims multiply to {}",
            m.nrows(),
            m.ncols(),
            d
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(
            "keep must be a strictly increasing list of factor indices".into(),
        ));
    }
    let strides = strides_of(dims);
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kept_strides = strides_of(&kept_dims);
    let traced: Vec<usize> = (0..dims.len()).filter(|j| !keep.contains(j)).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced.iter().map(|&j| dims[j]).product();

    // base[kr] = flat index with kept factors set and traced factors zero
    let flat_of_kept = |kmulti: usize| -> usize {
        let mut f = 0usize;
        for (slot, &k) in keep.iter().enumerate() {
            let i = (kmulti / kept_strides[slot]) % dims[k];
            f += i * strides[k];
        }
        f
    };
    let traced_dims: Vec<usize> = traced.iter().map(|&j| dims[j]).collect();
    let traced_strides_local = strides_of(&traced_dims);
    let flat_of_traced = |tmulti: usize| -> usize {
        let mut f = 0usize;
        for (slot, &j) in traced.iter().enumerate() {
            let i = (tmulti / traced_strides_local[slot]) % dims[j];
            f += i * strides[j];
        }
        f
    };

    let mut out = Array2::zeros((dk, dk));
    for kr in 0..dk {
        let base_r = flat_of_kept(kr);
        for kc in 0..dk {
            let base_c = flat_of_kept(kc);
            let mut acc = ZERO;
            for tm in 0..dt {
                let off = flat_of_traced(tm);
                acc += m[[base_r + off, base_c + off]];
            }
            out[[kr, kc]] = acc;
        }
    }
    Ok(out)
}

/// Pairwise (cascade) summation; reduction order is fixed by the slice order,
/// independent of any parallel scheduling upstream.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
