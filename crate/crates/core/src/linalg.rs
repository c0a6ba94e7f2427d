//! Dense complex linear algebra: Hermitian spectra, matrix functions,
//! norms, tensor products and antilinear maps.

use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Eigenvalues at or below this fraction of the largest one count as kernel.
pub const KERNEL_REL: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real_diag(d: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(d.len(), d.iter().map(|&x| c(x, 0.0))))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Frobenius norm.
pub fn fro(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vnorm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// (a, b), antilinear in the first slot.
pub fn inner(a: &CVec, b: &CVec) -> Complex64 {
    a.dotc(b)
}

pub fn conj_mat(a: &CMat) -> CMat {
    a.map(|z| z.conj())
}

pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

pub fn hermitian_defect(h: &CMat) -> f64 {
    fro(&(h - h.adjoint()))
}

pub fn is_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// ascending
    pub values: Vec<f64>,
    /// eigenvectors as columns
    pub vectors: CMat,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    pub fn kernel_threshold(&self) -> f64 {
        KERNEL_REL * self.max_abs()
    }

    /// V diag(f(λ)) V†
    pub fn apply_c<F: Fn(f64) -> Complex64>(&self, f: F) -> CMat {
        let n = self.dim();
        let v = &self.vectors;
        let mut scaled = v.clone();
        for k in 0..n {
            let fk = f(self.values[k]);
            for i in 0..n {
                scaled[(i, k)] *= fk;
            }
        }
        scaled * v.adjoint()
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> CMat {
        self.apply_c(|x| c(f(x), 0.0))
    }

    /// Apply f on eigenvalues above the kernel threshold and 0 on the kernel.
    pub fn apply_support<F: Fn(f64) -> f64>(&self, f: F) -> CMat {
        let thr = self.kernel_threshold();
        self.apply(|x| if x > thr { f(x) } else { 0.0 })
    }

    pub fn support_projector(&self) -> CMat {
        self.apply_support(|_| 1.0)
    }

    pub fn reconstruct(&self) -> CMat {
        self.apply(|x| x)
    }

    pub fn column(&self, k: usize) -> CVec {
        self.vectors.column(k).into_owned()
    }
}

pub fn herm_eig(h: &CMat) -> Result<Spectrum> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", h.nrows(), h.ncols())));
    }
    let scale = fro(h).max(f64::MIN_POSITIVE);
    let defect = hermitian_defect(h);
    if defect > 1e-10 * scale {
        return Err(Error::NonHermitian(defect / scale));
    }
    let n = h.nrows();
    if n == 0 {
        return Ok(Spectrum { values: vec![], vectors: CMat::zeros(0, 0) });
    }
    // symmetrize so the solver sees an exactly Hermitian input
    let hs = faer::Mat::<Complex64>::from_fn(n, n, |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    let eig = hs.self_adjoint_eigen(faer::Side::Lower).map_err(|_| Error::ConvergenceFailure)?;
    let (s, u) = (eig.S(), eig.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a].re.total_cmp(&s[b].re));
    let values = order.iter().map(|&k| s[k].re).collect();
    let vectors = CMat::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok(Spectrum { values, vectors })
}

/// f applied spectrally to a Hermitian PSD matrix. With `support_only`,
/// kernel eigenvalues map to 0 instead of f(0).
pub fn mat_fn<F: Fn(f64) -> f64>(h: &CMat, f: F, support_only: bool) -> Result<CMat> {
    let sp = herm_eig(h)?;
    let tol = 1e-12 * sp.max_abs().max(1.0);
    if let Some(&lo) = sp.values.first() {
        if lo < -tol {
            return Err(Error::DomainError(lo));
        }
    }
    let thr = sp.kernel_threshold();
    Ok(sp.apply(|x| {
        if x <= thr {
            if support_only {
                0.0
            } else {
                f(0.0)
            }
        } else {
            f(x)
        }
    }))
}

/// h^r on the support (pseudo-inverse convention for r < 0).
pub fn mat_pow(h: &CMat, r: f64) -> Result<CMat> {
    mat_fn(h, |x| x.powf(r), true)
}

pub fn mat_sqrt(h: &CMat) -> Result<CMat> {
    mat_fn(h, f64::sqrt, false)
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let svd = SVD::new(a.clone(), false, false);
    svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s))
}

/// Schatten q-norm (q ≥ 1, q = ∞ allowed) of a Hermitian PSD matrix.
pub fn schatten_psd(h: &CMat, q: f64) -> Result<f64> {
    let sp = herm_eig(h)?;
    let vals: Vec<f64> = sp.values.iter().map(|&x| x.max(0.0)).collect();
    if q.is_infinite() {
        return Ok(vals.iter().fold(0.0f64, |m, &x| m.max(x)));
    }
    Ok(vals.iter().map(|x| x.powf(q)).sum::<f64>().powf(1.0 / q))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Tr_2 of an operator on C^n ⊗ C^m (index i*m + j).
pub fn partial_trace_second(x: &CMat, n: usize, m: usize) -> CMat {
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let mut s = ZERO;
            for j in 0..m {
                s += x[(i * m + j, k * m + j)];
            }
            out[(i, k)] = s;
        }
    }
    out
}

/// Tr_1 of an operator on C^n ⊗ C^m.
pub fn partial_trace_first(x: &CMat, n: usize, m: usize) -> CMat {
    let mut out = CMat::zeros(m, m);
    for j in 0..m {
        for l in 0..m {
            let mut s = ZERO;
            for i in 0..n {
                s += x[(i * m + j, i * m + l)];
            }
            out[(j, l)] = s;
        }
    }
    out
}

/// Row-major vectorization: X_ij sits at index i*cols + j.
pub fn vec_of(x: &CMat) -> CVec {
    let (r, cc) = x.shape();
    CVec::from_fn(r * cc, |k, _| x[(k / cc, k % cc)])
}

pub fn unvec(v: &CVec, n: usize) -> CMat {
    assert_eq!(v.len(), n * n, "vector length is not n^2");
    CMat::from_fn(n, n, |i, j| v[i * n + j])
}

/// Orthogonal projector onto the column span of `cols`, singular values
/// below `rel` times the largest are discarded.
pub fn range_projector(cols: &CMat, rel: f64) -> CMat {
    let n = cols.nrows();
    if cols.ncols() == 0 {
        return CMat::zeros(n, n);
    }
    let svd = SVD::new(cols.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let mut p = CMat::zeros(n, n);
    if smax == 0.0 {
        return p;
    }
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > rel * smax {
            let uk = u.column(k);
            p += &uk * uk.adjoint();
        }
    }
    p
}

/// Orthonormal basis (as columns) of the range of a projector.
pub fn projector_basis(p: &CMat) -> Result<CMat> {
    let sp = herm_eig(p)?;
    let keep: Vec<usize> = (0..sp.dim()).filter(|&k| sp.values[k] > 0.5).collect();
    let mut b = CMat::zeros(p.nrows(), keep.len());
    for (dst, &k) in keep.iter().enumerate() {
        b.set_column(dst, &sp.vectors.column(k));
    }
    Ok(b)
}

/// Moore–Penrose pseudo-inverse with a relative singular value cutoff.
pub fn pinv(a: &CMat, rel: f64) -> CMat {
    let (r, cc) = a.shape();
    if a.is_empty() {
        return CMat::zeros(cc, r);
    }
    let svd = SVD::new(a.clone(), true, true);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let mut out = CMat::zeros(cc, r);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > rel * smax && s > 0.0 {
            let uk = u.column(k);
            let vk = vt.row(k).adjoint();
            out += (vk * uk.adjoint()) * c(1.0 / s, 0.0);
        }
    }
    out
}

/// Antilinear operator ξ ↦ L·conj(ξ).
#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearMap {
    pub linear: CMat,
}

impl AntilinearMap {
    pub fn new(linear: CMat) -> Self {
        Self { linear }
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        &self.linear * conj_vec(v)
    }

    /// Matrix of the linear map self ∘ other.
    pub fn compose(&self, other: &AntilinearMap) -> CMat {
        &self.linear * conj_mat(&other.linear)
    }

    /// self ∘ A for a linear A is antilinear with part L·conj(A).
    pub fn after_linear(&self, a: &CMat) -> AntilinearMap {
        AntilinearMap::new(&self.linear * conj_mat(a))
    }

    /// A ∘ self for a linear A.
    pub fn before_linear(&self, a: &CMat) -> AntilinearMap {
        AntilinearMap::new(a * &self.linear)
    }

    /// Adjoint in the antilinear sense: (ξ, Sη) = conj((S*ξ, η)).
    pub fn adjoint(&self) -> AntilinearMap {
        AntilinearMap::new(self.linear.transpose())
    }
}
