//! Seeded random ensembles.

use nalgebra::QR;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c, herm_eig, CMat, CVec};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-instance seed derived from a run seed and an index.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn cgauss(r: &mut Rng) -> num_complex::Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a: f64 = StandardNormal.sample(r);
    let b: f64 = StandardNormal.sample(r);
    c(s * a, s * b)
}

/// Entries i.i.d. standard complex Gaussian (E|z|² = 1).
pub fn gaussian_matrix(r: &mut Rng, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| cgauss(r))
}

pub fn gaussian_vector(r: &mut Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| cgauss(r))
}

pub fn unit_vector(r: &mut Rng, n: usize) -> CVec {
    let v = gaussian_vector(r, n);
    let nv = crate::linalg::vnorm(&v);
    v / c(nv, 0.0)
}

pub fn haar_unitary(r: &mut Rng, n: usize) -> CMat {
    let g = gaussian_matrix(r, n);
    let qr = QR::new(g);
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..n {
        let d = rr[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_hermitian(r: &mut Rng, n: usize) -> CMat {
    let a = gaussian_matrix(r, n);
    (&a + a.adjoint()) * c(0.5, 0.0)
}

/// Normalized Wishart density matrix G G† / Tr, redrawn until its smallest
/// eigenvalue exceeds `min_eig`.
pub fn wishart_density(r: &mut Rng, n: usize, min_eig: f64) -> CMat {
    loop {
        let g = gaussian_matrix(r, n);
        let w = &g * g.adjoint();
        let tr = w.trace().re;
        let rho = w / c(tr, 0.0);
        let rho = (&rho + rho.adjoint()) * c(0.5, 0.0);
        let sp = herm_eig(&rho).expect("Wishart matrix is Hermitian");
        if sp.values[0] > min_eig {
            return rho;
        }
    }
}

/// Default faithful ensemble used by the bound checks.
pub fn faithful_density(r: &mut Rng, n: usize) -> CMat {
    wishart_density(r, n, 1e-3)
}
