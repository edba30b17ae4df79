#![allow(dead_code)]

use lu_orbit::numerics::{hermitian_to_real_coords, ComplexMatrix};
use lu_orbit::PartyDims;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn dims(d: &[usize]) -> PartyDims {
    PartyDims::new(d.to_vec()).unwrap()
}

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-ish random unitary `exp(A)` with `A` a random anti-Hermitian matrix.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(d, d, rng);
    let a = (&g - g.adjoint()).scale(0.5);
    a.exp()
}

pub fn random_local_unitaries<R: Rng>(dims: &PartyDims, rng: &mut R) -> Vec<ComplexMatrix> {
    dims.as_slice().iter().map(|&d| random_unitary(d, rng)).collect()
}

pub fn tensor(us: &[ComplexMatrix]) -> ComplexMatrix {
    us.iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, u| acc.kronecker(u))
}

/// Symmetrized `u w u†`.
pub fn conjugate(u: &ComplexMatrix, w: &ComplexMatrix) -> ComplexMatrix {
    let c = u * w * u.adjoint();
    (&c + c.adjoint()).scale(0.5)
}

/// Tensor-factor exchange on `C^d ⊗ C^d`.
pub fn swap(d: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = Complex64::new(1.0, 0.0);
        }
    }
    s
}

pub fn coords(h: &ComplexMatrix) -> DVector<f64> {
    hermitian_to_real_coords(&(h + h.adjoint()).scale(0.5)).unwrap()
}

/// `I ⊗ .. ⊗ b ⊗ .. ⊗ I`, built here independently of the library.
pub fn place(b: &ComplexMatrix, slot: usize, dims: &[usize]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(1, 1);
    for (j, &d) in dims.iter().enumerate() {
        let f = if j == slot { b.clone() } else { ComplexMatrix::identity(d, d) };
        acc = acc.kronecker(&f);
    }
    acc
}

/// Central finite difference of `t -> coords(e^{tB} w e^{-tB})` at 0.
pub fn finite_difference_column(b_emb: &ComplexMatrix, w: &ComplexMatrix, h: f64) -> DVector<f64> {
    let plus = b_emb.scale(h).exp();
    let minus = b_emb.scale(-h).exp();
    let fp = coords(&(&plus * w * plus.adjoint()));
    let fm = coords(&(&minus * w * minus.adjoint()));
    (fp - fm) / (2.0 * h)
}
