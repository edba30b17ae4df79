//! Stabilizer Lie algebras and orbit dimensions under local unitaries.
//!
//! The local group `U(d_1) ⊗ ... ⊗ U(d_k)` acts on Hermitian operators by
//! conjugation. Its derivative at the identity sends a tuple
//! `(A_1, ..., A_k)` of anti-Hermitian matrices to `[Σ_i A_i^{(i)}, w]`, where
//! `A^{(i)}` is `A` placed in slot `i` of the tensor product. In the fixed real
//! bases of `numerics` this is a `D² x Σ d_i²` real matrix; its rank is the
//! orbit dimension and its kernel is the stabilizer algebra.

use nalgebra::DVector;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{
    self, antihermitian_basis, antihermitian_coords, antihermitian_from_coords,
    antihermiticity_residual, commutator, frobenius_norm, hermitian_coords_unchecked,
    hermiticity_residual, identity, kron_all, unitarity_defect, ComplexMatrix, RealMatrix,
    TolerancePolicy,
};
use crate::states::PartyDims;

/// Kernel elements must satisfy `|[A, w]|_F <= CERTIFICATE_TOL * |w|_F`.
pub const CERTIFICATE_TOL: f64 = 1e-8;
/// Largest principal-angle sine accepted when comparing with the center.
pub const CENTER_TOL: f64 = 1e-8;
/// Residual below which `check_group_element` counts as membership.
pub const MEMBERSHIP_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

/// A tangent vector of the local unitary group: one anti-Hermitian matrix
/// per party.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAlgebraElement {
    parts: Vec<ComplexMatrix>,
}

impl LocalAlgebraElement {
    pub fn new(parts: Vec<ComplexMatrix>) -> Result<Self> {
        for a in &parts {
            if !a.is_square() {
                return Err(Error::InvalidArgument(format!(
                    "algebra component has shape {:?}",
                    a.shape()
                )));
            }
            numerics::ensure_finite(a)?;
            let residual = antihermiticity_residual(a);
            if residual > 1e-12 {
                return Err(Error::NotAntiHermitian { residual });
            }
        }
        Ok(Self { parts })
    }

    /// Element with coordinates `coords` (party 1's basis first).
    pub fn from_coords(coords: &[f64], dims: &PartyDims) -> Result<Self> {
        if coords.len() != dims.group_dim() {
            return Err(Error::DimensionMismatch {
                expected: dims.group_dim(),
                got: coords.len(),
            });
        }
        let mut offset = 0;
        let parts = dims
            .as_slice()
            .iter()
            .map(|&d| {
                let a = antihermitian_from_coords(&coords[offset..offset + d * d], d);
                offset += d * d;
                a
            })
            .collect();
        Ok(Self { parts })
    }

    pub fn to_coords(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.parts.iter().map(|a| a.nrows() * a.nrows()).sum(),
            self.parts.iter().flat_map(antihermitian_coords),
        )
    }

    pub fn parts(&self) -> &[ComplexMatrix] {
        &self.parts
    }

    /// `Σ_i I ⊗ ... ⊗ A_i ⊗ ... ⊗ I`.
    pub fn embed(&self) -> ComplexMatrix {
        let dims: Vec<usize> = self.parts.iter().map(|a| a.nrows()).collect();
        let total: usize = dims.iter().product();
        let mut out = ComplexMatrix::zeros(total, total);
        for (slot, a) in self.parts.iter().enumerate() {
            out += embed_in_slot(a, slot, &dims);
        }
        out
    }
}

/// `I_{left} ⊗ a ⊗ I_{right}` for the party at `slot`.
pub fn embed_in_slot(a: &ComplexMatrix, slot: usize, dims: &[usize]) -> ComplexMatrix {
    let left: usize = dims[..slot].iter().product();
    let right: usize = dims[slot + 1..].iter().product();
    identity(left).kronecker(a).kronecker(&identity(right))
}

fn check_operator(w: &ComplexMatrix, dims: &PartyDims) -> Result<()> {
    let total = dims.total();
    if w.shape() != (total, total) {
        return Err(Error::DimensionMismatch {
            expected: total,
            got: w.nrows().max(w.ncols()),
        });
    }
    numerics::ensure_finite(w)?;
    let residual = hermiticity_residual(w);
    if residual > HERMITIAN_TOL * frobenius_norm(w).max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Matrix of the infinitesimal local action at `w`.
///
/// Column `c` is the real coordinate vector of `[B_emb, w]`, where `B` runs
/// over `antihermitian_basis(d_1)`, then `antihermitian_basis(d_2)`, and so on.
pub fn action_matrix(w: &ComplexMatrix, dims: &PartyDims) -> Result<RealMatrix> {
    check_operator(w, dims)?;
    let total = dims.total();
    let d = dims.as_slice();
    let mut out = RealMatrix::zeros(total * total, dims.group_dim());
    let mut col = 0;
    let mut scratch = vec![0.0; total * total];
    for (slot, &di) in d.iter().enumerate() {
        for b in antihermitian_basis(di)? {
            let emb = embed_in_slot(&b, slot, d);
            hermitian_coords_unchecked(&commutator(&emb, w), &mut scratch);
            out.column_mut(col).copy_from_slice(&scratch);
            col += 1;
        }
    }
    Ok(out)
}

/// The center `{(iθ_1 I, ..., iθ_k I)}` as `k` orthonormal elements.
pub fn center_subspace(dims: &PartyDims) -> Vec<LocalAlgebraElement> {
    let d = dims.as_slice();
    (0..d.len())
        .map(|slot| {
            let parts = d
                .iter()
                .enumerate()
                .map(|(j, &dj)| {
                    if j == slot {
                        identity(dj) * num_complex::Complex64::new(0.0, 1.0 / (dj as f64).sqrt())
                    } else {
                        ComplexMatrix::zeros(dj, dj)
                    }
                })
                .collect();
            LocalAlgebraElement { parts }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Orbit dimension equals `Σ d_i² - k`.
    MaxDimensional,
    Degenerate,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::MaxDimensional => "max_dimensional",
            Classification::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilizerReport {
    pub dims: PartyDims,
    pub orbit_dim: usize,
    pub stabilizer_dim: usize,
    pub kernel_basis: Vec<LocalAlgebraElement>,
    pub singular_values: Vec<f64>,
    pub sv_gap: f64,
    /// Set when `sv_gap` is below the policy's warning threshold.
    pub gap_warning: bool,
    pub center_only: bool,
    pub classification: Classification,
    /// Largest `|[A, w]|_F / |w|_F` over the kernel basis.
    pub residual_max: f64,
}

impl StabilizerReport {
    /// Every kernel element passed the commutator certificate.
    pub fn certified(&self) -> bool {
        self.residual_max <= CERTIFICATE_TOL
    }
}

impl Serialize for StabilizerReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            dims: &'a PartyDims,
            orbit_dim: usize,
            stabilizer_dim: usize,
            sv_gap: f64,
            center_only: bool,
            classification: Classification,
            residual_max: f64,
        }
        Wire {
            dims: &self.dims,
            orbit_dim: self.orbit_dim,
            stabilizer_dim: self.stabilizer_dim,
            sv_gap: self.sv_gap,
            center_only: self.center_only,
            classification: self.classification,
            residual_max: self.residual_max,
        }
        .serialize(serializer)
    }
}

/// Stabilizer algebra and orbit dimension of `w`.
///
/// The rank cutoff is taken relative to `max(sigma_max, |w|_F)`, so operators
/// that are numerically a multiple of the identity get orbit dimension 0.
pub fn stabilize(w: &ComplexMatrix, dims: &PartyDims, tol: &TolerancePolicy) -> Result<StabilizerReport> {
    let action = action_matrix(w, dims)?;
    let w_norm = frobenius_norm(w);
    let rank = numerics::kernel_with_scale(&action, tol, w_norm)?;

    let mut kernel_basis = Vec::with_capacity(rank.nullity());
    let mut residual_max = 0.0_f64;
    for x in &rank.kernel_basis {
        let element = LocalAlgebraElement::from_coords(x.as_slice(), dims)?;
        if w_norm > 0.0 {
            let r = frobenius_norm(&commutator(&element.embed(), w)) / w_norm;
            residual_max = residual_max.max(r);
        }
        kernel_basis.push(element);
    }

    let center: Vec<DVector<f64>> = center_subspace(dims).iter().map(|c| c.to_coords()).collect();
    let center_only = rank.nullity() == dims.parties()
        && numerics::max_principal_sine(&rank.kernel_basis, &center) < CENTER_TOL;

    let orbit_dim = rank.rank;
    let classification = if orbit_dim == dims.max_orbit_dim() {
        Classification::MaxDimensional
    } else {
        Classification::Degenerate
    };

    Ok(StabilizerReport {
        dims: dims.clone(),
        orbit_dim,
        stabilizer_dim: rank.nullity(),
        kernel_basis,
        singular_values: rank.singular_values,
        sv_gap: rank.gap,
        gap_warning: rank.gap_warning,
        center_only,
        classification,
        residual_max,
    })
}

/// Orbit dimension of `w` under the default tolerance policy.
pub fn orbit_dimension(w: &ComplexMatrix, dims: &PartyDims) -> Result<usize> {
    Ok(stabilize(w, dims, &TolerancePolicy::default())?.orbit_dim)
}

/// `|U w U† - w|_F / |w|_F` for `U = u_1 ⊗ ... ⊗ u_k`.
pub fn check_group_element(w: &ComplexMatrix, us: &[ComplexMatrix]) -> Result<f64> {
    if us.is_empty() {
        return Err(Error::InvalidArgument("need at least one unitary factor".into()));
    }
    for u in us {
        numerics::ensure_finite(u)?;
        let defect = unitarity_defect(u);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary { defect });
        }
    }
    numerics::ensure_finite(w)?;
    let u = kron_all(us)?;
    if !w.is_square() || w.nrows() != u.nrows() {
        return Err(Error::DimensionMismatch {
            expected: u.nrows(),
            got: w.nrows().max(w.ncols()),
        });
    }
    let diff = frobenius_norm(&(&u * w * u.adjoint() - w));
    let norm = frobenius_norm(w);
    Ok(if norm > 0.0 { diff / norm } else { diff })
}
