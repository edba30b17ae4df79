//! Operators and states on a multipartite Hilbert space: the witness
//! operator with its generator set, positive normalization into a density
//! matrix, Hilbert–Schmidt random states and a few analytically known states.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    self, antihermitian_basis, commutator, hermitian_coords_unchecked, hermitian_eigenvalues,
    hermitian_part, hermiticity_residual, identity, kron, ComplexMatrix, RealMatrix,
    TolerancePolicy,
};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Ordered party dimensions `(d_1, ..., d_k)`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PartyDims(Vec<usize>);

impl PartyDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("at least one party is required".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!(
                "every party dimension must be at least 2, got {d}"
            )));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidDims("total dimension overflows".into()))?;
        Ok(Self(dims))
    }

    pub fn bipartite(m: usize, n: usize) -> Result<Self> {
        Self::new(vec![m, n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of parties `k`.
    pub fn parties(&self) -> usize {
        self.0.len()
    }

    /// Hilbert-space dimension `D = ∏ d_i`.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Dimension of the local unitary group, `Σ d_i²`.
    pub fn group_dim(&self) -> usize {
        self.0.iter().map(|d| d * d).sum()
    }

    /// Largest possible orbit dimension, `Σ d_i² - k`.
    pub fn max_orbit_dim(&self) -> usize {
        self.group_dim() - self.parties()
    }

    pub fn is_ascending(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

impl TryFrom<Vec<usize>> for PartyDims {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<PartyDims> for Vec<usize> {
    fn from(dims: PartyDims) -> Self {
        dims.0
    }
}

impl FromStr for PartyDims {
    type Err = Error;

    /// Parses `"2,3,4"` (also accepts `x` as separator).
    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split([',', 'x'])
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidDims(format!("cannot parse `{part}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims)
    }
}

impl fmt::Display for PartyDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("x"))
    }
}

/// Traceless Hermitian `n x n` generators `X_1, ..., X_m` whose joint
/// centralizer in `u(n)` is one-dimensional and which are linearly
/// independent together with the identity.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    n: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorSet {
    /// Validates every invariant before accepting the set.
    pub fn new(n: usize, generators: Vec<ComplexMatrix>) -> Result<Self> {
        validate_generators(n, &generators)?;
        Ok(Self { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }
}

fn validate_generators(n: usize, xs: &[ComplexMatrix]) -> Result<()> {
    for (i, x) in xs.iter().enumerate() {
        if x.shape() != (n, n) {
            return Err(Error::GeneratorInvalid(format!(
                "X_{} has shape {:?}, expected ({n}, {n})",
                i + 1,
                x.shape()
            )));
        }
        let residual = hermiticity_residual(x);
        if residual > HERMITIAN_TOL {
            return Err(Error::GeneratorInvalid(format!(
                "X_{} is not Hermitian (residual {residual:.3e})",
                i + 1
            )));
        }
        let tr = x.trace().norm();
        if tr > 1e-12 {
            return Err(Error::GeneratorInvalid(format!(
                "X_{} is not traceless (|tr| = {tr:.3e})",
                i + 1
            )));
        }
    }

    // Gram matrix of {X_1, ..., X_m, I} in real coordinates.
    let mut coords = RealMatrix::zeros(n * n, xs.len() + 1);
    for (c, x) in xs.iter().chain(std::iter::once(&identity(n))).enumerate() {
        let mut col = vec![0.0; n * n];
        hermitian_coords_unchecked(x, &mut col);
        coords.column_mut(c).copy_from_slice(&col);
    }
    let gram = coords.transpose() * &coords;
    let gram_rank = numerics::kernel(&gram, &TolerancePolicy::default())?.rank;
    if gram_rank != xs.len() + 1 {
        return Err(Error::GeneratorInvalid(format!(
            "generators and identity are linearly dependent (Gram rank {gram_rank} of {})",
            xs.len() + 1
        )));
    }

    let centralizer = joint_centralizer_dim(xs, n)?;
    if centralizer != 1 {
        return Err(Error::GeneratorInvalid(format!(
            "joint centralizer in u({n}) has dimension {centralizer}, expected 1"
        )));
    }
    Ok(())
}

/// Canonical generator choice for `2 <= m <= n`:
/// `X_1 = diag(j - (n+1)/2)`, `X_2` the path-graph adjacency matrix and
/// `X_i = E_{1,i} + E_{i,1}` for `i >= 3`.
pub fn build_generators(m: usize, n: usize) -> Result<GeneratorSet> {
    if !(2 <= m && m <= n) {
        return Err(Error::InvalidDims(format!("generators need 2 <= m <= n, got m={m}, n={n}")));
    }
    let center = (n as f64 + 1.0) / 2.0;
    let x1 = ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::new((r + 1) as f64 - center, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let x2 = ComplexMatrix::from_fn(n, n, |r, c| {
        if r.abs_diff(c) == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut generators = vec![x1, x2];
    for i in 2..m {
        generators.push(symmetric_pin(n, i));
    }
    GeneratorSet::new(n, generators)
}

/// `E_{0,i} + E_{i,0}` on an `n`-dimensional space (0-based).
fn symmetric_pin(n: usize, i: usize) -> ComplexMatrix {
    let mut x = ComplexMatrix::zeros(n, n);
    x[(0, i)] = Complex64::new(1.0, 0.0);
    x[(i, 0)] = Complex64::new(1.0, 0.0);
    x
}

/// Dimension of `{B in u(n) : [B, X] = 0 for every X in xs}`.
pub fn joint_centralizer_dim(xs: &[ComplexMatrix], n: usize) -> Result<usize> {
    for x in xs {
        if x.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.nrows().max(x.ncols()),
            });
        }
        numerics::ensure_hermitian(x, HERMITIAN_TOL)?;
    }
    if xs.is_empty() {
        return Ok(n * n);
    }
    let basis = antihermitian_basis(n)?;
    let block = n * n;
    let mut stacked = RealMatrix::zeros(xs.len() * block, basis.len());
    for (c, b) in basis.iter().enumerate() {
        for (i, x) in xs.iter().enumerate() {
            let mut col = vec![0.0; block];
            hermitian_coords_unchecked(&commutator(b, x), &mut col);
            stacked
                .view_mut((i * block, c), (block, 1))
                .copy_from_slice(&col);
        }
    }
    Ok(numerics::kernel(&stacked, &TolerancePolicy::default())?.nullity())
}

/// `Σ_i P_i ⊗ Y_i + v v† ⊗ I` with `v = Σ_k k e_k` (1-based weights).
fn assemble_witness(ys: &[ComplexMatrix], tail: usize) -> Result<ComplexMatrix> {
    let m = ys.len();
    let mut w = ComplexMatrix::zeros(m * tail, m * tail);
    for (i, y) in ys.iter().enumerate() {
        let mut p = ComplexMatrix::zeros(m, m);
        p[(i, i)] = Complex64::new(1.0, 0.0);
        w += kron(&p, y)?;
    }
    let v = DVector::from_fn(m, |k, _| Complex64::new((k + 1) as f64, 0.0));
    let vv = &v * v.adjoint();
    w += kron(&vv, &identity(tail))?;
    Ok(w)
}

/// Bipartite witness `W = Σ P_i ⊗ X_i + v v† ⊗ I` for `2 <= m <= n`.
pub fn build_witness(m: usize, n: usize) -> Result<ComplexMatrix> {
    let generators = build_generators(m, n)?;
    assemble_witness(generators.generators(), n)
}

/// Cyclic shift `e_j -> e_{j+1 mod d}`.
fn cyclic_shift(d: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        s[((j + 1) % d, j)] = Complex64::new(1.0, 0.0);
    }
    s
}

fn traceless(t: ComplexMatrix) -> ComplexMatrix {
    let d = t.nrows();
    let shift = t.trace() / Complex64::new(d as f64, 0.0);
    t - identity(d) * shift
}

/// Recursive multipartite witness candidate.
///
/// For two parties this is [`build_witness`]. For more, the tail
/// `H_2 ⊗ ... ⊗ H_k` receives the generators `Y_1 = T_1`, `Y_2 = S T_1 S†`
/// (with `S` the cyclic shift) and `Y_i = E_{1,i} + E_{i,1}` for `i >= 3`,
/// each made traceless, where `T_1` is the tail's own witness. The result is
/// only a candidate: its stabilizer must be checked by the caller.
pub fn build_witness_multipartite(dims: &PartyDims) -> Result<ComplexMatrix> {
    let d = dims.as_slice();
    if d.len() < 2 {
        return Err(Error::InvalidDims(format!(
            "the witness needs at least two parties, got {dims}"
        )));
    }
    if !dims.is_ascending() {
        return Err(Error::InvalidDims(format!(
            "the witness needs ascending party dimensions, got {dims}"
        )));
    }
    if d.len() == 2 {
        return build_witness(d[0], d[1]);
    }
    let tail = PartyDims::new(d[1..].to_vec())?;
    let tail_dim = tail.total();
    let t1 = build_witness_multipartite(&tail)?;
    let shift = cyclic_shift(tail_dim);
    let t2 = &shift * &t1 * shift.adjoint();
    let ys: Vec<ComplexMatrix> = (0..d[0])
        .map(|i| match i {
            0 => traceless(t1.clone()),
            1 => traceless(t2.clone()),
            _ => traceless(symmetric_pin(tail_dim, i)),
        })
        .collect();
    assemble_witness(&ys, tail_dim)
}

/// A Hermitian, positive semi-definite, unit-trace operator on a
/// multipartite space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "DensityMatrixJson", try_from = "DensityMatrixJson")]
pub struct DensityMatrix {
    dims: PartyDims,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: PartyDims, matrix: ComplexMatrix) -> Result<Self> {
        let total = dims.total();
        if matrix.shape() != (total, total) {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        numerics::ensure_finite(&matrix)?;
        let residual = hermiticity_residual(&matrix);
        if residual > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {residual:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let lambda_min = hermitian_eigenvalues(&matrix)[0];
        if lambda_min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semi-definite (minimum eigenvalue {lambda_min:.3e})"
            )));
        }
        Ok(Self { dims, matrix })
    }

    pub fn dims(&self) -> &PartyDims {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Interchange form `{dims, re, im}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<DensityMatrix> for DensityMatrixJson {
    fn from(rho: DensityMatrix) -> Self {
        let m = numerics::MatrixJson::from_matrix(&rho.matrix);
        Self {
            dims: rho.dims.into(),
            re: m.re,
            im: m.im,
        }
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityMatrixJson) -> Result<Self> {
        let dims = PartyDims::new(j.dims)?;
        let matrix = numerics::MatrixJson { re: j.re, im: j.im }.to_matrix()?;
        DensityMatrix::new(dims, matrix)
    }
}

/// `(h + s I) / tr(h + s I)` with `s = max(0, -λ_min(h)) + 1`.
pub fn to_state(h: &ComplexMatrix, dims: &PartyDims) -> Result<DensityMatrix> {
    let total = dims.total();
    if h.shape() != (total, total) {
        return Err(Error::DimensionMismatch {
            expected: total,
            got: h.nrows().max(h.ncols()),
        });
    }
    numerics::ensure_finite(h)?;
    let residual = hermiticity_residual(h);
    if residual > HERMITIAN_TOL * numerics::frobenius_norm(h).max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let h = hermitian_part(h);
    let lambda_min = hermitian_eigenvalues(&h)[0];
    let s = (-lambda_min).max(0.0) + 1.0;
    let shifted = h + identity(total).scale(s);
    let tr = shifted.trace().re;
    DensityMatrix::new(dims.clone(), shifted.unscale(tr))
}

/// Seeded random state `G G† / tr(G G†)` with `G` a `D x rank` matrix of
/// standard complex Gaussians. Entries of `G` are drawn row-major, real part
/// then imaginary part, from `ChaCha20Rng::seed_from_u64(seed)`.
pub fn random_density(dims: &PartyDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let total = dims.total();
    if !(1..=total).contains(&rank) {
        return Err(Error::InvalidArgument(format!(
            "rank must lie in 1..={total}, got {rank}"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(total * rank);
    for _ in 0..total * rank {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        entries.push(Complex64::new(re, im));
    }
    let g = ComplexMatrix::from_row_slice(total, rank, &entries);
    let gg = hermitian_part(&(&g * g.adjoint()));
    let tr = gg.trace().re;
    DensityMatrix::new(dims.clone(), gg.unscale(tr))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    MaximallyMixed,
    PureProduct,
    BellDiagonal,
    Witness,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::MaximallyMixed => "maximally_mixed",
            StateKind::PureProduct => "pure_product",
            StateKind::BellDiagonal => "bell_diagonal",
            StateKind::Witness => "witness",
        }
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "maximally_mixed" => Ok(StateKind::MaximallyMixed),
            "pure_product" => Ok(StateKind::PureProduct),
            "bell_diagonal" => Ok(StateKind::BellDiagonal),
            "witness" => Ok(StateKind::Witness),
            _ => Err(Error::UnknownStateKind(s.to_string())),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bell states in the order Φ⁺, Φ⁻, Ψ⁺, Ψ⁻ (basis `|00>, |01>, |10>, |11>`).
pub fn bell_states() -> [DVector<Complex64>; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: [f64; 4]| DVector::from_iterator(4, a.iter().map(|&x| Complex64::new(x * s, 0.0)));
    [
        v([1.0, 0.0, 0.0, 1.0]),
        v([1.0, 0.0, 0.0, -1.0]),
        v([0.0, 1.0, 1.0, 0.0]),
        v([0.0, 1.0, -1.0, 0.0]),
    ]
}

/// Analytically known states. `params` is only read by `BellDiagonal`, which
/// needs a probability vector of length 4 and two qubits.
pub fn special_state(kind: StateKind, dims: &PartyDims, params: &[f64]) -> Result<DensityMatrix> {
    let total = dims.total();
    match kind {
        StateKind::MaximallyMixed => {
            DensityMatrix::new(dims.clone(), identity(total).unscale(total as f64))
        }
        StateKind::PureProduct => {
            let mut m = ComplexMatrix::zeros(total, total);
            m[(0, 0)] = Complex64::new(1.0, 0.0);
            DensityMatrix::new(dims.clone(), m)
        }
        StateKind::BellDiagonal => {
            if dims.as_slice() != [2, 2] {
                return Err(Error::InvalidArgument(format!(
                    "bell_diagonal needs dims 2,2, got {dims}"
                )));
            }
            if params.len() != 4
                || params.iter().any(|&p| !p.is_finite() || p < 0.0)
                || (params.iter().sum::<f64>() - 1.0).abs() > 1e-12
            {
                return Err(Error::InvalidArgument(format!(
                    "bell_diagonal needs a probability vector of length 4, got {params:?}"
                )));
            }
            let mut m = ComplexMatrix::zeros(4, 4);
            for (p, beta) in params.iter().zip(bell_states().iter()) {
                m += (beta * beta.adjoint()).scale(*p);
            }
            DensityMatrix::new(dims.clone(), m)
        }
        StateKind::Witness => to_state(&build_witness_multipartite(dims)?, dims),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dims(d: &[usize]) -> PartyDims {
        PartyDims::new(d.to_vec()).unwrap()
    }

    #[test]
    fn party_dims_validation() {
        assert!(PartyDims::new(vec![]).is_err());
        assert!(PartyDims::new(vec![2, 1]).is_err());
        let d: PartyDims = "2,3,4".parse().unwrap();
        assert_eq!(d.total(), 24);
        assert_eq!(d.group_dim(), 29);
        assert_eq!(d.max_orbit_dim(), 26);
        assert_eq!(d.to_string(), "2x3x4");
        assert_eq!("2x3x4".parse::<PartyDims>().unwrap(), d);
        assert!("2,,3".parse::<PartyDims>().is_err());
    }

    #[test]
    fn generators_two_by_two() {
        let g = build_generators(2, 2).unwrap();
        let xs = g.generators();
        assert_eq!(xs.len(), 2);
        assert_eq!(xs[0], ComplexMatrix::from_row_slice(2, 2, &[c(-0.5), c(0.0), c(0.0), c(0.5)]));
        assert_eq!(xs[1], ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
    }

    #[test]
    fn generators_reject_bad_sizes() {
        assert!(build_generators(1, 3).is_err());
        assert!(build_generators(4, 3).is_err());
    }

    #[test]
    fn generator_invariants_hold_up_to_six() {
        for n in 2..=6 {
            for m in 2..=n {
                let g = build_generators(m, n).unwrap();
                assert_eq!(joint_centralizer_dim(g.generators(), n).unwrap(), 1);
            }
        }
    }

    #[test]
    fn generator_set_rejects_commuting_family() {
        let x = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c(-1.0), c(0.0), c(1.0)]));
        let err = GeneratorSet::new(3, vec![x.clone(), x.scale(2.0)]).unwrap_err();
        assert!(matches!(err, Error::GeneratorInvalid(_)));

        let not_traceless = identity(3);
        assert!(GeneratorSet::new(3, vec![not_traceless]).is_err());
    }

    #[test]
    fn centralizer_edge_cases() {
        assert_eq!(joint_centralizer_dim(&[], 3).unwrap(), 9);
        let mut bad = identity(2);
        bad[(0, 1)] = c(1.0);
        assert!(joint_centralizer_dim(&[bad], 2).is_err());
    }

    #[test]
    fn witness_two_by_two_entries() {
        let w = build_witness(2, 2).unwrap();
        assert_relative_eq!(w.trace().re, 10.0, epsilon = 1e-14);
        // top-left block: X_1 + 1·I
        assert_eq!(w[(0, 0)], c(0.5));
        assert_eq!(w[(0, 1)], c(0.0));
        assert_eq!(w[(1, 0)], c(0.0));
        assert_eq!(w[(1, 1)], c(1.5));
        // bottom-right block: X_2 + 4·I
        assert_eq!(w[(2, 2)], c(4.0));
        assert_eq!(w[(2, 3)], c(1.0));
        // party block (1,2): 1·2·I
        assert_eq!(w[(0, 2)], c(2.0));
        assert_eq!(w[(1, 3)], c(2.0));
        assert_eq!(w[(0, 3)], c(0.0));
        assert_eq!(w, w.adjoint());
    }

    #[test]
    fn witness_trace_formula() {
        for n in 2..=5 {
            for m in 2..=n {
                let w = build_witness(m, n).unwrap();
                let sum_sq: usize = (1..=m).map(|k| k * k).sum();
                assert_relative_eq!(w.trace().re, (sum_sq * n) as f64, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn multipartite_witness_reduces_to_bipartite() {
        assert_eq!(build_witness_multipartite(&dims(&[2, 2])).unwrap(), build_witness(2, 2).unwrap());
        assert_eq!(build_witness_multipartite(&dims(&[3, 4])).unwrap(), build_witness(3, 4).unwrap());
        assert!(build_witness_multipartite(&dims(&[3, 2])).is_err());
        assert!(build_witness_multipartite(&dims(&[3])).is_err());
        for d in [&[2, 2, 2][..], &[2, 3, 4], &[2, 2, 2, 2], &[3, 3, 3]] {
            let w = build_witness_multipartite(&dims(d)).unwrap();
            let total: usize = d.iter().product();
            assert_eq!(w.shape(), (total, total));
            assert!(hermiticity_residual(&w) < 1e-12);
        }
    }

    #[test]
    fn to_state_shift_rule() {
        let h = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(-1.0)]));
        let rho = to_state(&h, &PartyDims::new(vec![2]).unwrap()).unwrap();
        assert_relative_eq!(rho.matrix()[(0, 0)].re, 0.75, epsilon = 1e-15);
        assert_relative_eq!(rho.matrix()[(1, 1)].re, 0.25, epsilon = 1e-15);

        // PSD with λ_min = 0 still receives s = 1
        let p = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c(2.0), c(0.0)]));
        let rho = to_state(&p, &PartyDims::new(vec![2]).unwrap()).unwrap();
        assert_relative_eq!(rho.matrix()[(0, 0)].re, 0.75, epsilon = 1e-15);
        assert_relative_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn to_state_rejects_wrong_size() {
        assert!(to_state(&identity(3), &dims(&[2, 2])).is_err());
    }

    #[test]
    fn random_density_contract() {
        let d = dims(&[2, 3]);
        let rho = random_density(&d, 6, 7).unwrap();
        assert_relative_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-12);
        assert!(hermitian_eigenvalues(rho.matrix())[0] >= -1e-12);

        let again = random_density(&d, 6, 7).unwrap();
        assert_eq!(rho.matrix(), again.matrix());
        assert_ne!(rho.matrix(), random_density(&d, 6, 8).unwrap().matrix());

        let pure = random_density(&d, 1, 3).unwrap();
        let p = pure.matrix();
        assert!(numerics::frobenius_norm(&(p * p - p)) < 1e-10);

        assert!(random_density(&d, 0, 1).is_err());
        assert!(random_density(&d, 7, 1).is_err());
    }

    #[test]
    fn special_states() {
        let mm = special_state(StateKind::MaximallyMixed, &dims(&[2, 3]), &[]).unwrap();
        assert_eq!(mm.matrix(), &identity(6).unscale(6.0));

        let bd = special_state(StateKind::BellDiagonal, &dims(&[2, 2]), &[0.4, 0.3, 0.2, 0.1]).unwrap();
        let eig = hermitian_eigenvalues(bd.matrix());
        for (got, want) in eig.iter().zip([0.1, 0.2, 0.3, 0.4]) {
            assert_relative_eq!(*got, want, epsilon = 1e-14);
        }

        let pp = special_state(StateKind::PureProduct, &dims(&[2, 3, 2]), &[]).unwrap();
        let p = pp.matrix();
        assert_relative_eq!(p.trace().re, 1.0);
        assert!(numerics::frobenius_norm(&(p * p - p)) < 1e-15);

        assert!(special_state(StateKind::BellDiagonal, &dims(&[2, 3]), &[0.25; 4]).is_err());
        assert!(special_state(StateKind::BellDiagonal, &dims(&[2, 2]), &[0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(special_state(StateKind::BellDiagonal, &dims(&[2, 2]), &[0.5, 0.5]).is_err());
        assert!("cat_state".parse::<StateKind>().is_err());
        assert_eq!("bell-diagonal".parse::<StateKind>().unwrap(), StateKind::BellDiagonal);
    }

    #[test]
    fn density_json_roundtrip_is_exact() {
        let rho = random_density(&dims(&[2, 2]), 4, 11).unwrap();
        let text = rho.to_json().unwrap();
        let back = DensityMatrix::from_json(&text).unwrap();
        assert_eq!(back, rho);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dims"], serde_json::json!([2, 2]));
        assert_eq!(v["re"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn density_json_rejects_non_states() {
        let text = r#"{"dims":[2],"re":[[1.0,0.0],[0.0,1.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#;
        assert!(DensityMatrix::from_json(text).is_err());
    }
}
