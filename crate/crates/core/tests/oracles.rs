//! Independent oracles for the derived example values.

mod common;

use common::{dims, finite_difference_column, place};
use lu_orbit::numerics::{antihermitian_basis, max_principal_sine, ComplexMatrix, TolerancePolicy};
use lu_orbit::stabilizer::{action_matrix, stabilize};
use lu_orbit::states::{build_generators, build_witness, joint_centralizer_dim, special_state, StateKind};
use nalgebra::DVector;
use num_complex::Complex64;

/// Rank by Gaussian elimination with partial pivoting.
fn elimination_rank(mut rows: Vec<Vec<Complex64>>, tol: f64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len())
            .max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm()));
        let Some(p) = pivot else { break };
        if rows[p][col].norm() <= tol {
            continue;
        }
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col] / pivot_row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * p;
            }
        }
        rank += 1;
    }
    rank
}

/// Complex dimension of the commutant of `xs`, from the linear system
/// `X B - B X = 0` written out entry by entry. For a Hermitian family this
/// equals the real dimension of its centralizer in `u(n)`.
fn commutant_dim(xs: &[ComplexMatrix], n: usize) -> usize {
    let mut rows = Vec::new();
    for x in xs {
        for r in 0..n {
            for c in 0..n {
                // (XB - BX)[r][c] = Σ_k X[r][k] B[k][c] - B[r][k] X[k][c]
                let mut row = vec![Complex64::new(0.0, 0.0); n * n];
                for k in 0..n {
                    row[k * n + c] += x[(r, k)];
                    row[r * n + k] -= x[(k, c)];
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return n * n;
    }
    n * n - elimination_rank(rows, 1e-9)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn centralizer_matches_commutant_oracle() {
    let n = 3;
    let torus = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![real(-1.0), real(0.0), real(1.0)]));
    assert_eq!(commutant_dim(std::slice::from_ref(&torus), n), 3);
    assert_eq!(joint_centralizer_dim(&[torus], n).unwrap(), 3);

    assert_eq!(commutant_dim(&[], n), 9);
    assert_eq!(joint_centralizer_dim(&[], n).unwrap(), 9);

    for (m, n) in [(2, 2), (2, 3), (3, 3), (3, 5), (4, 4), (5, 6)] {
        let g = build_generators(m, n).unwrap();
        let xs = g.generators();
        assert_eq!(commutant_dim(xs, n), 1, "oracle ({m},{n})");
        assert_eq!(joint_centralizer_dim(xs, n).unwrap(), 1, "solver ({m},{n})");
        // X_1 alone: a maximal torus
        assert_eq!(commutant_dim(&xs[..1], n), n);
        assert_eq!(joint_centralizer_dim(&xs[..1], n).unwrap(), n);
    }
}

#[test]
fn gram_rank_three_by_three() {
    let g = build_generators(3, 3).unwrap();
    let mut family: Vec<ComplexMatrix> = g.generators().to_vec();
    family.push(ComplexMatrix::identity(3, 3));
    let gram: Vec<Vec<Complex64>> = family
        .iter()
        .map(|a| {
            family
                .iter()
                .map(|b| real((a.adjoint() * b).trace().re))
                .collect()
        })
        .collect();
    assert_eq!(elimination_rank(gram, 1e-9), 4);
}

#[test]
fn witness_entrywise_definition() {
    for (m, n) in [(2, 2), (2, 3), (3, 4), (5, 5)] {
        let g = build_generators(m, n).unwrap();
        let xs = g.generators();
        let w = build_witness(m, n).unwrap();
        for a in 0..m {
            for b in 0..n {
                for a2 in 0..m {
                    for b2 in 0..n {
                        let mut expected = ((a + 1) * (a2 + 1)) as f64 * if b == b2 { 1.0 } else { 0.0 };
                        if a == a2 {
                            expected += xs[a][(b, b2)].re;
                        }
                        assert_eq!(w[(a * n + b, a2 * n + b2)], real(expected), "({m},{n})");
                    }
                }
            }
        }
    }
}

#[test]
fn action_columns_match_finite_differences() {
    for d in [&[2, 2][..], &[2, 3]] {
        let pd = dims(d);
        let w = special_state(StateKind::Witness, &pd, &[]).unwrap().into_matrix();
        let a = action_matrix(&w, &pd).unwrap();
        let w_norm = w.norm();
        let mut col = 0;
        for (slot, &di) in d.iter().enumerate() {
            for b in antihermitian_basis(di).unwrap() {
                let fd = finite_difference_column(&place(&b, slot, d), &w, 1e-5);
                let exact = a.column(col).into_owned();
                let scale = exact.norm().max(w_norm);
                assert!((&fd - &exact).norm() <= 1e-6 * scale, "dims {d:?} column {col}");
                col += 1;
            }
        }
    }
}

#[test]
fn pure_product_kernel_is_block_stabilizer() {
    // Per party, the stabilizer of E_00 in u(d) is spanned by every diagonal
    // basis element and every off-diagonal pair not touching index 0.
    for d in [&[2, 2][..], &[3, 3], &[2, 3, 2]] {
        let pd = dims(d);
        let mut analytic = Vec::new();
        let mut offset = 0;
        for &di in d {
            let mut local = Vec::new();
            for j in 0..di {
                local.push(offset + j);
            }
            let mut idx = offset + di;
            for j in 0..di {
                for _k in (j + 1)..di {
                    if j > 0 {
                        local.push(idx);
                        local.push(idx + 1);
                    }
                    idx += 2;
                }
            }
            analytic.extend(local);
            offset += di * di;
        }
        let basis: Vec<DVector<f64>> = analytic
            .iter()
            .map(|&i| {
                let mut v = DVector::zeros(pd.group_dim());
                v[i] = 1.0;
                v
            })
            .collect();

        let rho = special_state(StateKind::PureProduct, &pd, &[]).unwrap();
        let report = stabilize(rho.matrix(), &pd, &TolerancePolicy::default()).unwrap();
        let kernel: Vec<DVector<f64>> = report.kernel_basis.iter().map(|e| e.to_coords()).collect();
        assert_eq!(kernel.len(), basis.len(), "dims {d:?}");
        assert!(max_principal_sine(&kernel, &basis) < 1e-8, "dims {d:?}");
    }
}
