#![allow(dead_code)]

use qutrit_dsd::linalg::{ComplexMatrix, C64};
use qutrit_dsd::states::DensityMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// `G G† / tr(G G†)` with `G` a 9 x rank Ginibre matrix.
pub fn random_density_matrix_of_rank<R: Rng>(rng: &mut R, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, 9, rank);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).expect("Ginibre states are valid")
}

pub fn random_density_matrix<R: Rng>(rng: &mut R) -> DensityMatrix {
    let rank = rng.gen_range(1..=9);
    random_density_matrix_of_rank(rng, rank)
}

/// Gram-Schmidt on the columns of a Ginibre matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random 3x3 density matrix.
pub fn random_qutrit_state<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let g = ginibre(rng, 3, 3);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m.scale_real(1.0 / tr).hermitian_part()
}

/// Change of basis `{|1>, |2>, |3>} -> {|s>, |a>, |3>}` with
/// `|s>, |a> = (|1> ± |2>) / sqrt 2`; rows are the new basis bras.
pub fn symmetric_basis() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[&[h, h, 0.0], &[h, -h, 0.0], &[0.0, 0.0, 1.0]])
}
