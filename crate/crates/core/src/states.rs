//! Two-qutrit density matrices and the state families studied here.
//!
//! # Basis convention
//!
//! Each qutrit has levels `2` (excited `|e>`, decays at `gamma_e`), `1`
//! (excited `|u>`, decays at `gamma_u`) and `0` (ground `|g>`). Level `l` sits
//! at matrix position `2 - l`, and the pair `|a, b>` (atom A first) sits at
//! flat index `3 * (2 - a) + (2 - b)`. The ordering is therefore
//!
//! ```text
//! |2,2> |2,1> |2,0> |1,2> |1,1> |1,0> |0,2> |0,1> |0,0>
//!   0     1     2     3     4     5     6     7     8
//! ```
//!
//! which is also the Kronecker ordering `A ⊗ B` on positions, so operators on
//! a single atom embed as `kron(op, I_3)` / `kron(I_3, op)`.
//!
//! # Realignment
//!
//! With `rho[(3i + k, 3j + l)]` the element at A-row `i`, B-row `k`, A-column
//! `j`, B-column `l`, the realigned matrix is
//! `R[(3i + j, 3k + l)] = rho[(3i + k, 3j + l)]`: rows collect the A indices,
//! columns the B indices. A product `a ⊗ b` realigns to `vec(a) vec(b)^T`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, kron, ComplexMatrix, C64, HERMITIAN_TOL};

/// Local dimension of each qutrit.
pub const QUTRIT_DIM: usize = 3;
/// Dimension of the two-qutrit space.
pub const DIM: usize = 9;

/// Tolerance on Hermiticity and unit trace for [`DensityMatrix`].
pub const STATE_TOL: f64 = 1e-10;
/// Smallest eigenvalue a valid state may have (PSD up to rounding).
pub const PSD_TOL: f64 = 1e-9;
/// Tolerance on `U U† = I` for local unitaries.
pub const UNITARY_TOL: f64 = 1e-10;

/// Matrix position of a single-qutrit level.
pub fn level_position(level: usize) -> usize {
    assert!(level < QUTRIT_DIM, "qutrit level {level} out of range");
    QUTRIT_DIM - 1 - level
}

/// Flat index of `|a, b>`.
pub fn basis_index(a: usize, b: usize) -> usize {
    QUTRIT_DIM * level_position(a) + level_position(b)
}

/// Inverse of [`basis_index`]: the level pair `(a, b)` at a flat index.
pub fn basis_levels(index: usize) -> (usize, usize) {
    assert!(index < DIM);
    (QUTRIT_DIM - 1 - index / QUTRIT_DIM, QUTRIT_DIM - 1 - index % QUTRIT_DIM)
}

/// The computational basis vector `|a, b>`.
pub fn ket(a: usize, b: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); DIM];
    v[basis_index(a, b)] = C64::new(1.0, 0.0);
    v
}

fn superpose(kets: &[(usize, usize)]) -> Vec<C64> {
    let norm = 1.0 / (kets.len() as f64).sqrt();
    let mut v = vec![C64::new(0.0, 0.0); DIM];
    for &(a, b) in kets {
        v[basis_index(a, b)] += C64::new(norm, 0.0);
    }
    v
}

fn projector_mix(kets: &[(usize, usize)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(DIM, DIM);
    let w = 1.0 / kets.len() as f64;
    for &(a, b) in kets {
        let i = basis_index(a, b);
        m[(i, i)] += C64::new(w, 0.0);
    }
    m
}

/// `|Ψ+> = (|0,1> + |1,0> + |2,2>) / √3`.
pub fn psi_plus() -> Vec<C64> {
    superpose(&[(0, 1), (1, 0), (2, 2)])
}

/// `(|0,0> + |1,1> + |2,2>) / √3`, the image of [`psi_plus`] under `I ⊗ θ`.
pub fn psi_plus_rotated() -> Vec<C64> {
    superpose(&[(0, 0), (1, 1), (2, 2)])
}

/// The single-qutrit unitary `θ = |0><1| + |1><0| + |2><2|`.
pub fn theta() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(QUTRIT_DIM, QUTRIT_DIM);
    let one = C64::new(1.0, 0.0);
    m[(level_position(0), level_position(1))] = one;
    m[(level_position(1), level_position(0))] = one;
    m[(level_position(2), level_position(2))] = one;
    m
}

/// A validated two-qutrit density matrix: 9×9, Hermitian and unit trace
/// within [`STATE_TOL`], smallest eigenvalue at least `-PSD_TOL`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `mat` against every invariant. Violations are reported as
    /// [`Error::InvalidState`] naming the failed check.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != DIM || mat.cols() != DIM {
            return Err(Error::DimensionMismatch {
                expected: "9x9".into(),
                found: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        let defect = mat.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "hermiticity",
                value: defect,
            });
        }
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "trace",
                value: trace,
            });
        }
        let min_eig = hermitian_eigenvalues(&mat, HERMITIAN_TOL)?[0];
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState {
                invariant: "positivity",
                value: min_eig,
            });
        }
        Ok(DensityMatrix { mat })
    }

    /// Wraps a matrix already known to satisfy the invariants (built by
    /// construction or by a trace- and positivity-preserving map).
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        debug_assert_eq!((mat.rows(), mat.cols()), (DIM, DIM));
        DensityMatrix { mat }
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Element at flat indices `(i, j)`.
    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Population of `|a, b>`.
    pub fn population(&self, a: usize, b: usize) -> f64 {
        let i = basis_index(a, b);
        self.mat[(i, i)].re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.mat, HERMITIAN_TOL)
    }

    /// Pure state `|ψ><ψ|`; `psi` is normalized here.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        if psi.len() != DIM {
            return Err(Error::DimensionMismatch {
                expected: "9 amplitudes".into(),
                found: format!("{}", psi.len()),
            });
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_trusted(ComplexMatrix::outer(&v, &v)))
    }

    /// Product state `a ⊗ b` of two single-qutrit density matrices.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(kron(a, b))
    }

    /// `|a, b><a, b|`.
    pub fn basis_state(a: usize, b: usize) -> Self {
        Self::from_trusted(ComplexMatrix::outer(&ket(a, b), &ket(a, b)))
    }

    /// Both atoms in the ground state, `|0,0><0,0|`.
    pub fn ground() -> Self {
        Self::basis_state(0, 0)
    }

    pub fn maximally_mixed() -> Self {
        Self::from_trusted(ComplexMatrix::identity(DIM).scale_real(1.0 / DIM as f64))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (2.0..=5.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// `ρ_α = (2/7)|Ψ+><Ψ+| + (α/7)σ+ + ((5-α)/7)σ-` for `2 <= α <= 5`.
///
/// Separable for `α <= 3`, PPT entangled for `3 < α <= 4` and NPT for `α > 4`.
pub fn horodecki_state(alpha: f64) -> Result<DensityMatrix> {
    check_alpha(alpha)?;
    let psi = psi_plus();
    let sigma_plus = projector_mix(&[(0, 0), (1, 2), (2, 1)]);
    let sigma_minus = projector_mix(&[(1, 1), (2, 0), (0, 2)]);
    Ok(mix_family(&psi, &sigma_plus, &sigma_minus, alpha))
}

/// `σ_α = (I ⊗ θ) ρ_α (I ⊗ θ)†`, built directly from its rotated components.
pub fn horodecki_state_rotated(alpha: f64) -> Result<DensityMatrix> {
    check_alpha(alpha)?;
    let psi = psi_plus_rotated();
    let sigma_plus = projector_mix(&[(0, 1), (1, 2), (2, 0)]);
    let sigma_minus = projector_mix(&[(1, 0), (2, 1), (0, 2)]);
    Ok(mix_family(&psi, &sigma_plus, &sigma_minus, alpha))
}

fn mix_family(psi: &[C64], sigma_plus: &ComplexMatrix, sigma_minus: &ComplexMatrix, alpha: f64) -> DensityMatrix {
    let entangled = ComplexMatrix::outer(psi, psi).scale_real(2.0 / 7.0);
    let noise = &sigma_plus.scale_real(alpha / 7.0) + &sigma_minus.scale_real((5.0 - alpha) / 7.0);
    DensityMatrix::from_trusted(&entangled + &noise)
}

/// Isotropic state `p|Ψ+><Ψ+| + (1-p)/9 I` for `0 <= p <= 1`.
pub fn isotropic_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::POutOfRange(p));
    }
    let psi = psi_plus();
    let pure = ComplexMatrix::outer(&psi, &psi).scale_real(p);
    let noise = ComplexMatrix::identity(DIM).scale_real((1.0 - p) / DIM as f64);
    Ok(DensityMatrix::from_trusted(&pure + &noise))
}

/// Which qutrit a partial transpose acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Subsystem {
    A,
    #[default]
    B,
}

/// Partial transpose of any 9×9 matrix on one 3-level factor.
pub fn partial_transpose_matrix(m: &ComplexMatrix, subsystem: Subsystem) -> ComplexMatrix {
    assert_eq!((m.rows(), m.cols()), (DIM, DIM));
    let d = QUTRIT_DIM;
    ComplexMatrix::from_fn(DIM, DIM, |r, c| {
        let (i, k) = (r / d, r % d);
        let (j, l) = (c / d, c % d);
        match subsystem {
            Subsystem::A => m[(j * d + k, i * d + l)],
            Subsystem::B => m[(i * d + l, j * d + k)],
        }
    })
}

/// Partial transpose of a state. Hermitian and unit trace, possibly not PSD.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> ComplexMatrix {
    partial_transpose_matrix(rho.as_matrix(), subsystem)
}

/// Realignment of any 9×9 matrix (see the module docs for the index map).
pub fn realign_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!((m.rows(), m.cols()), (DIM, DIM));
    let d = QUTRIT_DIM;
    ComplexMatrix::from_fn(DIM, DIM, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        m[(i * d + k, j * d + l)]
    })
}

pub fn realign(rho: &DensityMatrix) -> ComplexMatrix {
    realign_matrix(rho.as_matrix())
}

/// `(uA ⊗ uB) ρ (uA ⊗ uB)†`.
pub fn local_unitary_conjugate(rho: &DensityMatrix, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<DensityMatrix> {
    for u in [u_a, u_b] {
        if u.rows() != QUTRIT_DIM || u.cols() != QUTRIT_DIM {
            return Err(Error::DimensionMismatch {
                expected: "3x3 unitary".into(),
                found: format!("{}x{}", u.rows(), u.cols()),
            });
        }
        let defect = u.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary { defect });
        }
    }
    let u = kron(u_a, u_b);
    let out = &(&u * rho.as_matrix()) * &u.adjoint();
    Ok(DensityMatrix::from_trusted(out.hermitian_part()))
}

/// Serializes a state in the plain-text matrix format: a `dim 9` header then
/// nine rows of nine `re+imj` entries with 12 significant digits.
pub fn write_density_matrix(rho: &DensityMatrix) -> String {
    write_matrix_text(rho.as_matrix())
}

/// Same format for an arbitrary square matrix.
pub fn write_matrix_text(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", m.rows()).unwrap();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_complex(m[(i, j)])).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

fn format_complex(z: C64) -> String {
    // 12 significant digits; normalize -0 so output is stable.
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    format!("{re:.11e}{im:+.11e}j")
}

/// Parses the plain-text matrix format. Whitespace between tokens (including
/// line breaks) is free-form; the header must be `dim N`.
pub fn parse_matrix_text(text: &str) -> Result<ComplexMatrix> {
    let mut tokens = text.lines().enumerate().flat_map(|(ln, line)| {
        let base = line.as_ptr() as usize;
        line.split_whitespace()
            .map(move |tok| (ln + 1, tok.as_ptr() as usize - base + 1, tok))
    });

    let parse_err = |line, column, message: String| Error::Parse { line, column, message };

    let (line, column, keyword) = tokens
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty input; expected `dim N` header".into()))?;
    if keyword != "dim" {
        return Err(parse_err(line, column, format!("expected `dim`, found `{keyword}`")));
    }
    let (line, column, dim_tok) = tokens
        .next()
        .ok_or_else(|| parse_err(line, column + 3, "missing dimension after `dim`".into()))?;
    let dim: usize = dim_tok
        .parse()
        .ok()
        .filter(|&d| d > 0)
        .ok_or_else(|| parse_err(line, column, format!("invalid dimension `{dim_tok}`")))?;

    let mut data = Vec::with_capacity(dim * dim);
    let mut last = (line, column);
    for (line, column, tok) in tokens {
        if data.len() == dim * dim {
            return Err(parse_err(line, column, format!("unexpected extra entry `{tok}`")));
        }
        let z = parse_complex(tok).ok_or_else(|| parse_err(line, column, format!("malformed complex number `{tok}`")))?;
        data.push(z);
        last = (line, column);
    }
    if data.len() != dim * dim {
        return Err(parse_err(
            last.0,
            last.1,
            format!("expected {} entries, found {}", dim * dim, data.len()),
        ));
    }
    ComplexMatrix::new(dim, dim, data)
}

/// Parses `a+bj`, `a-bj`, a bare real `a`, or a bare imaginary `bj`.
fn parse_complex(tok: &str) -> Option<C64> {
    let body = tok.strip_suffix('j').or_else(|| tok.strip_suffix('i'));
    let Some(body) = body else {
        return tok.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, body[k..].parse::<f64>().ok()?),
        None => (0.0, body.parse::<f64>().ok()?),
    };
    if !re.is_finite() || !im.is_finite() {
        return None;
    }
    Some(C64::new(re, im))
}

/// Parses and validates a two-qutrit state.
pub fn parse_density_matrix(text: &str) -> Result<DensityMatrix> {
    DensityMatrix::new(parse_matrix_text(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_norm;

    fn min_pt_eigenvalue(rho: &DensityMatrix) -> f64 {
        hermitian_eigenvalues(&partial_transpose(rho, Subsystem::B), 1e-10).unwrap()[0]
    }

    #[test]
    fn basis_convention_is_bijective_and_matches_ordering() {
        let order = [(2, 2), (2, 1), (2, 0), (1, 2), (1, 1), (1, 0), (0, 2), (0, 1), (0, 0)];
        for (idx, &(a, b)) in order.iter().enumerate() {
            assert_eq!(basis_index(a, b), idx);
            assert_eq!(basis_levels(idx), (a, b));
        }
    }

    #[test]
    fn constructors_satisfy_state_invariants() {
        for alpha in [2.0, 2.5, 3.0, 3.5, 4.0, 4.2, 4.5, 5.0] {
            DensityMatrix::new(horodecki_state(alpha).unwrap().into_matrix()).unwrap();
            DensityMatrix::new(horodecki_state_rotated(alpha).unwrap().into_matrix()).unwrap();
        }
        for p in [0.0, 0.25, 0.5, 1.0] {
            DensityMatrix::new(isotropic_state(p).unwrap().into_matrix()).unwrap();
        }
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        assert!(matches!(horodecki_state(1.9), Err(Error::AlphaOutOfRange(_))));
        assert!(matches!(horodecki_state_rotated(5.1), Err(Error::AlphaOutOfRange(_))));
        assert!(matches!(isotropic_state(-0.1), Err(Error::POutOfRange(_))));
        assert!(matches!(isotropic_state(1.5), Err(Error::POutOfRange(_))));
    }

    #[test]
    fn rotated_family_is_local_conjugate() {
        let i3 = ComplexMatrix::identity(3);
        for alpha in [2.0, 3.3, 4.2, 5.0] {
            let direct = horodecki_state_rotated(alpha).unwrap();
            let conj = local_unitary_conjugate(&horodecki_state(alpha).unwrap(), &i3, &theta()).unwrap();
            assert!(direct.as_matrix().max_abs_diff(conj.as_matrix()) < 1e-15);
        }
        let a = horodecki_state(4.2).unwrap().eigenvalues().unwrap();
        let b = horodecki_state_rotated(4.2).unwrap().eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_conjugation_is_noop_and_non_unitary_rejected() {
        let rho = horodecki_state(4.2).unwrap();
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(local_unitary_conjugate(&rho, &i3, &i3).unwrap(), rho);
        let bad = ComplexMatrix::from_diag(&[1.0, 1.0, 2.0]);
        assert!(matches!(local_unitary_conjugate(&rho, &i3, &bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn partial_transpose_on_products_and_involution() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i + 2 * j) as f64, (i as f64) - (j as f64)));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((3 * i + j) as f64, (j as f64) * 0.5));
        let prod = kron(&a, &b);
        assert_eq!(partial_transpose_matrix(&prod, Subsystem::B), kron(&a, &b.transpose()));
        assert_eq!(partial_transpose_matrix(&prod, Subsystem::A), kron(&a.transpose(), &b));
        let rho = horodecki_state(4.7).unwrap();
        for sub in [Subsystem::A, Subsystem::B] {
            let twice = partial_transpose_matrix(&partial_transpose(&rho, sub), sub);
            assert_eq!(&twice, rho.as_matrix());
        }
    }

    #[test]
    fn partial_transpose_spectrum_independent_of_side() {
        for rho in [horodecki_state(4.6).unwrap(), isotropic_state(0.7).unwrap()] {
            let pa = partial_transpose(&rho, Subsystem::A);
            let pb = partial_transpose(&rho, Subsystem::B);
            assert!((pa.trace().re - 1.0).abs() < 1e-14);
            assert!(pa.hermiticity_defect() < 1e-15);
            let ea = hermitian_eigenvalues(&pa, 1e-10).unwrap();
            let eb = hermitian_eigenvalues(&pb, 1e-10).unwrap();
            for (x, y) in ea.iter().zip(&eb) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn horodecki_boundary_at_alpha_four_is_ppt() {
        assert!(min_pt_eigenvalue(&horodecki_state(4.0).unwrap()) >= -1e-12);
        assert!(min_pt_eigenvalue(&horodecki_state(2.5).unwrap()) >= 0.0);
        assert!(min_pt_eigenvalue(&horodecki_state(4.2).unwrap()) < -1e-3);
    }

    #[test]
    fn realignment_of_products_factorizes() {
        let a = ComplexMatrix::from_diag(&[0.5, 0.3, 0.2]);
        let b = ComplexMatrix::from_diag(&[0.6, 0.4, 0.0]);
        let rho = DensityMatrix::product(&a, &b).unwrap();
        let expected = a.frobenius_norm() * b.frobenius_norm();
        assert!((trace_norm(&realign(&rho)).unwrap() - expected).abs() < 1e-14);
        assert!(expected <= 1.0);
    }

    #[test]
    fn realignment_of_maximally_entangled_state() {
        let rho = DensityMatrix::pure(&psi_plus()).unwrap();
        assert!((trace_norm(&realign(&rho)).unwrap() - 3.0).abs() < 1e-13);
        let rho = DensityMatrix::pure(&psi_plus_rotated()).unwrap();
        assert!((trace_norm(&realign(&rho)).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn realignment_detects_bound_entanglement() {
        let rho = horodecki_state(3.5).unwrap();
        assert!(trace_norm(&realign(&rho)).unwrap() > 1.0);
    }

    #[test]
    fn realignment_trace_norm_symmetric_under_factor_swap() {
        // SWAP |i,k> -> |k,i>
        let swap = ComplexMatrix::from_fn(9, 9, |r, c| {
            if r == 3 * (c % 3) + c / 3 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        for alpha in [2.5, 3.5, 4.2, 5.0] {
            let rho = horodecki_state(alpha).unwrap();
            let swapped = &(&swap * rho.as_matrix()) * &swap;
            let a = trace_norm(&realign(&rho)).unwrap();
            let b = trace_norm(&realign_matrix(&swapped)).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn text_format_round_trip() {
        let rho = local_unitary_conjugate(
            &horodecki_state(4.2).unwrap(),
            &ComplexMatrix::from_fn(3, 3, |i, j| {
                let w = std::f64::consts::TAU * (i * j) as f64 / 3.0;
                C64::from_polar(1.0 / 3f64.sqrt(), w)
            }),
            &theta(),
        )
        .unwrap();
        let text = write_density_matrix(&rho);
        assert!(text.starts_with("dim 9\n"));
        assert_eq!(text.lines().count(), 10);
        let back = parse_density_matrix(&text).unwrap();
        assert!(back.as_matrix().max_abs_diff(rho.as_matrix()) < 1e-12);
        // writer output is stable
        assert_eq!(write_density_matrix(&back), write_density_matrix(&parse_density_matrix(&write_density_matrix(&back)).unwrap()));
    }

    #[test]
    fn parser_accepts_free_whitespace_and_short_forms() {
        let text = "dim 2\n  0.5   0.1-0.2j\n\t0.1+0.2j\n0.5+0j  ";
        let m = parse_matrix_text(text).unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.1, -0.2));
        assert_eq!(m[(1, 0)], C64::new(0.1, 0.2));
        assert_eq!(parse_complex("1e-3-2.5E+2j"), Some(C64::new(1e-3, -250.0)));
        assert_eq!(parse_complex("-3j"), Some(C64::new(0.0, -3.0)));
        assert_eq!(parse_complex("-1.5"), Some(C64::new(-1.5, 0.0)));
    }

    #[test]
    fn parser_reports_positions() {
        let err = parse_matrix_text("dim 2\n1 0\n0 x1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                column: 3,
                message: "malformed complex number `x1`".into()
            }
        );
        assert!(matches!(parse_matrix_text("size 2"), Err(Error::Parse { line: 1, column: 1, .. })));
        assert!(matches!(parse_matrix_text("dim 2\n1 0 0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix_text("dim 1\n1 2"), Err(Error::Parse { line: 2, column: 3, .. })));
    }

    #[test]
    fn validation_names_the_violated_invariant() {
        let scaled = horodecki_state(4.2).unwrap().into_matrix().scale_real(0.9);
        match DensityMatrix::new(scaled) {
            Err(Error::InvalidState { invariant: "trace", value }) => assert!((value - 0.9).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let mut m = ComplexMatrix::from_diag(&[0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState { invariant: "hermiticity", .. })));
        let m = ComplexMatrix::from_diag(&[1.5, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState { invariant: "positivity", .. })));
    }
}
