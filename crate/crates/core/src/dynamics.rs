//! Amplitude-damping dynamics of V-type qutrits.
//!
//! Two evolvers are provided. [`propagate_closed_form`] is the exact
//! element-wise solution for two independently damped atoms and is what the
//! trajectory analysis uses. [`integrate`] is a generic fixed-step RK4
//! integrator for any dissipator written as a [`JumpSpec`]; it serves as an
//! independent check on the closed form and handles single-atom models with
//! cross damping.
//!
//! Time is dimensionless throughout: every duration is `gamma_e * t`, and the
//! rates entering the two-atom dissipator are normalized so that
//! `gamma_e = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, kron, ComplexMatrix, C64};
use crate::states::{level_position, DensityMatrix, DIM, QUTRIT_DIM};

/// Default RK4 step bound in units of `1/gamma_e`.
pub const DEFAULT_DT_MAX: f64 = 1e-3;

const TRACE_DRIFT_LIMIT: f64 = 1e-9;
const NEGATIVITY_LIMIT: f64 = -1e-7;

/// Decay rates of the two excited levels of each atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayParams {
    pub gamma_e: f64,
    pub gamma_u: f64,
}

impl DecayParams {
    pub fn new(gamma_e: f64, gamma_u: f64) -> Result<Self> {
        if !(gamma_e > 0.0 && gamma_e.is_finite()) {
            return Err(Error::InvalidRates(format!("gamma_e must be positive, got {gamma_e}")));
        }
        if !(gamma_u >= 0.0 && gamma_u.is_finite()) {
            return Err(Error::InvalidRates(format!("gamma_u must be nonnegative, got {gamma_u}")));
        }
        Ok(DecayParams { gamma_e, gamma_u })
    }

    /// `gamma_e = 1`, `gamma_u = ratio`.
    pub fn from_ratio(ratio: f64) -> Result<Self> {
        Self::new(1.0, ratio)
    }

    /// `gamma_u = 0.5 gamma_e`, i.e. an interference parameter of 1/3.
    pub fn reference() -> Self {
        DecayParams {
            gamma_e: 1.0,
            gamma_u: 0.5,
        }
    }

    /// `gamma_u / gamma_e`.
    pub fn ratio(&self) -> f64 {
        self.gamma_u / self.gamma_e
    }
}

/// Transition dipoles of a three-level V atom with two excited states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DipoleSpec {
    pub mu_abs_1: f64,
    pub mu_abs_2: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    /// Cosine of the angle between the two dipole vectors.
    pub cos_angle: f64,
}

impl DipoleSpec {
    /// Builds the spec from dipole vectors. Zero vectors get `cos_angle = 0`.
    pub fn from_vectors(mu_1: [f64; 3], mu_2: [f64; 3], omega_1: f64, omega_2: f64) -> Self {
        let norm = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (n1, n2) = (norm(mu_1), norm(mu_2));
        let dot: f64 = mu_1.iter().zip(&mu_2).map(|(a, b)| a * b).sum();
        let cos_angle = if n1 > 0.0 && n2 > 0.0 {
            (dot / (n1 * n2)).clamp(-1.0, 1.0)
        } else {
            0.0
        };
        DipoleSpec {
            mu_abs_1: n1,
            mu_abs_2: n2,
            omega_1,
            omega_2,
            cos_angle,
        }
    }
}

/// Spontaneous decay constant `2 |mu|^2 / (3 hbar) * (omega / c)^3`.
pub fn decay_rate_from_dipole(mu_abs: f64, omega: f64, hbar: f64, c: f64) -> f64 {
    2.0 * mu_abs * mu_abs / (3.0 * hbar) * (omega / c).powi(3)
}

/// Mutual orientation of the two transition dipoles.
pub fn beta_i(spec: &DipoleSpec) -> f64 {
    spec.cos_angle
}

/// Cross-damping constant `beta_I * sqrt(gamma_1 * gamma_2)`.
pub fn cross_damping(spec: &DipoleSpec, gamma_1: f64, gamma_2: f64) -> f64 {
    beta_i(spec) * (gamma_1 * gamma_2).sqrt()
}

/// Interference parameter `(gamma_e - gamma_u) / (gamma_e + gamma_u)`.
pub fn beta_ii(params: &DecayParams) -> Result<f64> {
    let total = params.gamma_e + params.gamma_u;
    if total == 0.0 {
        return Err(Error::DegenerateRates);
    }
    Ok((params.gamma_e - params.gamma_u) / total)
}

/// One dissipator term
/// `(weight/2) (2 L ρ R† - R†L ρ - ρ R†L)`.
///
/// `left == right` is an ordinary decay channel; `left != right` is a
/// cross-damping term.
#[derive(Clone, Debug)]
pub struct JumpTerm {
    pub weight: f64,
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
}

/// A dissipator as a list of jump terms acting on `dim`-level states.
#[derive(Clone, Debug)]
pub struct JumpSpec {
    dim: usize,
    terms: Vec<JumpTerm>,
}

impl JumpSpec {
    pub fn new(dim: usize, terms: Vec<JumpTerm>) -> Result<Self> {
        for term in &terms {
            for op in [&term.left, &term.right] {
                if op.rows() != dim || op.cols() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: format!("{dim}x{dim} operator"),
                        found: format!("{}x{}", op.rows(), op.cols()),
                    });
                }
            }
            if !term.weight.is_finite() {
                return Err(Error::InvalidRates(format!("non-finite weight {}", term.weight)));
            }
        }
        Ok(JumpSpec { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[JumpTerm] {
        &self.terms
    }

    /// Terms whose weight is nonzero.
    pub fn active_terms(&self) -> impl Iterator<Item = &JumpTerm> {
        self.terms.iter().filter(|t| t.weight != 0.0)
    }

    /// The generator applied to `rho`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((rho.rows(), rho.cols()), (self.dim, self.dim));
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for term in self.active_terms() {
            let r_dag = term.right.adjoint();
            let r_dag_l = r_dag.matmul(&term.left);
            let jump = term.left.matmul(rho).matmul(&r_dag).scale_real(2.0);
            let anti = &r_dag_l.matmul(rho) + &rho.matmul(&r_dag_l);
            let contribution = (&jump - &anti).scale_real(term.weight / 2.0);
            out = &out + &contribution;
        }
        out
    }

    /// The generator as a sparse superoperator on row-major vectorized
    /// matrices.
    pub fn liouvillian(&self) -> Liouvillian {
        let n = self.dim * self.dim;
        let mut columns: Vec<Vec<(usize, C64)>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut basis = ComplexMatrix::zeros(self.dim, self.dim);
            basis.data_mut()[k] = C64::new(1.0, 0.0);
            let image = self.apply(&basis);
            columns.push(
                image
                    .data()
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
                    .map(|(r, z)| (r, *z))
                    .collect(),
            );
        }
        // transpose column lists into CSR rows
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n];
        for (c, col) in columns.into_iter().enumerate() {
            for (r, z) in col {
                rows[r].push((c, z));
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, z) in row {
                col_idx.push(c);
                values.push(z);
            }
            row_ptr.push(col_idx.len());
        }
        Liouvillian {
            dim: self.dim,
            row_ptr,
            col_idx,
            values,
        }
    }
}

/// Sparse (CSR) superoperator `vec(ρ) -> vec(Λρ)`.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl Liouvillian {
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        let n = self.dim * self.dim;
        debug_assert!(x.len() == n && out.len() == n);
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *o = acc;
        }
    }
}

/// `|k><l|` on a three-level atom, indexed by matrix position.
fn transition(k: usize, l: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(QUTRIT_DIM, QUTRIT_DIM);
    m[(k, l)] = C64::new(1.0, 0.0);
    m
}

fn channel(weight: f64, op: ComplexMatrix) -> JumpTerm {
    JumpTerm {
        weight,
        left: op.clone(),
        right: op,
    }
}

/// Single-atom V system with cross damping. Levels `|1>`, `|2>` (excited)
/// and `|3>` (ground) occupy positions 0, 1, 2.
pub fn system_i_dissipator(gamma_1: f64, gamma_2: f64, gamma_12: f64) -> Result<JumpSpec> {
    if !(gamma_1 >= 0.0 && gamma_2 >= 0.0) || !gamma_12.is_finite() {
        return Err(Error::InvalidRates(format!(
            "need gamma_1, gamma_2 >= 0 (got {gamma_1}, {gamma_2}, {gamma_12})"
        )));
    }
    if gamma_12 * gamma_12 > gamma_1 * gamma_2 * (1.0 + 1e-12) {
        return Err(Error::InvalidRates(format!(
            "cross damping {gamma_12} exceeds sqrt(gamma_1 gamma_2) = {}",
            (gamma_1 * gamma_2).sqrt()
        )));
    }
    let (s1, s2, s3) = (0, 1, 2);
    let terms = vec![
        channel(gamma_1, transition(s3, s1)),
        channel(gamma_2, transition(s3, s2)),
        JumpTerm {
            weight: gamma_12,
            left: transition(s3, s1),
            right: transition(s3, s2),
        },
        JumpTerm {
            weight: gamma_12,
            left: transition(s3, s2),
            right: transition(s3, s1),
        },
    ];
    JumpSpec::new(QUTRIT_DIM, terms)
}

fn sigma_ge() -> ComplexMatrix {
    transition(level_position(0), level_position(2))
}

fn sigma_gu() -> ComplexMatrix {
    transition(level_position(0), level_position(1))
}

/// Single V atom with independent channels `|e> -> |g>` at `gamma_e` and
/// `|u> -> |g>` at `gamma_u` (positions follow the qutrit basis convention).
pub fn system_ii_dissipator(gamma_e: f64, gamma_u: f64) -> Result<JumpSpec> {
    if !(gamma_e >= 0.0 && gamma_u >= 0.0) {
        return Err(Error::InvalidRates(format!("negative rate ({gamma_e}, {gamma_u})")));
    }
    JumpSpec::new(QUTRIT_DIM, vec![channel(gamma_e, sigma_ge()), channel(gamma_u, sigma_gu())])
}

/// Two atoms, each with its own reservoir. Rates are normalized to
/// `gamma_e = 1` so that integration time is `gamma_e * t`.
pub fn system_ii_dissipator_two_atom(params: &DecayParams) -> JumpSpec {
    let id = ComplexMatrix::identity(QUTRIT_DIM);
    let r = params.ratio();
    let terms = vec![
        channel(1.0, kron(&sigma_ge(), &id)),
        channel(r, kron(&sigma_gu(), &id)),
        channel(1.0, kron(&id, &sigma_ge())),
        channel(r, kron(&id, &sigma_gu())),
    ];
    JumpSpec::new(DIM, terms).expect("operators are 9x9 by construction")
}

/// Fixed-step RK4 integration of `dρ/dt = Λρ` for a matrix of any dimension.
///
/// The step is `t / ceil(t / dt_max)`. Fails with [`Error::AccuracyLoss`] if
/// the trace drifts by more than 1e-9 or an eigenvalue drops below -1e-7.
/// The result is Hermitian-symmetrized but not renormalized.
pub fn integrate_matrix(rho0: &ComplexMatrix, spec: &JumpSpec, t: f64, dt_max: f64) -> Result<ComplexMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("duration must be finite and >= 0, got {t}")));
    }
    if dt_max.is_nan() || dt_max <= 0.0 {
        return Err(Error::InvalidArgument(format!("dt_max must be positive, got {dt_max}")));
    }
    if rho0.rows() != spec.dim() || rho0.cols() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", spec.dim()),
            found: format!("{}x{}", rho0.rows(), rho0.cols()),
        });
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }

    let steps = (t / dt_max).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let lv = spec.liouvillian();
    let n = spec.dim() * spec.dim();

    let mut y: Vec<C64> = rho0.data().to_vec();
    let mut k1 = vec![C64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    for _ in 0..steps {
        lv.apply_into(&y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (0.5 * h);
        }
        lv.apply_into(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + k2[i] * (0.5 * h);
        }
        lv.apply_into(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + k3[i] * h;
        }
        lv.apply_into(&tmp, &mut k4);
        for i in 0..n {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
    }

    let out = ComplexMatrix::new(spec.dim(), spec.dim(), y)?;
    let drift = (out.trace() - rho0.trace()).norm();
    if drift > TRACE_DRIFT_LIMIT {
        return Err(Error::AccuracyLoss(format!("trace drifted by {drift:e}; reduce dt_max")));
    }
    let out = out.hermitian_part();
    let min_eig = hermitian_eigenvalues(&out, f64::INFINITY)?[0];
    if min_eig < NEGATIVITY_LIMIT {
        return Err(Error::AccuracyLoss(format!("eigenvalue {min_eig:e} below -1e-7; reduce dt_max")));
    }
    Ok(out)
}

/// RK4 evolution of a two-qutrit state under `spec`.
pub fn integrate(rho0: &DensityMatrix, spec: &JumpSpec, t: f64, dt_max: f64) -> Result<DensityMatrix> {
    integrate_matrix(rho0.as_matrix(), spec, t, dt_max).map(DensityMatrix::from_trusted)
}

/// Exact state at time `gamma_e * t` under two independent amplitude-damping
/// reservoirs.
pub fn propagate_closed_form(rho0: &DensityMatrix, t: f64, params: &DecayParams) -> Result<DensityMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(DensityMatrix::from_trusted(closed_form_matrix(rho0.as_matrix(), t, params)))
}

/// Element-wise closed-form solution. Elements are addressed with 1-based
/// indices `(i, j)` into the basis `|2,2>, |2,1>, ..., |0,0>`; only the upper
/// triangle is computed and the lower triangle is its conjugate.
pub(crate) fn closed_form_matrix(rho0: &ComplexMatrix, t: f64, params: &DecayParams) -> ComplexMatrix {
    let ge = 1.0;
    let gu = params.ratio();
    let r0 = |i: usize, j: usize| -> Complex64 { rho0[(i - 1, j - 1)] };
    let p0 = |i: usize| -> f64 { rho0[(i - 1, i - 1)].re };
    let e = |rate: f64| (-rate * t).exp();

    let mut m = ComplexMatrix::zeros(DIM, DIM);
    let mut set = |i: usize, j: usize, z: Complex64| {
        m[(i - 1, j - 1)] = z;
        m[(j - 1, i - 1)] = z.conj();
    };

    // pure decays
    let r11 = r0(1, 1) * e(2.0 * ge);
    let r12 = r0(1, 2) * e((3.0 * ge + gu) / 2.0);
    let r13 = r0(1, 3) * e(3.0 * ge / 2.0);
    let r14 = r0(1, 4) * e((3.0 * ge + gu) / 2.0);
    let r15 = r0(1, 5) * e(ge + gu);
    let r16 = r0(1, 6) * e((2.0 * ge + gu) / 2.0);
    let r17 = r0(1, 7) * e(3.0 * ge / 2.0);
    let r18 = r0(1, 8) * e((2.0 * ge + gu) / 2.0);
    let r19 = r0(1, 9) * e(ge);
    let r22 = r0(2, 2) * e(ge + gu);
    let r23 = r0(2, 3) * e((2.0 * ge + gu) / 2.0);
    let r24 = r0(2, 4) * e(ge + gu);
    let r25 = r0(2, 5) * e((ge + 3.0 * gu) / 2.0);
    let r26 = r0(2, 6) * e((ge + 2.0 * gu) / 2.0);
    let r27 = r0(2, 7) * e((2.0 * ge + gu) / 2.0);
    let r28 = r0(2, 8) * e((ge + 2.0 * gu) / 2.0);
    let r29 = r0(2, 9) * e((ge + gu) / 2.0);
    let r34 = r0(3, 4) * e((2.0 * ge + gu) / 2.0);
    let r35 = r0(3, 5) * e((ge + 2.0 * gu) / 2.0);
    let r37 = r0(3, 7) * e(ge);
    let r38 = r0(3, 8) * e((ge + gu) / 2.0);
    let r44 = r0(4, 4) * e(ge + gu);
    let r45 = r0(4, 5) * e((ge + 3.0 * gu) / 2.0);
    let r46 = r0(4, 6) * e((ge + 2.0 * gu) / 2.0);
    let r47 = r0(4, 7) * e((2.0 * ge + gu) / 2.0);
    let r48 = r0(4, 8) * e((ge + 2.0 * gu) / 2.0);
    let r49 = r0(4, 9) * e((ge + gu) / 2.0);
    let r55 = r0(5, 5) * e(2.0 * gu);
    let r56 = r0(5, 6) * e(3.0 * gu / 2.0);
    let r57 = r0(5, 7) * e((ge + 2.0 * gu) / 2.0);
    let r58 = r0(5, 8) * e(3.0 * gu / 2.0);
    let r59 = r0(5, 9) * e(gu);
    let r67 = r0(6, 7) * e((ge + gu) / 2.0);
    let r68 = r0(6, 8) * e(gu);

    // elements fed by decay out of other elements
    let r33 = (r0(1, 1) + r0(2, 2) + r0(3, 3)) * e(ge) - r11 - r22;
    let r36 = (r0(1, 4) + r0(2, 5) + r0(3, 6)) * e((ge + gu) / 2.0) - r14 - r25;
    let r39 = (r0(1, 7) + r0(2, 8) + r0(3, 9)) * e(ge / 2.0) - r17 - r28;
    let r66 = (r0(4, 4) + r0(5, 5) + r0(6, 6)) * e(gu) - r44 - r55;
    let r69 = (r0(4, 7) + r0(5, 8) + r0(6, 9)) * e(gu / 2.0) - r47 - r58;
    let r77 = (r0(1, 1) + r0(4, 4) + r0(7, 7)) * e(ge) - r11 - r44;
    let r78 = (r0(1, 2) + r0(4, 5) + r0(7, 8)) * e((ge + gu) / 2.0) - r12 - r45;
    let r79 = (r0(1, 3) + r0(4, 6) + r0(7, 9)) * e(ge / 2.0) - r13 - r46;
    let r88 = (r0(2, 2) + r0(5, 5) + r0(8, 8)) * e(gu) - r22 - r55;
    let r89 = (r0(2, 3) + r0(5, 6) + r0(8, 9)) * e(gu / 2.0) - r23 - r56;

    let r99 = 1.0 + ground_feed(&p0, t, ge, gu);

    let entries = [
        (1, 1, r11), (1, 2, r12), (1, 3, r13), (1, 4, r14), (1, 5, r15),
        (1, 6, r16), (1, 7, r17), (1, 8, r18), (1, 9, r19),
        (2, 2, r22), (2, 3, r23), (2, 4, r24), (2, 5, r25), (2, 6, r26),
        (2, 7, r27), (2, 8, r28), (2, 9, r29),
        (3, 3, r33), (3, 4, r34), (3, 5, r35), (3, 6, r36), (3, 7, r37),
        (3, 8, r38), (3, 9, r39),
        (4, 4, r44), (4, 5, r45), (4, 6, r46), (4, 7, r47), (4, 8, r48), (4, 9, r49),
        (5, 5, r55), (5, 6, r56), (5, 7, r57), (5, 8, r58), (5, 9, r59),
        (6, 6, r66), (6, 7, r67), (6, 8, r68), (6, 9, r69),
        (7, 7, r77), (7, 8, r78), (7, 9, r79),
        (8, 8, r88), (8, 9, r89),
        (9, 9, Complex64::new(r99, 0.0)),
    ];
    for (i, j, z) in entries {
        if i == j {
            set(i, j, Complex64::new(z.re, 0.0));
        } else {
            set(i, j, z);
        }
    }
    m
}

/// `Θ(t)`, with `ρ_99(t) = 1 + Θ(t)`, written as a single bracket times a
/// common decay factor. For very long times the factored form overflows; the
/// distributed form is used then.
fn ground_feed(p0: &impl Fn(usize) -> f64, t: f64, ge: f64, gu: f64) -> f64 {
    let a = 2.0 * p0(1) + p0(2) + p0(3) + p0(4) + p0(7);
    let b = p0(2) + p0(4) + 2.0 * p0(5) + p0(6) + p0(8);
    let theta = (-2.0 * (ge + gu) * t).exp()
        * (p0(1) * (2.0 * gu * t).exp() + (p0(2) + p0(4)) * ((ge + gu) * t).exp() + p0(5) * (2.0 * ge * t).exp()
            - a * ((ge + 2.0 * gu) * t).exp()
            - b * ((2.0 * ge + gu) * t).exp());
    if theta.is_finite() {
        return theta;
    }
    p0(1) * (-2.0 * ge * t).exp() + (p0(2) + p0(4)) * (-(ge + gu) * t).exp() + p0(5) * (-2.0 * gu * t).exp()
        - a * (-ge * t).exp()
        - b * (-gu * t).exp()
}
