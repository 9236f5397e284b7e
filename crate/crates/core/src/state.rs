//! Exact small-dimension linear algebra for three qubits: pure states,
//! density matrices, Kronecker products, partial traces, entropies, ranks
//! and projective measurements.
//!
//! # Qubit ordering
//!
//! Every three-qubit vector in this crate is ordered as `C ⊗ A ⊗ B`, so the
//! amplitude of `|c a b⟩` lives at index `4c + 2a + b` (see [`basis_index`]).
//! Two-qubit vectors keep the remaining qubits in the same relative order,
//! e.g. `(A, B)` after measuring `C`, with index `2x + y`.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{entropy_from_reduced_det, neg_x_log2_x};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Allowed deviation of a state's squared norm from one.
pub const NORM_TOL: f64 = 1e-12;
/// Maximum elementwise deviation from Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero; lower ones are errors.
pub const PSD_TOL: f64 = 1e-10;
/// Default relative tolerance for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Measurement branches below this probability are dropped from ensembles.
pub const EMPTY_BRANCH_PROBABILITY: f64 = 1e-14;

/// Largest Hilbert space handled here (three qubits).
const MAX_DIM: usize = 8;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Index of `|c a b⟩` in a `C ⊗ A ⊗ B` amplitude vector.
#[inline]
pub const fn basis_index(c: usize, a: usize, b: usize) -> usize {
    4 * c + 2 * a + b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Qubit {
    C,
    A,
    B,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::C, Qubit::A, Qubit::B];

    /// Bit position of this qubit inside [`basis_index`].
    #[inline]
    pub const fn shift(self) -> u32 {
        match self {
            Qubit::C => 2,
            Qubit::A => 1,
            Qubit::B => 0,
        }
    }

    /// The other two qubits, in canonical `C, A, B` order.
    pub const fn others(self) -> [Qubit; 2] {
        match self {
            Qubit::C => [Qubit::A, Qubit::B],
            Qubit::A => [Qubit::C, Qubit::B],
            Qubit::B => [Qubit::C, Qubit::A],
        }
    }
}

impl std::fmt::Display for Qubit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Qubit::C => "C",
            Qubit::A => "A",
            Qubit::B => "B",
        };
        f.write_str(s)
    }
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Pure state of three qubits in `C ⊗ A ⊗ B` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureTripartiteState {
    amps: [C64; 8],
}

impl PureTripartiteState {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amps: [C64; 8]) -> Result<Self> {
        let n = norm_sqr(&amps);
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: [C64; 8]) -> Result<Self> {
        let n = norm_sqr(&amps);
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        let s = n.sqrt().recip();
        amps.iter_mut().for_each(|z| *z *= s);
        Self::new(amps)
    }

    pub fn from_real(amps: [f64; 8]) -> Result<Self> {
        Self::new(amps.map(|x| c64(x, 0.0)))
    }

    /// Computational basis state `|c a b⟩`.
    pub fn basis(c: usize, a: usize, b: usize) -> Self {
        let mut amps = [C64::default(); 8];
        amps[basis_index(c & 1, a & 1, b & 1)] = c64(1.0, 0.0);
        Self { amps }
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64; 8] {
        &self.amps
    }

    #[inline]
    pub fn amplitude(&self, c: usize, a: usize, b: usize) -> C64 {
        self.amps[basis_index(c, a, b)]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Applies a single-qubit operator to `qubit`; the result must stay normalized.
    pub fn apply_local(&self, qubit: Qubit, op: &Matrix2<C64>) -> Result<Self> {
        let bit = 1usize << qubit.shift();
        let mut out = [C64::default(); 8];
        for (k, slot) in out.iter_mut().enumerate() {
            let row = usize::from(k & bit != 0);
            let k0 = k & !bit;
            *slot = op[(row, 0)] * self.amps[k0] + op[(row, 1)] * self.amps[k0 | bit];
        }
        Self::new(out)
    }

    /// Unnormalized conditional vectors `⟨k|_qubit ψ` for `k = 0, 1`, over the
    /// remaining two qubits in canonical order.
    pub fn branches(&self, qubit: Qubit) -> [[C64; 4]; 2] {
        let [hi, lo] = qubit.others();
        let mut out = [[C64::default(); 4]; 2];
        for (k, &amp) in self.amps.iter().enumerate() {
            let m = (k >> qubit.shift()) & 1;
            let x = (k >> hi.shift()) & 1;
            let y = (k >> lo.shift()) & 1;
            out[m][2 * x + y] = amp;
        }
        out
    }

    /// Full `8 × 8` projector `|ψ⟩⟨ψ|`.
    pub fn density_matrix(&self) -> CMatrix {
        CMatrix::from_fn(8, 8, |i, j| self.amps[i] * self.amps[j].conj())
    }
}

/// Pure state of two qubits, index `2x + y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitPure {
    amps: [C64; 4],
}

impl TwoQubitPure {
    pub fn new(amps: [C64; 4]) -> Result<Self> {
        let n = norm_sqr(&amps);
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self { amps })
    }

    pub fn normalized(mut amps: [C64; 4]) -> Result<Self> {
        let n = norm_sqr(&amps);
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        let s = n.sqrt().recip();
        amps.iter_mut().for_each(|z| *z *= s);
        Self::new(amps)
    }

    pub fn basis(x: usize, y: usize) -> Self {
        let mut amps = [C64::default(); 4];
        amps[2 * (x & 1) + (y & 1)] = c64(1.0, 0.0);
        Self { amps }
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amps
    }

    /// `det(ρ_first) = |a00 a11 - a01 a10|²`.
    #[inline]
    pub fn reduced_det(&self) -> f64 {
        let a = &self.amps;
        (a[0] * a[3] - a[1] * a[2]).norm_sqr()
    }

    /// Entropy of either single-qubit marginal.
    pub fn entanglement_entropy(&self) -> f64 {
        entropy_from_reduced_det(self.reduced_det())
    }

    pub fn concurrence(&self) -> f64 {
        2.0 * self.reduced_det().sqrt()
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_pure(&self.amps)
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    /// Descending, clamped at zero.
    eigenvalues: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let d = entries.nrows();
        if entries.ncols() != d || !(d == 2 || d == 4) {
            return Err(Error::UnsupportedDimension {
                dim: d,
                context: "density matrices must be 2x2 or 4x4",
            });
        }
        let mut deviation = 0f64;
        for i in 0..d {
            for j in 0..d {
                deviation = deviation.max((entries[(i, j)] - entries[(j, i)].conj()).norm());
            }
        }
        if deviation > HERMITIAN_TOL || !deviation.is_finite() {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = entries.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        let eigenvalues = clamped_spectrum(&entries)?;
        Ok(Self {
            entries,
            eigenvalues,
        })
    }

    /// `|v⟩⟨v|` for a normalized vector of length 2 or 4.
    pub fn from_pure(v: &[C64]) -> Result<Self> {
        let n = norm_sqr(v);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Self::new(CMatrix::from_fn(v.len(), v.len(), |i, j| {
            v[i] * v[j].conj()
        }))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim, dim) / c64(dim as f64, 0.0))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    #[inline]
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Spectrum in descending order, negative round-off clamped to zero.
    #[inline]
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, unitary: &CMatrix) -> Result<Self> {
        let m = unitary * &self.entries * unitary.adjoint();
        // Re-symmetrize round-off so the Hermiticity check measures the input, not the product.
        Self::new((&m + m.adjoint()) * c64(0.5, 0.0))
    }

    /// Eigen-decomposition as subnormalized vectors `√p_i |e_i⟩`, dropping
    /// components below `min_weight`.
    pub fn weighted_eigenvectors(&self, min_weight: f64) -> Vec<Vec<C64>> {
        let eig = SymmetricEigen::new(self.entries.clone());
        let mut out = Vec::new();
        for (k, &p) in eig.eigenvalues.iter().enumerate() {
            if p > min_weight {
                let s = p.sqrt();
                out.push(eig.eigenvectors.column(k).iter().map(|z| z * s).collect());
            }
        }
        out
    }
}

fn clamped_spectrum(m: &CMatrix) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::new(m.clone());
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if let Some(&worst) = values.iter().min_by(|a, b| a.total_cmp(b)) {
        if worst < -PSD_TOL || !worst.is_finite() {
            return Err(Error::NotPositive { eigenvalue: worst });
        }
    }
    values.iter_mut().for_each(|v| *v = v.max(0.0));
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Kronecker product of two vectors, with the first operand as the high-order factor.
pub fn tensor_vectors(x: &[C64], y: &[C64]) -> Result<Vec<C64>> {
    let dim = x.len() * y.len();
    if dim > MAX_DIM || dim == 0 {
        return Err(Error::UnsupportedDimension {
            dim,
            context: "tensor products are limited to three qubits",
        });
    }
    Ok(x.iter()
        .flat_map(|a| y.iter().map(move |b| a * b))
        .collect())
}

/// Kronecker product of two square matrices.
pub fn tensor_matrices(x: &CMatrix, y: &CMatrix) -> Result<CMatrix> {
    let dim = x.nrows() * y.nrows();
    if dim > MAX_DIM || dim == 0 || !x.is_square() || !y.is_square() {
        return Err(Error::UnsupportedDimension {
            dim,
            context: "tensor products are limited to square operators on three qubits",
        });
    }
    Ok(x.kronecker(y))
}

fn canonical_keep(labels: &[Qubit], keep: &[Qubit]) -> Result<Vec<usize>> {
    let mut positions = Vec::with_capacity(keep.len());
    for q in keep {
        let pos = labels
            .iter()
            .position(|l| l == q)
            .ok_or_else(|| Error::InvalidSubsystems(format!("{q} is not part of the input")))?;
        if positions.contains(&pos) {
            return Err(Error::InvalidSubsystems(format!("{q} listed twice")));
        }
        positions.push(pos);
    }
    if positions.is_empty() || positions.len() == labels.len() {
        return Err(Error::InvalidSubsystems(
            "must keep a nonempty proper subset".into(),
        ));
    }
    positions.sort_unstable();
    Ok(positions)
}

/// Traces out every qubit of `m` (labelled `labels`, most significant first)
/// except `keep`. The kept qubits appear in the order they have in `labels`.
pub fn partial_trace_matrix(
    m: &CMatrix,
    labels: &[Qubit],
    keep: &[Qubit],
) -> Result<DensityMatrix> {
    let n = labels.len();
    if m.nrows() != 1 << n || !m.is_square() {
        return Err(Error::UnsupportedDimension {
            dim: m.nrows(),
            context: "matrix size must match the subsystem labels",
        });
    }
    let kept = canonical_keep(labels, keep)?;
    let traced: Vec<usize> = (0..n).filter(|p| !kept.contains(p)).collect();
    let bit = |pos: usize| n - 1 - pos;
    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0;
        for (j, &p) in kept.iter().enumerate() {
            full |= ((kept_idx >> (kept.len() - 1 - j)) & 1) << bit(p);
        }
        for (j, &p) in traced.iter().enumerate() {
            full |= ((traced_idx >> (traced.len() - 1 - j)) & 1) << bit(p);
        }
        full
    };
    let dk = 1 << kept.len();
    let dt = 1 << traced.len();
    let reduced = CMatrix::from_fn(dk, dk, |i, j| {
        (0..dt).map(|t| m[(compose(i, t), compose(j, t))]).sum()
    });
    DensityMatrix::new(reduced)
}

/// Reduced state of a pure three-qubit state on `keep`.
pub fn partial_trace(psi: &PureTripartiteState, keep: &[Qubit]) -> Result<DensityMatrix> {
    partial_trace_matrix(&psi.density_matrix(), &Qubit::ALL, keep)
}

/// Single-qubit marginal of a two-qubit density matrix over `(A, B)`.
pub fn partial_trace_bipartite(rho: &DensityMatrix, keep: Qubit) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::UnsupportedDimension {
            dim: rho.dim(),
            context: "bipartite partial trace needs a 4x4 input",
        });
    }
    partial_trace_matrix(rho.entries(), &[Qubit::A, Qubit::B], &[keep])
}

/// `S(ρ) = -tr ρ log2 ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues().iter().map(|&p| neg_x_log2_x(p)).sum()
}

/// Number of eigenvalues above `tol` times the largest one.
pub fn numerical_rank(rho: &DensityMatrix, tol: f64) -> usize {
    let top = rho.eigenvalues().first().copied().unwrap_or(0.0);
    rho.eigenvalues().iter().filter(|&&p| p > tol * top).count()
}

/// Two-outcome projective measurement on one qubit: outcome 0 projects onto
/// `|e⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`, outcome 1 onto its orthogonal complement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Projector {
    pub subsystem: Qubit,
    pub theta: f64,
    pub phi: f64,
}

impl Projector {
    pub fn new(subsystem: Qubit, theta: f64, phi: f64) -> Self {
        Self {
            subsystem,
            theta,
            phi,
        }
    }

    pub fn sigma_z(subsystem: Qubit) -> Self {
        Self::new(subsystem, 0.0, 0.0)
    }

    pub fn sigma_x(subsystem: Qubit) -> Self {
        Self::new(subsystem, std::f64::consts::FRAC_PI_2, 0.0)
    }

    /// `[|e⟩, |e⊥⟩]`.
    pub fn basis(&self) -> [[C64; 2]; 2] {
        bloch_basis(self.theta, self.phi)
    }

    /// Matrix of the projector for `outcome`.
    pub fn matrix(&self, outcome: usize) -> Matrix2<C64> {
        let v = self.basis()[outcome & 1];
        Matrix2::new(
            v[0] * v[0].conj(),
            v[0] * v[1].conj(),
            v[1] * v[0].conj(),
            v[1] * v[1].conj(),
        )
    }
}

#[inline]
pub(crate) fn bloch_basis(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    let phase = C64::from_polar(1.0, phi);
    [[c64(c, 0.0), phase * s], [-phase.conj() * s, c64(c, 0.0)]]
}

/// Outcome of projecting one qubit of a tripartite state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub probability: f64,
    /// `None` when the probability is below [`EMPTY_BRANCH_PROBABILITY`].
    pub state: Option<TwoQubitPure>,
}

/// Applies projector `outcome` of `proj` and returns the branch weight with
/// the renormalized state of the other two qubits.
pub fn project(psi: &PureTripartiteState, proj: &Projector, outcome: usize) -> Projection {
    let e = proj.basis()[outcome & 1];
    let [b0, b1] = psi.branches(proj.subsystem);
    let mut v = [C64::default(); 4];
    for k in 0..4 {
        v[k] = e[0].conj() * b0[k] + e[1].conj() * b1[k];
    }
    let probability = norm_sqr(&v);
    let state = if probability < EMPTY_BRANCH_PROBABILITY {
        None
    } else {
        let s = probability.sqrt().recip();
        Some(TwoQubitPure {
            amps: v.map(|z| z * s),
        })
    };
    Projection { probability, state }
}

/// Both outcomes of `proj` as an ensemble of pure two-qubit states.
pub fn measure(psi: &PureTripartiteState, proj: &Projector) -> Result<Ensemble> {
    let members = (0..2)
        .map(|k| project(psi, proj, k))
        .filter_map(|p| p.state.map(|s| (p.probability, EnsembleMember::Pure(s))))
        .collect();
    Ensemble::renormalized(members)
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleMember {
    Pure(TwoQubitPure),
    Mixed(DensityMatrix),
}

/// Weighted collection of two-qubit states.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, EnsembleMember)>,
}

impl Ensemble {
    pub const SUM_TOL: f64 = 1e-10;

    pub fn new(members: Vec<(f64, EnsembleMember)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble("no members".into()));
        }
        if let Some((p, _)) = members.iter().find(|(p, _)| p.is_nan() || *p < 0.0) {
            return Err(Error::InvalidEnsemble(format!("negative weight {p}")));
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    /// Rescales weights that only miss unit sum because empty branches were dropped.
    fn renormalized(mut members: Vec<(f64, EnsembleMember)>) -> Result<Self> {
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if total > 0.0 {
            members.iter_mut().for_each(|(p, _)| *p /= total);
        }
        Self::new(members)
    }

    pub fn pure(members: Vec<(f64, TwoQubitPure)>) -> Result<Self> {
        Self::new(
            members
                .into_iter()
                .map(|(p, s)| (p, EnsembleMember::Pure(s)))
                .collect(),
        )
    }

    pub fn members(&self) -> &[(f64, EnsembleMember)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ p_i ρ_i`.
    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        let mut acc = CMatrix::zeros(4, 4);
        for (p, m) in &self.members {
            let rho = match m {
                EnsembleMember::Pure(s) => s.density_matrix()?,
                EnsembleMember::Mixed(r) => r.clone(),
            };
            acc += rho.entries() * c64(*p, 0.0);
        }
        DensityMatrix::new(acc)
    }
}
