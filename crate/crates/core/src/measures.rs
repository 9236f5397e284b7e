//! Entanglement quantities of pure three-qubit states and their two-qubit
//! reductions.
//!
//! The assisted quantities are extremized over two-outcome projective
//! measurements on one qubit (by default `C`). Each measurement basis is a
//! Bloch direction `(θ, φ)`; antipodal directions give the same ensemble, so
//! the coarse grid only covers the upper hemisphere before the simplex
//! refinement takes over.
//!
//! Entanglement of formation uses the spin-flip concurrence. For reductions
//! of a pure state the spin-flip overlaps are built directly from the
//! conditional branches `⟨k|ψ`, so the squared concurrence carries no
//! square-root amplification of eigenvalue round-off.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::w_two_param;
use crate::info::{entropy_from_reduced_det, eof_from_concurrence_sqr, neg_x_log2_x};
use crate::optimize::NelderMead;
use crate::state::{
    bloch_basis, numerical_rank, partial_trace, von_neumann_entropy, DensityMatrix, Ensemble,
    EnsembleMember, PureTripartiteState, Qubit, C64, DEFAULT_RANK_TOL, EMPTY_BRANCH_PROBABILITY,
};

/// Raw 3-tangle values below this are reported as errors.
pub const TANGLE_TOL: f64 = 1e-8;
/// Eigen-components of a mixed state below this weight are dropped before
/// building spin-flip overlaps.
const EIGEN_WEIGHT_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    /// Grid points per axis over the Bloch hemisphere.
    pub grid: usize,
    /// Number of best grid cells refined by the simplex search.
    pub starts: usize,
    pub nelder_mead: NelderMeadSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadSettings {
    pub max_iter: usize,
    pub diameter_tol: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        let nm = NelderMead::default();
        Self {
            grid: 64,
            starts: 5,
            nelder_mead: NelderMeadSettings {
                max_iter: nm.max_iter,
                diameter_tol: nm.diameter_tol,
            },
        }
    }
}

impl OptimizerSettings {
    fn simplex(&self) -> NelderMead {
        NelderMead {
            max_iter: self.nelder_mead.max_iter,
            diameter_tol: self.nelder_mead.diameter_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSettings {
    pub optimizer: OptimizerSettings,
    pub rank_tol: f64,
}

impl Default for MeasureSettings {
    fn default() -> Self {
        Self {
            optimizer: OptimizerSettings::default(),
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

/// Measurement direction on the Bloch sphere, canonicalized to `θ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    /// Folds any `(θ, φ)` onto the upper hemisphere (antipodes are the same basis).
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let (mut x, mut y, mut z) = (st * cp, st * sp, ct);
        if z < 0.0 {
            x = -x;
            y = -y;
            z = -z;
        }
        let rho = x.hypot(y);
        let theta = rho.atan2(z);
        let phi = if rho < 1e-12 {
            0.0
        } else {
            y.atan2(x).rem_euclid(TAU)
        };
        Self { theta, phi }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssistedExtremum {
    pub value: f64,
    pub basis: BlochAngles,
    pub evals: usize,
    /// False when no refinement met the diameter tolerance; the value is still
    /// the best point seen.
    pub converged: bool,
}

/// `Σ p_i S(ρ_A^i)` over a pure-state ensemble.
pub fn ensemble_average_entropy(ensemble: &Ensemble) -> Result<f64> {
    ensemble
        .members()
        .iter()
        .map(|(p, m)| match m {
            EnsembleMember::Pure(s) => Ok(p * s.entanglement_entropy()),
            EnsembleMember::Mixed(_) => Err(Error::MixedMember),
        })
        .sum()
}

/// Average entanglement entropy of the ensemble produced by measuring along
/// `(θ, φ)`, given the unnormalized branches `⟨0|ψ`, `⟨1|ψ` of the measured qubit.
pub fn average_entropy_at(branches: &[[C64; 4]; 2], theta: f64, phi: f64) -> f64 {
    let [b0, b1] = branches;
    let mut total = 0.0;
    for e in bloch_basis(theta, phi) {
        let (e0, e1) = (e[0].conj(), e[1].conj());
        let m = [
            e0 * b0[0] + e1 * b1[0],
            e0 * b0[1] + e1 * b1[1],
            e0 * b0[2] + e1 * b1[2],
            e0 * b0[3] + e1 * b1[3],
        ];
        let p: f64 = m.iter().map(|z| z.norm_sqr()).sum();
        if p < EMPTY_BRANCH_PROBABILITY {
            continue;
        }
        let det = (m[0] * m[3] - m[1] * m[2]).norm_sqr() / (p * p);
        total += p * entropy_from_reduced_det(det);
    }
    total
}

/// Extremum of the average entanglement entropy of the two remaining qubits
/// over projective measurements on `assisting`.
pub fn assisted_entropy_extremum(
    psi: &PureTripartiteState,
    assisting: Qubit,
    mode: Extremum,
    settings: &OptimizerSettings,
) -> AssistedExtremum {
    let branches = psi.branches(assisting);
    let sign = match mode {
        Extremum::Max => -1.0,
        Extremum::Min => 1.0,
    };
    let objective = |theta: f64, phi: f64| sign * average_entropy_at(&branches, theta, phi);

    let n = settings.grid.max(2);
    let dtheta = FRAC_PI_2 / (n - 1) as f64;
    let dphi = TAU / n as f64;
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        let theta = i as f64 * dtheta;
        // The pole is a single basis.
        let phis = if i == 0 { 1 } else { n };
        for j in 0..phis {
            let phi = j as f64 * dphi;
            cells.push((objective(theta, phi), theta, phi));
        }
    }
    let mut evals = cells.len();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (v0, t0, p0) = cells[0];
    let mut best = (v0, t0, p0, false);
    let simplex = settings.simplex();
    for &(_, theta, phi) in cells.iter().take(settings.starts.max(1)) {
        let m = simplex.minimize(|x: &[f64; 2]| objective(x[0], x[1]), [theta, phi], dtheta);
        evals += m.evals;
        if m.value < best.0 || (m.value == best.0 && m.converged && !best.3) {
            best = (m.value, m.x[0], m.x[1], m.converged);
        }
    }

    AssistedExtremum {
        value: sign * best.0,
        basis: BlochAngles::canonical(best.1, best.2),
        evals,
        converged: best.3,
    }
}

/// `u^T (σ_y ⊗ σ_y) v`.
#[inline]
fn spin_flip_overlap(u: &[C64; 4], v: &[C64; 4]) -> C64 {
    -u[0] * v[3] + u[1] * v[2] + u[2] * v[1] - u[3] * v[0]
}

/// Squared concurrence of `ρ = Σ_i |v_i⟩⟨v_i|` from any (subnormalized)
/// decomposition vectors.
pub fn concurrence_sqr_from_decomposition(vectors: &[[C64; 4]]) -> f64 {
    match vectors {
        [] => 0.0,
        [v] => spin_flip_overlap(v, v).norm_sqr(),
        [u, v] => {
            // Singular values s1 >= s2 of the symmetric 2x2 overlap matrix:
            // (s1 - s2)² = ||T||_F² - 2|det T|.
            let tuu = spin_flip_overlap(u, u);
            let tuv = spin_flip_overlap(u, v);
            let tvv = spin_flip_overlap(v, v);
            let frob = tuu.norm_sqr() + 2.0 * tuv.norm_sqr() + tvv.norm_sqr();
            let det = (tuu * tvv - tuv * tuv).norm();
            (frob - 2.0 * det).max(0.0)
        }
        _ => {
            let n = vectors.len();
            let t = DMatrix::from_fn(n, n, |i, j| spin_flip_overlap(&vectors[i], &vectors[j]));
            let mut s: Vec<f64> = t.singular_values().iter().copied().collect();
            s.sort_by(|a, b| b.total_cmp(a));
            let c = (s[0] - s[1..].iter().sum::<f64>()).max(0.0);
            c * c
        }
    }
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_sqr(rho)?.sqrt())
}

fn concurrence_sqr(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::UnsupportedDimension {
            dim: rho.dim(),
            context: "concurrence needs a two-qubit state",
        });
    }
    let vectors: Vec<[C64; 4]> = rho
        .weighted_eigenvectors(EIGEN_WEIGHT_FLOOR)
        .into_iter()
        .map(|v| [v[0], v[1], v[2], v[3]])
        .collect();
    Ok(concurrence_sqr_from_decomposition(&vectors))
}

/// Entanglement of formation of a two-qubit state in bits.
pub fn eof_wootters(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence_sqr(concurrence_sqr(rho)?))
}

/// Squared concurrence of the pair left after tracing out `traced`.
pub fn pair_concurrence_sqr(psi: &PureTripartiteState, traced: Qubit) -> f64 {
    concurrence_sqr_from_decomposition(&psi.branches(traced))
}

/// `det ρ_q` for a single-qubit marginal.
pub fn marginal_det(psi: &PureTripartiteState, qubit: Qubit) -> f64 {
    let [b0, b1] = psi.branches(qubit);
    let n0: f64 = b0.iter().map(|z| z.norm_sqr()).sum();
    let n1: f64 = b1.iter().map(|z| z.norm_sqr()).sum();
    let overlap: C64 = b0.iter().zip(b1.iter()).map(|(x, y)| x.conj() * y).sum();
    (n0 * n1 - overlap.norm_sqr()).max(0.0)
}

/// `C²_{C|AB} − C²_{CA} − C²_{CB}` without clamping.
pub fn three_tangle_raw(psi: &PureTripartiteState) -> f64 {
    4.0 * marginal_det(psi, Qubit::C)
        - pair_concurrence_sqr(psi, Qubit::B)
        - pair_concurrence_sqr(psi, Qubit::A)
}

/// Residual tripartite entanglement, clamped to `[0, 1]`.
pub fn three_tangle(psi: &PureTripartiteState) -> Result<f64> {
    let raw = three_tangle_raw(psi);
    if raw < -TANGLE_TOL {
        return Err(Error::NegativeTangle { value: raw });
    }
    Ok(raw.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entropies {
    pub s_ab: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
}

pub fn entropies(psi: &PureTripartiteState) -> Result<Entropies> {
    let s = |keep: &[Qubit]| -> Result<f64> { Ok(von_neumann_entropy(&partial_trace(psi, keep)?)) };
    Ok(Entropies {
        s_ab: s(&[Qubit::A, Qubit::B])?,
        s_a: s(&[Qubit::A])?,
        s_b: s(&[Qubit::B])?,
        s_c: s(&[Qubit::C])?,
    })
}

/// `ΔS = S(ρ_AB) − |S(ρ_A) − S(ρ_B)|`.
pub fn delta_s(psi: &PureTripartiteState) -> Result<f64> {
    Ok(delta_s_from(&entropies(psi)?))
}

fn delta_s_from(e: &Entropies) -> f64 {
    let raw = e.s_ab - (e.s_a - e.s_b).abs();
    // Araki-Lieb makes this nonnegative; only round-off can push it below zero.
    if raw < 0.0 && raw > -1e-9 {
        0.0
    } else {
        raw
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranks {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Ranks {
    pub fn as_array(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }
}

pub fn marginal_ranks(psi: &PureTripartiteState, tol: f64) -> Result<Ranks> {
    let r = |q: Qubit| -> Result<usize> { Ok(numerical_rank(&partial_trace(psi, &[q])?, tol)) };
    Ok(Ranks {
        a: r(Qubit::A)?,
        b: r(Qubit::B)?,
        c: r(Qubit::C)?,
    })
}

/// Everything computed for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    /// Entanglement of formation of `ρ_AB` (spin-flip closed form).
    pub e_f: f64,
    /// Maximal average entropy over projective measurements on `C`.
    pub e_a: f64,
    /// `e_a − e_f`.
    pub abe: f64,
    pub delta_s: f64,
    pub tangle: f64,
    pub tangle_raw: f64,
    /// Minimal average entropy over projective measurements on `C`.
    pub e_f_projective: f64,
    pub ranks: Ranks,
    pub entropies: Entropies,
    pub argmax_basis: BlochAngles,
    pub argmin_basis: BlochAngles,
    pub optimizer_evals: usize,
    pub optimizer_converged: bool,
}

impl MeasureReport {
    /// `e_f_projective − e_f`; zero when the projective minimum attains the EoF.
    pub fn projective_gap(&self) -> f64 {
        self.e_f_projective - self.e_f
    }

    /// Checks the ordering `e_f ≤ e_a`, `0 ≤ abe ≤ ΔS` and `τ ∈ [0, 1]`.
    pub fn invariant_violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.e_a < self.e_f - tol {
            out.push(format!("e_a {} < e_f {}", self.e_a, self.e_f));
        }
        if self.abe < -tol {
            out.push(format!("abe {} < 0", self.abe));
        }
        if self.abe > self.delta_s + tol {
            out.push(format!("abe {} > delta_s {}", self.abe, self.delta_s));
        }
        if !(-tol..=1.0 + tol).contains(&self.tangle) {
            out.push(format!("tangle {} outside [0, 1]", self.tangle));
        }
        out
    }
}

/// Activated bipartite entanglement of `ρ_AB` with all diagnostics.
pub fn abe(psi: &PureTripartiteState, settings: &MeasureSettings) -> Result<MeasureReport> {
    let max = assisted_entropy_extremum(psi, Qubit::C, Extremum::Max, &settings.optimizer);
    let min = assisted_entropy_extremum(psi, Qubit::C, Extremum::Min, &settings.optimizer);
    let e_f = eof_from_concurrence_sqr(pair_concurrence_sqr(psi, Qubit::C));
    let tangle_raw = three_tangle_raw(psi);
    let tangle = three_tangle(psi)?;
    let entropies = entropies(psi)?;
    Ok(MeasureReport {
        e_f,
        e_a: max.value,
        abe: max.value - e_f,
        delta_s: delta_s_from(&entropies),
        tangle,
        tangle_raw,
        e_f_projective: min.value,
        ranks: marginal_ranks(psi, settings.rank_tol)?,
        entropies,
        argmax_basis: max.basis,
        argmin_basis: min.basis,
        optimizer_evals: max.evals + min.evals,
        optimizer_converged: max.converged && min.converged,
    })
}

/// Only `E_A − E_F`, skipping the diagnostics.
pub fn abe_value(psi: &PureTripartiteState, settings: &OptimizerSettings) -> f64 {
    let e_a = assisted_entropy_extremum(psi, Qubit::C, Extremum::Max, settings).value;
    e_a - eof_from_concurrence_sqr(pair_concurrence_sqr(psi, Qubit::C))
}

/// Reports for a batch, computed in parallel, in input order.
pub fn abe_batch(
    states: &[PureTripartiteState],
    settings: &MeasureSettings,
) -> Vec<Result<MeasureReport>> {
    states.par_iter().map(|psi| abe(psi, settings)).collect()
}

/// Closed forms for the two-parameter W family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct W2Analytic {
    pub e_f: f64,
    pub e_a: f64,
    pub delta_s: f64,
}

impl W2Analytic {
    pub fn abe(&self) -> f64 {
        self.e_a - self.e_f
    }
}

pub fn w2_analytic(lambda0: f64, lambda3: f64) -> Result<W2Analytic> {
    for (name, v) in [("lambda0", lambda0), ("lambda3", lambda3)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::Domain {
                name,
                value: v,
                constraint: "must be a finite nonnegative number",
            });
        }
    }
    let (l0, l3) = (lambda0 * lambda0, lambda3 * lambda3);
    if l0 + l3 > 1.0 + 1e-12 {
        return Err(Error::Domain {
            name: "lambda0^2 + lambda3^2",
            value: l0 + l3,
            constraint: "must not exceed 1",
        });
    }
    let f = neg_x_log2_x;
    let root = (1.0 - 4.0 * l3 * l0).max(0.0).sqrt();
    let e_f = 1.0 + f(1.0 - root) / 2.0 + f(1.0 + root) / 2.0;
    let e_a = -f(l0 + l3) + f(l0) + f(l3);
    let delta_s = f(l0 + l3) + f(1.0 - l0 - l3) - (f(l0) + f(1.0 - l0) - f(l3) - f(1.0 - l3)).abs();
    Ok(W2Analytic { e_f, e_a, delta_s })
}

/// The W-type state whose measures (assisting qubit `C`) the closed forms in
/// [`w2_analytic`] describe: `λ2|100⟩ + λ3|010⟩ + λ0|001⟩`.
///
/// The closed forms single out the `|001⟩` weight as the one carried by the
/// assisting party, so relative to [`w_two_param`] the `|100⟩` and `|001⟩`
/// weights trade places.
pub fn w2_analytic_state(lambda0: f64, lambda3: f64) -> Result<PureTripartiteState> {
    let lambda2 = (1.0 - lambda0 * lambda0 - lambda3 * lambda3)
        .max(0.0)
        .sqrt();
    w_two_param(lambda2, lambda3)
}

/// Closed-form parameters `(λ0, λ3)` matching a W-type state with weights on
/// `|100⟩`, `|010⟩` and `|001⟩`.
pub fn w2_analytic_params(psi: &PureTripartiteState) -> (f64, f64) {
    (psi.amplitude(0, 0, 1).norm(), psi.amplitude(0, 1, 0).norm())
}

/// Grid helper shared by the W-family scans: `(λ0, λ3)` pairs of a square
/// grid with `steps` points per axis that lie inside the quarter disk.
pub fn w2_grid(steps: usize) -> Vec<(f64, f64)> {
    let steps = steps.max(2);
    let h = 1.0 / (steps - 1) as f64;
    let mut out = Vec::new();
    for i in 0..steps {
        for j in 0..steps {
            let (l0, l3) = (i as f64 * h, j as f64 * h);
            if l0 * l0 + l3 * l3 <= 1.0 + 1e-12 {
                out.push((l0, l3));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::ghz_one_param;
    use crate::info::binary_entropy;
    use crate::state::{c64, measure, Projector, TwoQubitPure};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn bell() -> TwoQubitPure {
        let h = c64(FRAC_1_SQRT_2, 0.0);
        TwoQubitPure::new([h, c64(0.0, 0.0), c64(0.0, 0.0), h]).unwrap()
    }

    fn ordinary_w() -> PureTripartiteState {
        let s = 1.0 / 3f64.sqrt();
        w_two_param(s, s).unwrap()
    }

    #[test]
    fn ensemble_entropy_examples() {
        let e = Ensemble::pure(vec![(1.0, TwoQubitPure::basis(0, 0))]).unwrap();
        assert_eq!(ensemble_average_entropy(&e).unwrap(), 0.0);
        let e = Ensemble::pure(vec![(0.5, bell()), (0.5, bell())]).unwrap();
        assert!((ensemble_average_entropy(&e).unwrap() - 1.0).abs() < 1e-14);

        let h = c64(FRAC_1_SQRT_2, 0.0);
        let z = c64(0.0, 0.0);
        let branch = TwoQubitPure::new([z, h, h, z]).unwrap();
        let e = Ensemble::pure(vec![
            (2.0 / 3.0, branch),
            (1.0 / 3.0, TwoQubitPure::basis(0, 0)),
        ])
        .unwrap();
        assert!((ensemble_average_entropy(&e).unwrap() - 2.0 / 3.0).abs() < 1e-14);

        let sz = measure(&ordinary_w(), &Projector::sigma_z(Qubit::C)).unwrap();
        assert!((ensemble_average_entropy(&sz).unwrap() - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn mixed_members_rejected() {
        let e = Ensemble::new(vec![(
            1.0,
            EnsembleMember::Mixed(DensityMatrix::maximally_mixed(4).unwrap()),
        )])
        .unwrap();
        assert_eq!(ensemble_average_entropy(&e), Err(Error::MixedMember));
    }

    #[test]
    fn average_entropy_matches_projection_route() {
        let psi = crate::families::haar_random(3);
        let branches = psi.branches(Qubit::C);
        for (t, p) in [(0.3, 1.2), (2.0, 5.0), (FRAC_PI_2, 0.0)] {
            let e = measure(&psi, &Projector::new(Qubit::C, t, p)).unwrap();
            let direct = ensemble_average_entropy(&e).unwrap();
            assert!((direct - average_entropy_at(&branches, t, p)).abs() < 1e-13);
        }
    }

    #[test]
    fn ghz_extrema() {
        let s = OptimizerSettings::default();
        let g = ghz_one_param(FRAC_1_SQRT_2).unwrap();
        let max = assisted_entropy_extremum(&g, Qubit::C, Extremum::Max, &s);
        assert!((max.value - 1.0).abs() < 1e-12);
        assert!(
            (max.basis.theta - FRAC_PI_2).abs() < 1e-5,
            "{:?}",
            max.basis
        );
        for l1 in [0.2, 0.6, 0.9] {
            let g = ghz_one_param(l1).unwrap();
            let min = assisted_entropy_extremum(&g, Qubit::C, Extremum::Min, &s);
            assert!(min.value.abs() < 1e-12);
            assert!(min.basis.theta < 1e-4, "{:?}", min.basis);
        }
    }

    #[test]
    fn w_extremum_at_sigma_z() {
        let m = assisted_entropy_extremum(
            &ordinary_w(),
            Qubit::C,
            Extremum::Max,
            &OptimizerSettings::default(),
        );
        assert!((m.value - 2.0 / 3.0).abs() < 1e-12);
        assert!(m.basis.theta < 1e-4);
        assert!(m.converged);
    }

    #[test]
    fn concurrence_examples() {
        let rho = bell().density_matrix().unwrap();
        assert!((concurrence(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((eof_wootters(&rho).unwrap() - 1.0).abs() < 1e-12);

        let mut m = crate::state::CMatrix::zeros(4, 4);
        m[(0, 0)] = c64(0.5, 0.0);
        m[(3, 3)] = c64(0.5, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(concurrence(&rho).unwrap() < 1e-12);
        assert!(eof_wootters(&rho).unwrap() < 1e-12);

        let rho_w = partial_trace(&ordinary_w(), &[Qubit::A, Qubit::B]).unwrap();
        assert!((concurrence(&rho_w).unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!((pair_concurrence_sqr(&ordinary_w(), Qubit::C) - 4.0 / 9.0).abs() < 1e-15);
        let e_f = eof_wootters(&rho_w).unwrap();
        let analytic = w2_analytic(1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt()).unwrap();
        assert!((e_f - analytic.e_f).abs() < 5e-4);
        assert!((e_f - 0.5500).abs() < 5e-4);
    }

    #[test]
    fn concurrence_rejects_single_qubit() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(concurrence(&rho).is_err());
    }

    #[test]
    fn decomposition_routes_agree() {
        for seed in 0..20 {
            let psi = crate::families::haar_random(seed);
            for traced in Qubit::ALL {
                let keep = traced.others();
                let rho = partial_trace(&psi, &keep).unwrap();
                let via_rho = concurrence(&rho).unwrap();
                let via_branches = pair_concurrence_sqr(&psi, traced).sqrt();
                assert!(
                    (via_rho - via_branches).abs() < 1e-7,
                    "{via_rho} {via_branches}"
                );
            }
        }
    }

    #[test]
    fn tangle_examples() {
        let g = ghz_one_param(FRAC_1_SQRT_2).unwrap();
        assert!((three_tangle(&g).unwrap() - 1.0).abs() < 1e-12);
        assert!(three_tangle(&ordinary_w()).unwrap().abs() < 1e-9);
        for l1 in [0.1, 0.5, 0.8, 0.95] {
            let g = ghz_one_param(l1).unwrap();
            let expected = 4.0 * l1 * l1 * (1.0 - l1 * l1);
            assert!((three_tangle(&g).unwrap() - expected).abs() < 1e-12);
            assert!(pair_concurrence_sqr(&g, Qubit::A) < 1e-30);
            assert!(pair_concurrence_sqr(&g, Qubit::B) < 1e-30);
        }
    }

    #[test]
    fn delta_s_examples() {
        let g = ghz_one_param(0.8).unwrap();
        let ds = delta_s(&g).unwrap();
        assert!((ds - binary_entropy(0.64)).abs() < 1e-12);
        assert!((ds - 0.9427).abs() < 5e-5);

        // Bell pair on (C, A) with B = |0>.
        let mut a = [0.0; 8];
        a[0] = FRAC_1_SQRT_2;
        a[6] = FRAC_1_SQRT_2;
        let psi = PureTripartiteState::from_real(a).unwrap();
        assert!(delta_s(&psi).unwrap().abs() < 1e-12);

        assert!((delta_s(&ordinary_w()).unwrap() - 0.9183).abs() < 5e-5);
    }

    #[test]
    fn w2_analytic_examples() {
        let s = 1.0 / 3f64.sqrt();
        let w = w2_analytic(s, s).unwrap();
        assert!((w.e_a - 2.0 / 3.0).abs() < 1e-14);
        let rho = partial_trace(&ordinary_w(), &[Qubit::A, Qubit::B]).unwrap();
        assert!((w.e_f - eof_wootters(&rho).unwrap()).abs() < 1e-3);
        for l in [0.0, 0.3, 0.7, 1.0] {
            assert!(w2_analytic(0.0, l).unwrap().abe().abs() < 1e-14);
            assert!(w2_analytic(l, 0.0).unwrap().abe().abs() < 1e-14);
        }
        assert!(w2_analytic(0.9, 0.9).is_err());
        assert!(w2_analytic(-0.1, 0.2).is_err());
    }

    #[test]
    fn analytic_state_relabeling() {
        let (l0, l3) = (0.35, 0.55);
        let psi = w2_analytic_state(l0, l3).unwrap();
        let (p0, p3) = w2_analytic_params(&psi);
        assert!((p0 - l0).abs() < 1e-15 && (p3 - l3).abs() < 1e-15);
    }

    #[test]
    fn report_for_named_points() {
        let settings = MeasureSettings::default();
        let g = abe(&ghz_one_param(FRAC_1_SQRT_2).unwrap(), &settings).unwrap();
        assert!((g.abe - 1.0).abs() < 1e-9 && (g.delta_s - 1.0).abs() < 1e-9);
        assert_eq!(g.ranks.as_array(), [2, 2, 2]);
        assert!(g.invariant_violations(1e-9).is_empty());

        let w = abe(&ordinary_w(), &settings).unwrap();
        assert!((w.abe - 0.11661890708390923).abs() < 1e-9, "{}", w.abe);
        assert!((w.delta_s - 0.9182958340544896).abs() < 1e-12);
        assert!(w.projective_gap().abs() < 1e-9);

        let mut a = [0.0; 8];
        a[0] = FRAC_1_SQRT_2;
        a[3] = FRAC_1_SQRT_2;
        let bell_ab = abe(&PureTripartiteState::from_real(a).unwrap(), &settings).unwrap();
        assert!(bell_ab.abe.abs() < 1e-9);
        assert_eq!(bell_ab.ranks.as_array(), [2, 2, 1]);
    }

    #[test]
    fn canonical_angles_fold_antipodes() {
        let a = BlochAngles::canonical(PI - 0.3, 1.0);
        assert!((a.theta - 0.3).abs() < 1e-12);
        assert!((a.phi - (1.0 + PI)).abs() < 1e-12);
        let b = BlochAngles::canonical(-0.2, 0.0);
        assert!((b.theta - 0.2).abs() < 1e-12 && (b.phi - PI).abs() < 1e-12);
        assert_eq!(BlochAngles::canonical(0.0, 2.0).phi, 0.0);
    }

    #[test]
    fn grid_covers_quarter_disk() {
        let g = w2_grid(3);
        assert!(g.contains(&(0.0, 0.0)) && g.contains(&(1.0, 0.0)) && g.contains(&(0.5, 0.5)));
        assert!(!g.contains(&(1.0, 1.0)));
    }
}
