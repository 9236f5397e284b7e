//! Jones-matrix simulation of single-photon circuits over
//! `path ⊗ polarization ⊗ transverse mode`.
//!
//! The three degrees of freedom carry qubits `C` (path `u`/`d`), `A`
//! (polarization `H`/`V`) and `B` (first-order Hermite-Gauss mode `h`/`v`),
//! so amplitudes share the crate-wide `4c + 2a + b` index map.
//!
//! Conventions: PBS transmits `H` (path unchanged) and reflects `V` (path
//! swapped) with real amplitudes; the balanced beam splitter maps
//! `|u⟩ → (|u⟩ + |d⟩)/√2` and `|d⟩ → (|u⟩ − |d⟩)/√2`; the Dove prism is an
//! ideal `h ↔ v` mode flipper.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::SMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::seeded_rng;
use crate::measures::ensemble_average_entropy;
use crate::state::{
    basis_index, c64, measure, Ensemble, Projector, PureTripartiteState, Qubit, C64,
};

pub type Operator8 = SMatrix<C64, 8, 8>;

const H: usize = 0;
const V: usize = 1;
const U: usize = 0;
const D: usize = 1;

/// Subset of the two paths an element sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSet {
    pub up: bool,
    pub down: bool,
}

impl PathSet {
    pub const UP: PathSet = PathSet {
        up: true,
        down: false,
    };
    pub const DOWN: PathSet = PathSet {
        up: false,
        down: true,
    };
    pub const BOTH: PathSet = PathSet {
        up: true,
        down: true,
    };

    #[inline]
    fn contains(&self, path: usize) -> bool {
        if path == U {
            self.up
        } else {
            self.down
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ElementKind {
    /// S-wave plate: turns `|Hh⟩` into the radially polarized spin-orbit
    /// state `(|Hh⟩ + |Vv⟩)/√2` in every path.
    SWave,
    /// Transmitted port of the first PBS, post-selected and renormalized.
    PrepProject,
    Pbs,
    Hwp {
        paths: PathSet,
    },
    Hwp45 {
        paths: PathSet,
    },
    /// Dove prism at 45°. With `arm` set it sits in the corresponding arm of a
    /// PBS/PBS interferometer and flips only that polarization component.
    DovePrism45 {
        paths: PathSet,
        arm: Option<Polarization>,
    },
    BeamSplitter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalElement {
    pub kind: ElementKind,
    pub label: String,
    /// Fast-axis angle in degrees, for wave plates.
    pub nominal_angle: Option<f64>,
    /// Angle actually used; equals the nominal one until perturbed.
    pub perturbed_angle: Option<f64>,
}

impl OpticalElement {
    fn fixed(kind: ElementKind, label: &str) -> Self {
        Self {
            kind,
            label: label.to_owned(),
            nominal_angle: None,
            perturbed_angle: None,
        }
    }

    pub fn hwp(angle_deg: f64, paths: PathSet, label: &str) -> Self {
        Self {
            kind: ElementKind::Hwp { paths },
            label: label.to_owned(),
            nominal_angle: Some(angle_deg),
            perturbed_angle: Some(angle_deg),
        }
    }

    pub fn hwp45(paths: PathSet, label: &str) -> Self {
        Self {
            kind: ElementKind::Hwp45 { paths },
            label: label.to_owned(),
            nominal_angle: Some(45.0),
            perturbed_angle: Some(45.0),
        }
    }

    pub fn swave() -> Self {
        Self::fixed(ElementKind::SWave, "swp")
    }

    pub fn prep_project() -> Self {
        Self::fixed(ElementKind::PrepProject, "pbs_prep")
    }

    pub fn pbs(label: &str) -> Self {
        Self::fixed(ElementKind::Pbs, label)
    }

    pub fn dove_prism(paths: PathSet, arm: Option<Polarization>, label: &str) -> Self {
        Self::fixed(ElementKind::DovePrism45 { paths, arm }, label)
    }

    pub fn beam_splitter() -> Self {
        Self::fixed(ElementKind::BeamSplitter, "bs")
    }

    pub fn is_waveplate(&self) -> bool {
        matches!(
            self.kind,
            ElementKind::Hwp { .. } | ElementKind::Hwp45 { .. }
        )
    }

    /// Action on the 8-dimensional space at the current angle.
    pub fn matrix(&self) -> Operator8 {
        let mut m = Operator8::zeros();
        for p in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let col = basis_index(p, a, b);
                    for (row, amp) in self.image(p, a, b) {
                        m[(row, col)] += amp;
                    }
                }
            }
        }
        m
    }

    /// Output amplitudes for the input basis state `|p a b⟩`.
    fn image(&self, p: usize, a: usize, b: usize) -> Vec<(usize, C64)> {
        let real = |x: f64| c64(x, 0.0);
        let waveplate = |paths: &PathSet| -> Vec<(usize, C64)> {
            if !paths.contains(p) {
                return vec![(basis_index(p, a, b), real(1.0))];
            }
            let two_theta = 2.0 * self.perturbed_angle.unwrap_or(0.0).to_radians();
            let (s, c) = two_theta.sin_cos();
            // Columns of [[cos 2θ, sin 2θ], [sin 2θ, −cos 2θ]].
            let (to_h, to_v) = if a == H { (c, s) } else { (s, -c) };
            vec![
                (basis_index(p, H, b), real(to_h)),
                (basis_index(p, V, b), real(to_v)),
            ]
        };
        match &self.kind {
            ElementKind::SWave => {
                let (to_h, to_v) = if a == H {
                    (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
                } else {
                    (FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
                };
                vec![
                    (basis_index(p, H, b), real(to_h)),
                    (basis_index(p, V, b ^ 1), real(to_v)),
                ]
            }
            ElementKind::PrepProject => {
                if a == H {
                    vec![(basis_index(p, a, b), real(1.0))]
                } else {
                    vec![]
                }
            }
            ElementKind::Pbs => {
                let out_path = if a == H { p } else { p ^ 1 };
                vec![(basis_index(out_path, a, b), real(1.0))]
            }
            ElementKind::Hwp { paths } | ElementKind::Hwp45 { paths } => waveplate(paths),
            ElementKind::DovePrism45 { paths, arm } => {
                let in_arm = match arm {
                    None => true,
                    Some(Polarization::H) => a == H,
                    Some(Polarization::V) => a == V,
                };
                let flip = paths.contains(p) && in_arm;
                vec![(basis_index(p, a, if flip { b ^ 1 } else { b }), real(1.0))]
            }
            ElementKind::BeamSplitter => {
                let sign = if p == U { 1.0 } else { -1.0 };
                vec![
                    (basis_index(U, a, b), real(FRAC_1_SQRT_2)),
                    (basis_index(D, a, b), real(sign * FRAC_1_SQRT_2)),
                ]
            }
        }
    }

    /// `max |(M†M − I)_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let m = self.matrix();
        (m.adjoint() * m - Operator8::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Photon state over `path ⊗ polarization ⊗ mode`; may be subnormalized
/// between a lossy element and its renormalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalState {
    amps: [C64; 8],
}

impl OpticalState {
    /// Single photon in path `u`, `H` polarized, mode `h`.
    pub fn source() -> Self {
        let mut amps = [C64::default(); 8];
        amps[basis_index(U, H, 0)] = c64(1.0, 0.0);
        Self { amps }
    }

    pub fn from_tripartite(psi: &PureTripartiteState) -> Self {
        Self {
            amps: *psi.amplitudes(),
        }
    }

    pub fn amplitudes(&self) -> &[C64; 8] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn to_tripartite(&self) -> Result<PureTripartiteState> {
        PureTripartiteState::new(self.amps)
    }
}

pub fn apply_element(state: &OpticalState, element: &OpticalElement) -> Result<OpticalState> {
    if element.is_waveplate() && element.perturbed_angle.is_none() {
        return Err(Error::ElementMismatch {
            element: "wave plate",
            reason: "no angle set",
        });
    }
    let v = element.matrix() * nalgebra::SVector::<C64, 8>::from_column_slice(&state.amps);
    let mut amps = [C64::default(); 8];
    amps.copy_from_slice(v.as_slice());
    if matches!(element.kind, ElementKind::PrepProject) {
        let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if n < 1e-300 {
            return Err(Error::ElementMismatch {
                element: "prep projection",
                reason: "no amplitude survives post-selection",
            });
        }
        let s = n.sqrt().recip();
        amps.iter_mut().for_each(|z| *z *= s);
    }
    Ok(OpticalState { amps })
}

/// Which wave plates receive angle errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbScope {
    /// The variable plates that set the state parameters.
    ParameterPlates,
    /// Every wave plate, fixed 45° plates included.
    #[default]
    AllWaveplates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalCircuit {
    pub elements: Vec<OpticalElement>,
    pub seed: u64,
    /// Half-width in degrees of the uniform angle error.
    pub error_halfwidth: f64,
    pub scope: PerturbScope,
}

impl OpticalCircuit {
    pub fn new(elements: Vec<OpticalElement>) -> Self {
        Self {
            elements,
            seed: 0,
            error_halfwidth: 1.0,
            scope: PerturbScope::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_error_halfwidth(mut self, degrees: f64) -> Self {
        self.error_halfwidth = degrees;
        self
    }

    pub fn with_scope(mut self, scope: PerturbScope) -> Self {
        self.scope = scope;
        self
    }

    fn in_scope(&self, e: &OpticalElement) -> bool {
        matches!(
            (self.scope, &e.kind),
            (_, ElementKind::Hwp { .. }) | (PerturbScope::AllWaveplates, ElementKind::Hwp45 { .. })
        )
    }

    /// All angles reset to nominal.
    pub fn nominal(&self) -> Self {
        let mut out = self.clone();
        for e in out.elements.iter_mut() {
            e.perturbed_angle = e.nominal_angle;
        }
        out
    }

    /// Angles redrawn uniformly in `nominal ± error_halfwidth` from `seed`,
    /// one draw per plate in circuit order.
    pub fn perturbed(&self) -> Self {
        let mut rng = seeded_rng(self.seed);
        let hw = self.error_halfwidth.abs();
        let mut out = self.nominal();
        for e in out.elements.iter_mut() {
            if !self.in_scope(e) {
                continue;
            }
            if let Some(nominal) = e.nominal_angle {
                let delta = if hw > 0.0 {
                    rng.random_range(-hw..=hw)
                } else {
                    0.0
                };
                e.perturbed_angle = Some(nominal + delta);
            }
        }
        out
    }

    /// `(label, angle in degrees)` for every wave plate, as currently set.
    pub fn waveplate_angles(&self) -> Vec<(String, f64)> {
        self.elements
            .iter()
            .filter_map(|e| e.perturbed_angle.map(|a| (e.label.clone(), a)))
            .collect()
    }

    /// Propagates the source photon through every element.
    pub fn propagate(&self) -> Result<OpticalState> {
        self.elements
            .iter()
            .try_fold(OpticalState::source(), |s, e| apply_element(&s, e))
    }

    pub fn run(&self, perturb: bool) -> Result<OpticalState> {
        if perturb {
            self.perturbed().propagate()
        } else {
            self.nominal().propagate()
        }
    }
}

fn preparation() -> Vec<OpticalElement> {
    vec![OpticalElement::swave(), OpticalElement::prep_project()]
}

/// Yields `cos 2θ |uHh⟩ + sin 2θ |dVv⟩`.
pub fn build_ghz_circuit(theta_deg: f64) -> OpticalCircuit {
    let mut elements = preparation();
    elements.extend([
        OpticalElement::hwp(theta_deg, PathSet::UP, "hwp_theta"),
        OpticalElement::pbs("pbs_path"),
        OpticalElement::dove_prism(PathSet::DOWN, None, "dp_down"),
    ]);
    OpticalCircuit::new(elements)
}

/// Yields `sin 2α |dHh⟩ + cos 2α cos 2β |uHv⟩ + cos 2α sin 2β |uVh⟩`.
pub fn build_w_circuit(alpha_deg: f64, beta_deg: f64) -> OpticalCircuit {
    let mut elements = preparation();
    elements.extend([
        OpticalElement::hwp(alpha_deg, PathSet::UP, "hwp_alpha"),
        OpticalElement::pbs("pbs_path"),
        OpticalElement::hwp45(PathSet::DOWN, "hwp_45"),
        OpticalElement::hwp(beta_deg, PathSet::UP, "hwp_beta"),
        // PBS3 and PBS4 enclose a Dove prism in the H arm of path u.
        OpticalElement::dove_prism(PathSet::UP, Some(Polarization::H), "dp_up_h_arm"),
    ]);
    OpticalCircuit::new(elements)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathBasis {
    SigmaZ,
    SigmaX,
}

/// Path measurement followed by exact spin-orbit tomography: the weighted
/// conditional `(A, B)` states of each detected path.
pub fn measure_path(state: &OpticalState, basis: PathBasis) -> Result<Ensemble> {
    let s = match basis {
        PathBasis::SigmaZ => *state,
        PathBasis::SigmaX => apply_element(state, &OpticalElement::beam_splitter())?,
    };
    measure(&s.to_tripartite()?, &Projector::sigma_z(Qubit::C))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitEstimate {
    pub sigma_z_entropy: f64,
    pub sigma_x_entropy: f64,
    /// Larger minus smaller of the two fixed-basis average entropies.
    pub abe: f64,
    /// Overlap with the zero-error output.
    pub fidelity: f64,
    pub angles: Vec<(String, f64)>,
}

pub fn estimate_abe_from_circuit(
    circuit: &OpticalCircuit,
    perturb: bool,
) -> Result<CircuitEstimate> {
    let used = if perturb {
        circuit.perturbed()
    } else {
        circuit.nominal()
    };
    let out = used.propagate()?;
    let ideal = circuit.nominal().propagate()?;
    let sz = ensemble_average_entropy(&measure_path(&out, PathBasis::SigmaZ)?)?;
    let sx = ensemble_average_entropy(&measure_path(&out, PathBasis::SigmaX)?)?;
    let fidelity = out.to_tripartite()?.fidelity(&ideal.to_tripartite()?);
    Ok(CircuitEstimate {
        sigma_z_entropy: sz,
        sigma_x_entropy: sx,
        abe: sz.max(sx) - sz.min(sx),
        fidelity,
        angles: used.waveplate_angles(),
    })
}

/// W-circuit angles `(α, β)` in degrees for weights `λ0 = sin 2α` on `|dHh⟩`
/// and `cos 2α cos 2β`, `cos 2α sin 2β` on `|uHv⟩`, `|uVh⟩`.
pub fn w_circuit_angles(lambda_d: f64, lambda_uhv: f64, lambda_uvh: f64) -> (f64, f64) {
    let alpha = 0.5 * lambda_d.clamp(-1.0, 1.0).asin();
    let beta = 0.5 * lambda_uvh.atan2(lambda_uhv);
    (alpha.to_degrees(), beta.to_degrees())
}
