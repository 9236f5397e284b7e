//! Constructors for the three-qubit state families and seeded random sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{basis_index, c64, PureTripartiteState, C64};

/// Identifier of the generator behind every seeded draw in this crate.
pub const PRNG_ALGORITHM: &str = "ChaCha20Rng(rand_chacha 0.9)::seed_from_u64";

/// Slack allowed on normalization constraints of family parameters.
const PARAM_TOL: f64 = 1e-12;

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            constraint: "must be a finite nonnegative number",
        })
    }
}

fn dependent_coefficient(sum_sq: f64) -> Result<f64> {
    if sum_sq > 1.0 + PARAM_TOL {
        return Err(Error::Domain {
            name: "sum of squared coefficients",
            value: sum_sq,
            constraint: "must not exceed 1",
        });
    }
    Ok((1.0 - sum_sq).max(0.0).sqrt())
}

fn from_sparse(entries: &[(usize, C64)]) -> Result<PureTripartiteState> {
    let mut amps = [C64::default(); 8];
    for &(k, z) in entries {
        amps[k] = z;
    }
    PureTripartiteState::new(amps)
}

/// `λ1|000⟩ + λ2|111⟩` with `λ2 = √(1 − λ1²)`.
pub fn ghz_one_param(lambda1: f64) -> Result<PureTripartiteState> {
    if !(0.0..=1.0).contains(&lambda1) {
        return Err(Error::Domain {
            name: "lambda1",
            value: lambda1,
            constraint: "0 <= lambda1 <= 1",
        });
    }
    let lambda2 = dependent_coefficient(lambda1 * lambda1)?;
    from_sparse(&[
        (basis_index(0, 0, 0), c64(lambda1, 0.0)),
        (basis_index(1, 1, 1), c64(lambda2, 0.0)),
    ])
}

/// `λ0|100⟩ + λ3|010⟩ + λ2|001⟩` with `λ2 = √(1 − λ0² − λ3²)`.
pub fn w_two_param(lambda0: f64, lambda3: f64) -> Result<PureTripartiteState> {
    check_nonnegative("lambda0", lambda0)?;
    check_nonnegative("lambda3", lambda3)?;
    let lambda2 = dependent_coefficient(lambda0 * lambda0 + lambda3 * lambda3)?;
    from_sparse(&[
        (basis_index(1, 0, 0), c64(lambda0, 0.0)),
        (basis_index(0, 1, 0), c64(lambda3, 0.0)),
        (basis_index(0, 0, 1), c64(lambda2, 0.0)),
    ])
}

/// `λ0|000⟩ + λ1|100⟩ + λ2|101⟩ + λ3|110⟩`.
pub fn w_three_param(
    lambda0: f64,
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
) -> Result<PureTripartiteState> {
    for (name, v) in [
        ("lambda0", lambda0),
        ("lambda1", lambda1),
        ("lambda2", lambda2),
        ("lambda3", lambda3),
    ] {
        check_nonnegative(name, v)?;
    }
    let sum = lambda0 * lambda0 + lambda1 * lambda1 + lambda2 * lambda2 + lambda3 * lambda3;
    if (sum - 1.0).abs() > PARAM_TOL {
        return Err(Error::Domain {
            name: "sum of squared coefficients",
            value: sum,
            constraint: "must equal 1",
        });
    }
    from_sparse(&[
        (basis_index(0, 0, 0), c64(lambda0, 0.0)),
        (basis_index(1, 0, 0), c64(lambda1, 0.0)),
        (basis_index(1, 0, 1), c64(lambda2, 0.0)),
        (basis_index(1, 1, 0), c64(lambda3, 0.0)),
    ])
}

/// Coefficients of the generalized Schmidt form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtCoefficients {
    lambdas: [f64; 5],
    phi: f64,
}

impl SchmidtCoefficients {
    pub fn new(lambdas: [f64; 5], phi: f64) -> Result<Self> {
        for &l in &lambdas {
            check_nonnegative("lambda_i", l)?;
        }
        if !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(Error::Domain {
                name: "phi",
                value: phi,
                constraint: "0 <= phi <= pi",
            });
        }
        let sum: f64 = lambdas.iter().map(|l| l * l).sum();
        if (sum - 1.0).abs() > PARAM_TOL {
            return Err(Error::Domain {
                name: "sum of squared coefficients",
                value: sum,
                constraint: "must equal 1",
            });
        }
        Ok(Self { lambdas, phi })
    }

    pub fn lambdas(&self) -> &[f64; 5] {
        &self.lambdas
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `λ0|000⟩ + λ1 e^{iφ}|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩`.
pub fn acin_state(coeffs: &SchmidtCoefficients) -> Result<PureTripartiteState> {
    let [l0, l1, l2, l3, l4] = coeffs.lambdas;
    from_sparse(&[
        (basis_index(0, 0, 0), c64(l0, 0.0)),
        (basis_index(1, 0, 0), C64::from_polar(l1, coeffs.phi)),
        (basis_index(1, 0, 1), c64(l2, 0.0)),
        (basis_index(1, 1, 0), c64(l3, 0.0)),
        (basis_index(1, 1, 1), c64(l4, 0.0)),
    ])
}

/// Haar-random pure state: eight standard complex Gaussians, normalized.
pub fn haar_random(seed: u64) -> PureTripartiteState {
    let mut rng = seeded_rng(seed);
    let mut amps = [C64::default(); 8];
    for z in amps.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z = c64(re, im);
    }
    // A zero vector has probability zero under the Gaussian draw.
    PureTripartiteState::normalized(amps).expect("gaussian draw is nonzero")
}

/// Point drawn uniformly from the probability simplex of dimension `N - 1`.
fn uniform_simplex<const N: usize>(rng: &mut ChaCha20Rng) -> [f64; N] {
    let mut w = [0.0; N];
    for x in w.iter_mut() {
        *x = rng.sample(Exp1);
    }
    let total: f64 = w.iter().sum();
    w.map(|x| x / total)
}

/// Randomly parametrized members of each family, for scatter overlays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Haar,
    /// `λ1` uniform on `[0, 1]`.
    Ghz,
    /// `(λ0², λ3², λ2²)` uniform on the simplex.
    W2,
    /// `(λ0², λ1², λ2², λ3²)` uniform on the simplex.
    W3,
    /// `(λ0², …, λ4²)` uniform on the simplex with `φ = 0`.
    Acin,
}

impl Family {
    /// Sampling rule recorded in run metadata.
    pub fn sampling_rule(self) -> &'static str {
        match self {
            Family::Haar => "normalized iid standard complex gaussians",
            Family::Ghz => "lambda1 ~ U[0,1]",
            Family::W2 => "(lambda0^2, lambda3^2, lambda2^2) uniform on simplex",
            Family::W3 => "(lambda0^2..lambda3^2) uniform on simplex",
            Family::Acin => "(lambda0^2..lambda4^2) uniform on simplex, phi = 0",
        }
    }

    pub fn sample(self, seed: u64) -> Result<PureTripartiteState> {
        if self == Family::Haar {
            return Ok(haar_random(seed));
        }
        let mut rng = seeded_rng(seed);
        match self {
            Family::Haar => unreachable!(),
            Family::Ghz => ghz_one_param(rng.random_range(0.0..=1.0)),
            Family::W2 => {
                let [w0, w3, _] = uniform_simplex::<3>(&mut rng);
                w_two_param(w0.sqrt(), w3.sqrt())
            }
            Family::W3 => {
                let w = uniform_simplex::<4>(&mut rng).map(f64::sqrt);
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                let [a, b, c, d] = w.map(|x| x / norm);
                w_three_param(a, b, c, d)
            }
            Family::Acin => {
                let w = uniform_simplex::<5>(&mut rng).map(f64::sqrt);
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                acin_state(&SchmidtCoefficients::new(w.map(|x| x / norm), 0.0)?)
            }
        }
    }
}
