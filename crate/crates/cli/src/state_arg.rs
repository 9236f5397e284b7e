//! State arguments: a named family with parameters or eight raw amplitudes.

use abe_core::families::{
    acin_state, ghz_one_param, haar_random, w_three_param, w_two_param, SchmidtCoefficients,
};
use abe_core::state::{c64, PureTripartiteState, C64};
use clap::ValueEnum;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::expr::parse_real;

/// Raw amplitudes whose norm is off by more than this are rejected rather
/// than rescaled.
pub const AMPLITUDE_NORM_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    /// λ1
    Ghz,
    /// λ0 λ3
    W2,
    /// λ0 λ1 λ2 λ3
    W3,
    /// λ0 λ1 λ2 λ3 λ4 [φ]
    Acin,
    /// seed
    Haar,
    /// eight entries `re` or `re:im`, basis order |cab⟩ = 000..111
    Amplitudes,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateSpec {
    Ghz { lambda1: f64 },
    W2 { lambda0: f64, lambda3: f64 },
    W3 { lambdas: [f64; 4] },
    Acin { lambdas: [f64; 5], phi: f64 },
    Haar { seed: u64 },
    Amplitudes { re: [f64; 8], im: [f64; 8] },
}

fn reals<const N: usize>(kind: &str, args: &[String]) -> CliResult<[f64; N]> {
    if args.len() != N {
        return Err(CliError::Usage(format!(
            "`{kind}` takes {N} value(s), got {}",
            args.len()
        )));
    }
    let mut out = [0.0; N];
    for (slot, a) in out.iter_mut().zip(args) {
        *slot = parse_real(a)?;
    }
    Ok(out)
}

fn complex(arg: &str) -> CliResult<(f64, f64)> {
    match arg.split_once(':') {
        Some((re, im)) => Ok((parse_real(re)?, parse_real(im)?)),
        None => Ok((parse_real(arg)?, 0.0)),
    }
}

impl StateSpec {
    pub fn parse(kind: StateKind, args: &[String]) -> CliResult<Self> {
        Ok(match kind {
            StateKind::Ghz => {
                let [lambda1] = reals("ghz", args)?;
                StateSpec::Ghz { lambda1 }
            }
            StateKind::W2 => {
                let [lambda0, lambda3] = reals("w2", args)?;
                StateSpec::W2 { lambda0, lambda3 }
            }
            StateKind::W3 => StateSpec::W3 {
                lambdas: reals("w3", args)?,
            },
            StateKind::Acin => {
                let (lambdas, phi) = match args.len() {
                    5 => (reals("acin", args)?, 0.0),
                    6 => (reals("acin", &args[..5])?, parse_real(&args[5])?),
                    n => {
                        return Err(CliError::Usage(format!(
                            "`acin` takes 5 coefficients and an optional phase, got {n} value(s)"
                        )))
                    }
                };
                StateSpec::Acin { lambdas, phi }
            }
            StateKind::Haar => match args {
                [s] => StateSpec::Haar {
                    seed: s.parse().map_err(|_| {
                        CliError::Usage(format!(
                            "`haar` seed must be an unsigned integer, got `{s}`"
                        ))
                    })?,
                },
                _ => return Err(CliError::Usage("`haar` takes exactly one seed".into())),
            },
            StateKind::Amplitudes => {
                if args.len() != 8 {
                    return Err(CliError::Usage(format!(
                        "`amplitudes` takes 8 entries, got {}",
                        args.len()
                    )));
                }
                let mut re = [0.0; 8];
                let mut im = [0.0; 8];
                for (k, a) in args.iter().enumerate() {
                    (re[k], im[k]) = complex(a)?;
                }
                StateSpec::Amplitudes { re, im }
            }
        })
    }

    pub fn build(&self) -> CliResult<PureTripartiteState> {
        let state = match self {
            StateSpec::Ghz { lambda1 } => ghz_one_param(*lambda1),
            StateSpec::W2 { lambda0, lambda3 } => w_two_param(*lambda0, *lambda3),
            StateSpec::W3 {
                lambdas: [a, b, c, d],
            } => w_three_param(*a, *b, *c, *d),
            StateSpec::Acin { lambdas, phi } => {
                SchmidtCoefficients::new(*lambdas, *phi).and_then(|s| acin_state(&s))
            }
            StateSpec::Haar { seed } => Ok(haar_random(*seed)),
            StateSpec::Amplitudes { re, im } => {
                let amps: [C64; 8] = std::array::from_fn(|k| c64(re[k], im[k]));
                let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
                if (n - 1.0).abs() > AMPLITUDE_NORM_SLACK {
                    return Err(CliError::Usage(format!(
                        "invalid state: squared norm {n} differs from 1 by more than {AMPLITUDE_NORM_SLACK}"
                    )));
                }
                PureTripartiteState::normalized(amps)
            }
        };
        state.map_err(CliError::invalid_input)
    }
}
