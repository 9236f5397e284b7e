//! Derivative-free simplex minimization for small smooth objectives.

/// Reflection / expansion / contraction / shrink simplex search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iter: 500,
            diameter_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evals: usize,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn lerp<const N: usize>(from: &[f64; N], to: &[f64; N], t: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = from[i] + t * (to[i] - from[i]);
    }
    out
}

fn dist<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl NelderMead {
    /// Minimizes `f` from an axis-aligned simplex of edge `step` at `start`.
    pub fn minimize<const N: usize, F>(&self, mut f: F, start: [f64; N], step: f64) -> Minimum<N>
    where
        F: FnMut(&[f64; N]) -> f64,
    {
        let mut evals = 0usize;
        let mut eval = |x: &[f64; N]| {
            evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
        simplex.push((start, eval(&start)));
        for i in 0..N {
            let mut p = start;
            p[i] += step;
            simplex.push((p, eval(&p)));
        }

        let mut iterations = 0;
        let mut converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].0;
            let diameter = simplex[1..]
                .iter()
                .map(|(p, _)| dist(&best, p))
                .fold(0.0, f64::max);
            if diameter < self.diameter_tol {
                converged = true;
                break;
            }
            if iterations >= self.max_iter {
                break;
            }
            iterations += 1;

            let mut centroid = [0.0; N];
            for (p, _) in &simplex[..N] {
                for i in 0..N {
                    centroid[i] += p[i] / N as f64;
                }
            }
            let (worst, worst_val) = simplex[N];
            let second_worst_val = simplex[N - 1].1;
            let best_val = simplex[0].1;

            let reflected = lerp(&centroid, &worst, -REFLECT);
            let fr = eval(&reflected);
            if fr < best_val {
                let expanded = lerp(&centroid, &worst, -EXPAND);
                let fe = eval(&expanded);
                simplex[N] = if fe < fr {
                    (expanded, fe)
                } else {
                    (reflected, fr)
                };
                continue;
            }
            if fr < second_worst_val {
                simplex[N] = (reflected, fr);
                continue;
            }
            // Contract towards the better of the worst vertex and its reflection.
            let (target, target_val) = if fr < worst_val {
                (reflected, fr)
            } else {
                (worst, worst_val)
            };
            let contracted = lerp(&centroid, &target, CONTRACT);
            let fc = eval(&contracted);
            if fc < target_val {
                simplex[N] = (contracted, fc);
                continue;
            }
            for vertex in simplex[1..].iter_mut() {
                let p = lerp(&best, &vertex.0, SHRINK);
                *vertex = (p, eval(&p));
            }
        }

        let (x, value) = simplex[0];
        Minimum {
            x,
            value,
            evals,
            iterations,
            converged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let m = NelderMead::default().minimize(
            |x: &[f64; 2]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.25).powi(2) + 2.0,
            [0.0, 0.0],
            0.5,
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.5).abs() < 1e-6);
        assert!((m.x[1] + 0.25).abs() < 1e-6);
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rosenbrock() {
        let nm = NelderMead {
            max_iter: 5000,
            diameter_tol: 1e-10,
        };
        let m = nm.minimize(
            |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            [-1.2, 1.0],
            0.1,
        );
        assert!(m.converged);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5,
            "{:?}",
            m.x
        );
    }

    #[test]
    fn flat_objective_still_terminates() {
        let m = NelderMead::default().minimize(|_: &[f64; 2]| 1.0, [0.3, 0.3], 0.1);
        assert!(m.converged);
        assert_eq!(m.value, 1.0);
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let nm = NelderMead {
            max_iter: 3,
            diameter_tol: 1e-12,
        };
        let m = nm.minimize(|x: &[f64; 2]| x[0] * x[0] + x[1] * x[1], [5.0, 5.0], 1.0);
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }

    #[test]
    fn nan_is_treated_as_worse() {
        let m = NelderMead::default().minimize(
            |x: &[f64; 2]| {
                if x[0] < 0.0 {
                    f64::NAN
                } else {
                    (x[0] - 0.5).powi(2) + x[1] * x[1]
                }
            },
            [1.0, 1.0],
            0.25,
        );
        assert!((m.x[0] - 0.5).abs() < 1e-6);
    }
}
