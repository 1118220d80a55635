//! Nelder–Mead simplex minimization over R^n.
//!
//! The search objective has kinks where projected Radon partitions change, so
//! the solver uses a simplex method rather than finite-difference gradients.
//! Objectives may return +∞ (or NaN, treated as +∞) to veto a point.

/// Options for one Nelder–Mead run.
#[derive(Debug, Clone, Copy)]
pub struct NmOptions {
    pub max_iters: usize,
    /// Stop when the best-to-worst function spread falls below this.
    pub ftol: f64,
    /// Stop when the simplex diameter falls below this.
    pub xtol: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions {
            max_iters: 600,
            ftol: 1e-16,
            xtol: 1e-12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iters: usize,
    pub evals: usize,
}

const ALPHA: f64 = 1.0; // reflection
const GAMMA: f64 = 2.0; // expansion
const RHO: f64 = 0.5; // contraction
const SIGMA: f64 = 0.5; // shrink

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimizes `f` starting from `x0` with an axis-aligned initial simplex of
/// edge `step`. Deterministic for identical inputs.
pub fn minimize<F>(mut f: F, x0: &[f64], step: f64, opts: &NmOptions) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        sanitize(f(x))
    };

    if n == 0 {
        let fx = eval(x0, &mut evals);
        return NmResult {
            x: x0.to_vec(),
            fx,
            iters: 0,
            evals,
        };
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut iters = 0;
    while iters < opts.max_iters {
        iters += 1;
        // Order so index 0 is best, n is worst.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reorder: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalue: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reorder;
        values = revalue;

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if (spread.is_finite() && spread <= opts.ftol) || diameter <= opts.xtol {
            break;
        }

        // Centroid of all but the worst.
        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
        };

        // Reflect the worst through the centroid.
        let reflected = blend(&centroid, &simplex[n], -ALPHA);
        let fr = eval(&reflected, &mut evals);
        if fr < values[0] {
            let expanded = blend(&centroid, &simplex[n], -GAMMA);
            let fe = eval(&expanded, &mut evals);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        // Contract toward the better of worst/reflected.
        let (base, fbase) = if fr < values[n] {
            (reflected.clone(), fr)
        } else {
            (simplex[n].clone(), values[n])
        };
        let contracted = blend(&centroid, &base, RHO);
        let fc = eval(&contracted, &mut evals);
        if fc < fbase {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        // Shrink toward the best point.
        for i in 1..=n {
            simplex[i] = blend(&simplex[0], &simplex[i], SIGMA);
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty simplex");
    NmResult {
        x: simplex[best].clone(),
        fx: values[best],
        iters,
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] + 1.0).powi(2);
        let r = minimize(f, &[0.0, 0.0], 0.5, &NmOptions::default());
        assert!(r.fx < 1e-14, "fx = {}", r.fx);
        assert!((r.x[0] - 3.0).abs() < 1e-6);
        assert!((r.x[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn survives_infinite_regions() {
        // Objective vetoes the left half-plane.
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::INFINITY
            } else {
                (x[0] - 1.0).powi(2)
            }
        };
        let r = minimize(f, &[2.0], 0.5, &NmOptions::default());
        assert!((r.x[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn handles_rosenbrock_reasonably() {
        let f = |x: &[f64]| {
            let a = 1.0 - x[0];
            let b = x[1] - x[0] * x[0];
            a * a + 100.0 * b * b
        };
        let opts = NmOptions {
            max_iters: 5000,
            ..NmOptions::default()
        };
        let r = minimize(f, &[-1.2, 1.0], 0.5, &opts);
        assert!(r.fx < 1e-10, "fx = {}", r.fx);
    }

    #[test]
    fn zero_dimensional_input() {
        let r = minimize(|_| 7.0, &[], 0.1, &NmOptions::default());
        assert_eq!(r.fx, 7.0);
    }
}
