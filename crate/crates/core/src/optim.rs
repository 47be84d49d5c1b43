//! Deterministic Nelder–Mead simplex search.
//!
//! Box constraints are handled by the callers through smooth transforms, so the
//! search itself is unconstrained. Non-finite objective values count as `+inf`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop once `f(worst) - f(best) <= tolerance * (1 + |f(best)|)`.
    pub tolerance: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 2_000,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `objective` from `start`, with the initial simplex spanned by
/// `start + steps[i] * e_i`.
pub fn nelder_mead<F>(
    mut objective: F,
    start: &[f64],
    steps: &[f64],
    opts: NelderMeadOptions,
) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    if n == 0 {
        let value = eval(start, &mut evals);
        return Minimum {
            x: Vec::new(),
            value,
            evals,
            converged: true,
        };
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += if steps[i] != 0.0 { steps[i] } else { 0.05 };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while evals < opts.max_evals {
        // Stable ordering keeps ties resolved by vertex age, independent of float noise.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let best = values[0];
        let worst = values[n];
        if best.is_finite() && worst - best <= opts.tolerance * (1.0 + best.abs()) {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let along = |coef: f64, out: &mut Vec<f64>, worst: &[f64], centroid: &[f64]| {
            for i in 0..out.len() {
                out[i] = centroid[i] + coef * (centroid[i] - worst[i]);
            }
        };

        along(REFLECT, &mut trial, &simplex[n], &centroid);
        let reflected = eval(&trial, &mut evals);

        if reflected < values[0] {
            along(EXPAND, &mut trial2, &simplex[n], &centroid);
            let expanded = eval(&trial2, &mut evals);
            if expanded < reflected {
                simplex[n].clone_from(&trial2);
                values[n] = expanded;
            } else {
                simplex[n].clone_from(&trial);
                values[n] = reflected;
            }
            continue;
        }
        if reflected < values[n - 1] {
            simplex[n].clone_from(&trial);
            values[n] = reflected;
            continue;
        }

        // Contraction: outside if the reflection improved on the worst point, else inside.
        let (coef, reference) = if reflected < values[n] {
            (CONTRACT * REFLECT, reflected)
        } else {
            (-CONTRACT, values[n])
        };
        along(coef, &mut trial2, &simplex[n], &centroid);
        let contracted = eval(&trial2, &mut evals);
        if contracted < reference {
            simplex[n].clone_from(&trial2);
            values[n] = contracted;
            continue;
        }

        let anchor = simplex[0].clone();
        for k in 1..=n {
            for i in 0..n {
                simplex[k][i] = anchor[i] + SHRINK * (simplex[k][i] - anchor[i]);
            }
            values[k] = eval(&simplex[k], &mut evals);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        evals,
        converged,
    }
}

/// Logistic map of `u` onto the open interval `(lo, hi)`.
pub(crate) fn to_interval(u: f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) / (1.0 + (-u).exp())
}

/// Inverse of [`to_interval`]; `x` is clamped strictly inside the interval.
pub(crate) fn from_interval(x: f64, lo: f64, hi: f64) -> f64 {
    let eps = 1e-9 * (hi - lo);
    let p = ((x - lo) / (hi - lo)).clamp(eps, 1.0 - eps);
    (p / (1.0 - p)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_evals: 5_000,
            tolerance: 1e-14,
        };
        let res = nelder_mead(rosen, &[-1.2, 1.0], &[0.1, 0.1], opts);
        assert!(res.converged);
        assert!(
            (res.x[0] - 1.0).abs() < 1e-4 && (res.x[1] - 1.0).abs() < 1e-4,
            "{:?}",
            res.x
        );
    }

    #[test]
    fn respects_eval_budget() {
        let res = nelder_mead(
            |x: &[f64]| x.iter().map(|v| (v - 3.0).powi(2)).sum(),
            &[0.0; 6],
            &[0.5; 6],
            NelderMeadOptions {
                max_evals: 50,
                tolerance: 0.0,
            },
        );
        assert!(res.evals <= 50 + 7);
        assert!(!res.converged);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| if x[0] == 0.0 { 0.0 } else { 1.0 + x[0].abs() };
        let res = nelder_mead(f, &[0.0], &[1.0], NelderMeadOptions::default());
        assert_eq!(res.value, 0.0);
        assert_eq!(res.x, vec![0.0]);
    }

    #[test]
    fn nan_is_treated_as_infinite() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 1.0).powi(2)
            }
        };
        let res = nelder_mead(f, &[0.5], &[-1.0], NelderMeadOptions::default());
        assert!((res.x[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn interval_transform_round_trips() {
        for &x in &[0.1, 0.5, 0.93] {
            let u = from_interval(x, 0.0, 1.0);
            assert!((to_interval(u, 0.0, 1.0) - x).abs() < 1e-12);
        }
        let u = from_interval(0.95, 0.8, 0.98);
        assert!((to_interval(u, 0.8, 0.98) - 0.95).abs() < 1e-12);
    }
}
