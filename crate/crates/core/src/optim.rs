//! Minimal derivative-free simplex (Nelder-Mead) minimizer used by the
//! parametric fitting pipeline.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iters: usize,
    /// Convergence on the spread of function values across the simplex.
    pub f_tol: f64,
    /// Initial simplex edge, relative per coordinate (absolute fallback for
    /// coordinates near zero).
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { max_iters: 500, f_tol: 1e-12, initial_step: 0.25 }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn centroid(points: &[Vec<f64>], skip: usize) -> Vec<f64> {
    let dim = points[0].len();
    let mut c = vec![0.0; dim];
    for (i, p) in points.iter().enumerate() {
        if i == skip {
            continue;
        }
        for (cj, pj) in c.iter_mut().zip(p) {
            *cj += pj;
        }
    }
    let n = (points.len() - 1) as f64;
    c.iter_mut().for_each(|v| *v /= n);
    c
}

fn blend(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Standard Nelder-Mead with reflection/expansion/contraction/shrink
/// (coefficients 1, 2, 0.5, 0.5).
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &SimplexOptions,
) -> SimplexResult {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        let step = if p[i].abs() > 1e-8 { p[i].abs() * opts.initial_step } else { opts.initial_step };
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        iterations += 1;
        // order: best first, worst last
        let mut idx: Vec<usize> = (0..simplex.len()).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        values = idx.iter().map(|&i| values[i]).collect();

        if (values[dim] - values[0]).abs() <= opts.f_tol * (1.0 + values[0].abs()) {
            converged = true;
            break;
        }

        let worst = dim;
        let c = centroid(&simplex, worst);
        let reflected = blend(&c, &simplex[worst], -1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = blend(&c, &simplex[worst], -2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[worst - 1] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = if fr < values[worst] {
                blend(&c, &simplex[worst], -0.5)
            } else {
                blend(&c, &simplex[worst], 0.5)
            };
            let fc = f(&contracted);
            if fc < values[worst].min(fr) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..=dim {
                    simplex[i] = blend(&simplex[0], &simplex[i], 0.5);
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    SimplexResult { x: simplex[best].clone(), fx: values[best], iterations, converged }
}
